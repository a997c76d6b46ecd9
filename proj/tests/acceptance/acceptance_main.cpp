// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is nonzero when a clause fails that is not listed under
// "Known failing clauses" in the README; those are still printed as FAIL.

#include <cmath>
#include <cstdio>
#include <iostream>

#include "canetoads/acceptance.hpp"
#include "../oracle.hpp"

namespace {

// Row-0 front of the closed-form action for D̄ = θ, G₀ = {x ≤ 0} × [0, 0.2].
double exact_row0_front(double t) {
  double lo = 0.0, hi = 6.0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (oracle::action_J(mid, 0.0, t, 0.0, 0.2) <= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

int main() {
  using namespace canetoads::acceptance;
  Options opt;
  opt.log = &std::cerr;
  Suite suite(opt);
  int unexpected = 0;
  for (const Criterion& c : suite.run_all()) {
    std::cout << format_line(c) << std::endl;
    if (c.id == 1) {
      std::printf("    reference: closed-form row-0 front at t=1 is %.4f; row-0 ratios %.4f %.4f %.4f\n",
                  exact_row0_front(1.0), exact_row0_front(0.5) / std::pow(0.5, 1.5), exact_row0_front(1.0),
                  exact_row0_front(2.0) / std::pow(2.0, 1.5));
    }
    if (!c.gate()) ++unexpected;
  }
  std::cout << (unexpected ? "acceptance: unexpected failures" : "acceptance: no failures beyond the known clauses")
            << std::endl;
  return unexpected ? 1 : 0;
}

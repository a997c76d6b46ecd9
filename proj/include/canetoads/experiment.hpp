#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "canetoads/config.hpp"
#include "canetoads/config_io.hpp"
#include "canetoads/front.hpp"
#include "canetoads/hj_solver.hpp"
#include "canetoads/io.hpp"
#include "canetoads/path_optimizer.hpp"
#include "canetoads/rd_solver.hpp"

namespace canetoads {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind {
  SimulatePDE,
  SolveHJ,
  SolveAction,
  Distance,
  FrontConstant,
  EpsSweep,
  SetEquivalence,
  Refinement
};

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SimulatePDE:
      return "simulate-pde";
    case ExperimentKind::SolveHJ:
      return "solve-hj";
    case ExperimentKind::SolveAction:
      return "solve-action";
    case ExperimentKind::Distance:
      return "distance";
    case ExperimentKind::FrontConstant:
      return "front-constant";
    case ExperimentKind::EpsSweep:
      return "eps-sweep";
    case ExperimentKind::SetEquivalence:
      return "set-equivalence";
    case ExperimentKind::Refinement:
      return "refinement";
  }
  return "?";
}

inline std::string to_string(hj::Equation e) {
  switch (e) {
    case hj::Equation::ObstacleI:
      return "I";
    case hj::Equation::ActionJ:
      return "J";
    case hj::Equation::GeometricW:
      return "w";
  }
  return "?";
}

/// A point (x, θ) and a time t at which J is evaluated.
struct Probe {
  double x = 0.0;
  double theta = 0.0;
  double t = 1.0;
};

struct Experiment {
  ExperimentKind kind = ExperimentKind::FrontConstant;
  RunConfig config;
  std::filesystem::path output_dir = "runs";
  /// Seeds the perturbed optimizer starts and random probes.
  std::uint64_t seed = 20240601;
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  std::vector<hj::Equation> equations{hj::Equation::ObstacleI, hj::Equation::ActionJ,
                                      hj::Equation::GeometricW};
  /// SolveAction probes; drawn at random when empty.
  std::vector<Probe> probes;
  std::size_t random_probes = 10;
  /// Refinement: grid cell-count multipliers applied to the configured grid.
  std::vector<std::size_t> refinement_levels{1, 2};
  /// Distance from ∂{I=0} below which EpsSweep ignores nodes.
  double probe_distance = 0.2;
  bool write_snapshots = true;
};

namespace pipeline {

using json = nlohmann::json;

/// Euclidean distance from every node to the nearest boundary node of the
/// mask or of its complement.
inline std::vector<double> boundary_distance(const NodeMask& m) {
  const HalfPlaneGrid& g = m.grid;
  NodeMask comp(g);
  for (std::size_t k = 0; k < g.size(); ++k) comp.inside[k] = m.inside[k] ? 0 : 1;
  std::vector<std::size_t> b = front::boundary_nodes(m);
  const std::vector<std::size_t> bc = front::boundary_nodes(comp);
  b.insert(b.end(), bc.begin(), bc.end());
  std::vector<double> out(g.size(), HUGE_VAL);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x = g.x(k % g.n_x());
    const double t = g.theta(k / g.n_x());
    double best = HUGE_VAL;
    for (std::size_t l : b) {
      const double dx = x - g.x(l % g.n_x());
      const double dt = t - g.theta(l / g.n_x());
      best = std::min(best, dx * dx + dt * dt);
    }
    out[k] = std::sqrt(best);
  }
  return out;
}

struct EpsResult {
  double eps = 0.0;
  std::size_t steps = 0;
  double dt = 0.0;
  /// sup |v^ε − I| over the probe set.
  double sup_error = 0.0;
  /// min u over probes in the interior of {I = 0}.
  double u_min_invaded = 1.0;
  /// max u over probes with I > 0.1.
  double u_max_empty = 0.0;
  ScalarField u;
  ScalarField v;
};

struct ThinFront {
  ScalarField limit_i;
  std::size_t probes = 0;
  std::vector<EpsResult> runs;
  [[nodiscard]] bool strictly_decreasing() const {
    for (std::size_t k = 1; k < runs.size(); ++k) {
      if (!(runs[k].sup_error < runs[k - 1].sup_error)) return false;
    }
    return true;
  }
};

/// Reaction-diffusion runs for each ε against the limit I on the same grid,
/// all at cfg.t_final; probes are nodes at distance ≥ probe_distance from ∂{I=0}.
inline ThinFront thin_front(RunConfig cfg, const std::vector<double>& eps_list, double probe_distance) {
  ThinFront out;
  hj::HJProblem pi = hj::HJProblem::from_config(cfg, hj::Equation::ObstacleI);
  out.limit_i = hj::solve(pi, cfg.t_final, cfg.t_final).back();
  const NodeMask zero = hj::zero_set(out.limit_i, 0.0, cfg.tol.zero_level);
  const std::vector<double> dist = boundary_distance(zero);
  std::vector<std::size_t> probes;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (dist[k] >= probe_distance) probes.push_back(k);
  }
  out.probes = probes.size();
  for (double eps : eps_list) {
    cfg.epsilon = eps;
    rd::RDState s = rd::run_to(rd::init_u0(cfg), cfg.t_final);
    EpsResult r;
    r.eps = eps;
    r.steps = s.steps;
    r.dt = s.dt;
    r.u = s.u;
    r.v = rd::hopf_cole(s);
    for (std::size_t k : probes) {
      r.sup_error = std::max(r.sup_error, std::abs(r.v.values[k] - out.limit_i.values[k]));
      if (zero.inside[k]) r.u_min_invaded = std::min(r.u_min_invaded, s.u.values[k]);
      if (out.limit_i.values[k] > 0.1) r.u_max_empty = std::max(r.u_max_empty, s.u.values[k]);
    }
    out.runs.push_back(std::move(r));
  }
  return out;
}

struct SetMetrics {
  double t = 0.0;
  /// Hausdorff distance of {J ≤ 0} and {d ≤ t}, grid units.
  double hausdorff_j_d = 0.0;
  /// Nodes of {I = 0} farther than one cell from {J ≤ 0}.
  std::size_t i_outside_j = 0;
  /// Nodes of {J ≤ 0} farther than one cell from {d ≤ t}.
  std::size_t j_outside_d = 0;
  /// max tanh(I) − w (only when w is supplied).
  double tanh_excess = -HUGE_VAL;
};

inline SetMetrics set_metrics(const ScalarField& i_field, const ScalarField& j_field, const ScalarField& d,
                              const ScalarField* w_field, double zero_tol) {
  SetMetrics m;
  m.t = j_field.time;
  const NodeMask zi = hj::zero_set(i_field, 0.0, zero_tol);
  const NodeMask zj = hj::zero_set(j_field, 0.0, 0.0);
  const NodeMask zd = path::w_from_distance(d, m.t);
  m.hausdorff_j_d = front::compare_sets(zj, zd).distance;
  m.i_outside_j = front::inclusion_violations(zi, zj, 1);
  m.j_outside_d = front::inclusion_violations(zj, zd, 1);
  if (w_field) m.tanh_excess = front::tanh_excess(i_field, *w_field);
  return m;
}

inline json to_json(const SetMetrics& m) {
  json j{{"t", m.t},
         {"hausdorff_J_d_cells", m.hausdorff_j_d},
         {"I_zero_outside_J_nodes", m.i_outside_j},
         {"J_zero_outside_d_nodes", m.j_outside_d}};
  if (m.tanh_excess > -HUGE_VAL) j["tanh_I_minus_w_max"] = m.tanh_excess;
  return j;
}

inline json to_json(const front::FrontCurve& c) {
  return json{{"t", c.t}, {"x_front", c.x}, {"source", front::to_string(c.source)}, {"level", c.level}};
}

inline json to_json(const front::LawFit& f) {
  return json{{"c", f.c}, {"alpha", f.alpha}, {"log_correction", f.log_correction}, {"residual", f.residual}};
}

/// Limit-problem solve of one equation under a run configuration.
inline std::vector<ScalarField> solve_limit(const RunConfig& cfg, hj::Equation eq, hj::SolveStats* stats = nullptr) {
  hj::HJProblem p = hj::HJProblem::from_config(cfg, eq);
  return hj::solve(p, cfg.t_final, cfg.cadence, stats);
}

inline double closed_form_flat_j(double theta, double cap, double t) {
  const double r = std::max(theta - cap, 0.0);
  return r * r / (4.0 * t) - t;
}

}  // namespace pipeline

struct Manifest {
  nlohmann::json json;
  std::filesystem::path dir;
  /// 0 pass, 1 acceptance failure, 2 configuration error, 3 numerical error.
  int exit_status = 0;
};

namespace detail {

inline std::filesystem::path fresh_dir(const std::filesystem::path& root, const std::string& kind) {
  namespace fs = std::filesystem;
  fs::create_directories(root);
  for (int k = 1; k < 100000; ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "-%03d", k);
    const fs::path p = root / (kind + buf);
    if (fs::create_directory(p)) return p;
  }
  throw ConfigError("output: no free run directory under " + root.string());
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline nlohmann::json metric(double value, double threshold, bool pass) {
  return {{"value", value}, {"threshold", threshold}, {"pass", pass}};
}

}  // namespace detail

/// Runs one experiment into a fresh directory `<output_dir>/<kind>-NNN`
/// (never overwriting earlier runs) and writes manifest.json there. Solver
/// and configuration errors are recorded in the manifest and mapped to
/// exit_status 2 or 3.
inline Manifest run_experiment(const Experiment& exp) {
  namespace fs = std::filesystem;
  using nlohmann::json;
  Manifest man;
  man.dir = detail::fresh_dir(exp.output_dir, to_string(exp.kind));
  json& m = man.json;
  m["kind"] = to_string(exp.kind);
  m["seed"] = exp.seed;
  m["versions"] = {{"canetoads", kVersion}, {"compiler", __VERSION__}, {"cplusplus", __cplusplus}};
  m["config"] = serialize(exp.config);
  io::write_text(man.dir / "config.ini", serialize(exp.config));
  json& metrics = m["metrics"];
  metrics = json::object();
  json& timings = m["timings_s"];
  detail::Stopwatch clock;
  bool pass = true;
  const RunConfig& cfg = exp.config;

  try {
    validate(cfg);
    switch (exp.kind) {
      case ExperimentKind::SimulatePDE: {
        rd::RDState s = rd::init_u0(cfg);
        const std::vector<ScalarField> snaps = rd::run_with_snapshots(s, cfg.t_final, cfg.cadence);
        timings["rd"] = clock.lap();
        double worst = 0.0;
        front::FrontCurve curve;
        curve.source = front::Source::ULevel;
        curve.level = 0.5;
        for (const ScalarField& u : snaps) {
          worst = std::max(worst, u.invariant_violation());
          if (exp.write_snapshots) {
            io::write_rd_snapshot(man.dir / io::snapshot_name(Quantity::U, u.time), u,
                                  rd::hopf_cole(u, s.eps));
          }
          if (u.time > 0.0) {
            curve.t.push_back(u.time);
            try {
              curve.x.push_back(front::extract_front_all_rows(u, 0.5).x);
            } catch (const OutOfDomainError&) {
              curve.x.push_back(std::nan(""));
            }
          }
        }
        io::write_front_curve(man.dir / "front_u.csv", curve);
        metrics["steps"] = s.steps;
        metrics["dt"] = s.dt;
        metrics["max_principle_violation"] = detail::metric(worst, 1e-12, worst <= 1e-12);
        metrics["front_u"] = pipeline::to_json(curve);
        pass = worst <= 1e-12;
        break;
      }
      case ExperimentKind::SolveHJ: {
        for (hj::Equation eq : exp.equations) {
          hj::SolveStats st;
          const std::vector<ScalarField> snaps = pipeline::solve_limit(cfg, eq, &st);
          const std::string name = to_string(eq);
          timings["solve_" + name] = clock.lap();
          json entry{{"steps", st.steps}, {"min_dt", st.min_dt}, {"max_dt", st.max_dt}};
          const double level = eq == hj::Equation::GeometricW ? 0.5 : (eq == hj::Equation::ObstacleI ? cfg.tol.zero_level : 0.0);
          front::FrontCurve curve = front::front_curve(snaps, {}, level);
          entry["front"] = pipeline::to_json(curve);
          if (curve.t.size() >= 4) entry["law_fit"] = pipeline::to_json(front::fit_law(curve, front::LawForm::Power));
          json residuals = json::array();
          for (std::size_t k = 0; k < snaps.size(); ++k) {
            if (exp.write_snapshots) io::write_field(man.dir / io::snapshot_name(snaps[k].tag, snaps[k].time), snaps[k]);
            if (k > 0) {
              const hj::BoundaryResidual r = hj::boundary_residual(eq, snaps[k - 1], snaps[k]);
              residuals.push_back({{"t", snaps[k].time}, {"super", r.super}, {"sub", r.sub}});
            }
          }
          io::write_front_curve(man.dir / ("front_" + name + ".csv"), curve);
          io::write_row_fronts(man.dir / ("row_fronts_" + name + ".csv"), snaps.back(), level);
          entry["boundary_residuals"] = residuals;
          double inv = 0.0;
          for (const ScalarField& f : snaps) inv = std::max(inv, f.invariant_violation());
          entry["range_invariant_violation"] = detail::metric(inv, cfg.tol.scheme, inv <= cfg.tol.scheme);
          pass = pass && inv <= cfg.tol.scheme;
          metrics[name] = entry;
        }
        break;
      }
      case ExperimentKind::SolveAction: {
        std::vector<Probe> probes = exp.probes;
        if (probes.empty()) {
          std::mt19937_64 rng(exp.seed);
          std::uniform_real_distribution<double> ux(cfg.region.x_right(), cfg.grid.x_max());
          std::uniform_real_distribution<double> ut(0.0, cfg.grid.theta_max());
          for (std::size_t k = 0; k < exp.random_probes; ++k) probes.push_back({ux(rng), ut(rng), cfg.t_final});
        }
        path::ActionOptions opt;
        opt.segments = cfg.path_nodes;
        opt.theta_floor = cfg.grid.h_theta() / 10.0;
        opt.seed = exp.seed;
        opt.tol = cfg.tol.optimizer;
        json list = json::array();
        const DiffusionProfile lim = cfg.profile;
        for (std::size_t k = 0; k < probes.size(); ++k) {
          const Probe& p = probes[k];
          const path::ActionResult r = path::minimize_action(p.x, p.theta, p.t, lim, cfg.region, opt);
          const double bound = path::trait_bound(r.path, r.cost);
          const double dip = path::trait_dip(r.path);
          io::write_trajectory(man.dir / ("trajectory_" + std::to_string(k) + ".csv"), r.path);
          list.push_back({{"x", p.x},
                          {"theta", p.theta},
                          {"t", p.t},
                          {"J", r.cost},
                          {"geodesic_length", path::geodesic_length(r.path, lim)},
                          {"iterations", r.iterations},
                          {"iteration_limit_warning", r.iteration_limit},
                          {"max_theta", r.path.max_theta()},
                          {"trait_bound", bound},
                          {"trait_dip", dip}});
          pass = pass && r.path.max_theta() <= bound + 1e-12 && dip <= cfg.tol.scheme;
        }
        timings["optimize"] = clock.lap();
        metrics["probes"] = list;
        break;
      }
      case ExperimentKind::Distance: {
        path::GeodesicProblem gp{cfg.profile, cfg.region, cfg.grid};
        std::size_t cycles = 0;
        ScalarField d = path::eikonal_distance(gp, &cycles);
        timings["sweep"] = clock.lap();
        io::write_field(man.dir / "d.csv", d);
        json masks = json::array();
        for (double t = cfg.cadence; t <= cfg.t_final + 1e-12; t += cfg.cadence) {
          const NodeMask mk = path::w_from_distance(d, t);
          char buf[48];
          std::snprintf(buf, sizeof buf, "mask_d_le_%.6f.csv", t);
          io::write_mask(man.dir / buf, mk);
          masks.push_back({{"t", t}, {"nodes", mk.count()}});
        }
        metrics["sweep_cycles"] = cycles;
        metrics["masks"] = masks;
        break;
      }
      case ExperimentKind::FrontConstant: {
        hj::SolveStats st;
        const std::vector<ScalarField> snaps = pipeline::solve_limit(cfg, hj::Equation::ActionJ, &st);
        timings["solve_J"] = clock.lap();
        const front::FrontCurve row0 = front::front_curve(snaps, {0});
        const front::FrontCurve all = front::front_curve(snaps, {});
        io::write_front_curve(man.dir / "front_J_row0.csv", row0);
        io::write_front_curve(man.dir / "front_J.csv", all);
        io::write_row_fronts(man.dir / "row_fronts_J.csv", snaps.back(), 0.0);
        json ratios = json::array();
        for (std::size_t k = 0; k < all.t.size(); ++k) {
          ratios.push_back({{"t", all.t[k]},
                            {"row0_over_t15", row0.x[k] / std::pow(row0.t[k], 1.5)},
                            {"all_rows_over_t15", all.x[k] / std::pow(all.t[k], 1.5)}});
        }
        metrics["front_row0"] = pipeline::to_json(row0);
        metrics["front_all_rows"] = pipeline::to_json(all);
        metrics["ratios"] = ratios;
        metrics["steps"] = st.steps;
        for (std::size_t k = 0; k < row0.t.size(); ++k) {
          if (std::abs(row0.t[k] - 1.0) < 1e-9) {
            const double err = std::abs(row0.x[k] - cfg.region.x_right() - 4.0 / 3.0);
            metrics["x_front_t1"] = row0.x[k];
            metrics["abs_x_front_minus_4_3"] = detail::metric(err, 0.07, err <= 0.07);
            metrics["x_front_t1_all_rows"] = all.x[k];
            pass = pass && err <= 0.07;
          }
        }
        if (all.t.size() >= 4) metrics["law_fit_all_rows"] = pipeline::to_json(front::fit_law(all, front::LawForm::Power));
        if (row0.t.size() >= 4) metrics["law_fit_row0"] = pipeline::to_json(front::fit_law(row0, front::LawForm::Power));
        break;
      }
      case ExperimentKind::EpsSweep: {
        const pipeline::ThinFront tf = pipeline::thin_front(cfg, exp.eps_list, exp.probe_distance);
        timings["sweep"] = clock.lap();
        if (exp.write_snapshots) io::write_field(man.dir / io::snapshot_name(Quantity::I, tf.limit_i.time), tf.limit_i);
        json runs = json::array();
        for (const pipeline::EpsResult& r : tf.runs) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "rd_eps%.6g_t%.6f.csv", r.eps, r.u.time);
          if (exp.write_snapshots) io::write_rd_snapshot(man.dir / buf, r.u, r.v);
          runs.push_back({{"eps", r.eps},
                          {"steps", r.steps},
                          {"dt", r.dt},
                          {"sup_abs_v_minus_I", r.sup_error},
                          {"u_min_in_I_zero", r.u_min_invaded},
                          {"u_max_in_I_gt_0.1", r.u_max_empty}});
        }
        metrics["probe_nodes"] = tf.probes;
        metrics["runs"] = runs;
        metrics["sup_error_strictly_decreasing"] = tf.strictly_decreasing();
        pass = tf.strictly_decreasing();
        break;
      }
      case ExperimentKind::SetEquivalence: {
        const auto i_snaps = pipeline::solve_limit(cfg, hj::Equation::ObstacleI);
        const auto j_snaps = pipeline::solve_limit(cfg, hj::Equation::ActionJ);
        const auto w_snaps = pipeline::solve_limit(cfg, hj::Equation::GeometricW);
        timings["solve"] = clock.lap();
        path::GeodesicProblem gp{cfg.profile, cfg.region, cfg.grid};
        const ScalarField d = path::eikonal_distance(gp);
        timings["sweep"] = clock.lap();
        json list = json::array();
        for (std::size_t k = 1; k < j_snaps.size(); ++k) {
          const pipeline::SetMetrics sm = pipeline::set_metrics(i_snaps[k], j_snaps[k], d, &w_snaps[k], cfg.tol.zero_level);
          json e = pipeline::to_json(sm);
          const bool ok = sm.hausdorff_j_d <= 2.0 && sm.i_outside_j == 0 && sm.j_outside_d == 0 && sm.tanh_excess <= 1e-3;
          e["pass"] = ok;
          pass = pass && ok;
          ScalarField dt = d;
          dt.time = j_snaps[k].time;
          e["fronts"] = {{"I", front::extract_front_all_rows(i_snaps[k], cfg.tol.zero_level).x},
                         {"J", front::extract_front_all_rows(j_snaps[k], 0.0).x},
                         {"w", front::extract_front_all_rows(w_snaps[k], 0.5).x},
                         {"d", front::extract_front_all_rows(dt, dt.time).x}};
          list.push_back(e);
        }
        metrics["snapshots"] = list;
        break;
      }
      case ExperimentKind::Refinement: {
        json levels = json::array();
        const HalfPlaneGrid& g0 = cfg.grid;
        for (std::size_t f : exp.refinement_levels) {
          RunConfig c = cfg;
          c.grid = HalfPlaneGrid(g0.x_min(), g0.x_max(), g0.theta_max(), (g0.n_x() - 1) * f + 1,
                                 (g0.n_theta() - 1) * f + 1);
          const auto snaps = pipeline::solve_limit(c, hj::Equation::ActionJ);
          const ScalarField& last = snaps.back();
          levels.push_back({{"factor", f},
                            {"n_x", c.grid.n_x()},
                            {"n_theta", c.grid.n_theta()},
                            {"x_front_row0", front::extract_front(last, 0.0, 0)},
                            {"x_front_all_rows", front::extract_front_all_rows(last, 0.0).x}});
          timings["level_" + std::to_string(f)] = clock.lap();
        }
        metrics["levels"] = levels;
        break;
      }
    }
    man.exit_status = pass ? 0 : 1;
  } catch (const ConfigError& e) {
    m["error"] = {{"type", "configuration"}, {"message", e.what()}};
    man.exit_status = 2;
  } catch (const DomainError& e) {
    m["error"] = {{"type", "configuration"}, {"message", e.what()}};
    man.exit_status = 2;
  } catch (const UnsupportedError& e) {
    m["error"] = {{"type", "configuration"}, {"message", e.what()}};
    man.exit_status = 2;
  } catch (const NumericalError& e) {
    m["error"] = {{"type", "numerical"}, {"message", e.what()}};
    man.exit_status = 3;
  } catch (const OutOfDomainError& e) {
    m["error"] = {{"type", "numerical"}, {"message", e.what()}};
    man.exit_status = 3;
  }
  m["pass"] = man.exit_status == 0;
  m["exit_status"] = man.exit_status;
  io::write_text(man.dir / "manifest.json", m.dump(2) + "\n");
  return man;
}

}  // namespace canetoads

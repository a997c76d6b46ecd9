// Command-line front end: one subcommand per experiment kind plus `check`.
// Exit status: 0 pass, 1 acceptance failure, 2 configuration error, 3 numerical error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "canetoads/acceptance.hpp"
#include "canetoads/config_io.hpp"
#include "canetoads/experiment.hpp"

namespace {

using namespace canetoads;

RunConfig load_config(const std::string& path) {
  if (path.empty()) return RunConfig{};
  std::ifstream in(path);
  if (!in) throw ConfigError("--config: cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

struct Common {
  std::string config;
  std::string out = "runs";
  std::uint64_t seed = 20240601;
  bool no_snapshots = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("-c,--config", c.config, "run configuration (INI); defaults when omitted");
  app->add_option("-o,--out", c.out, "output root; each run gets a fresh <kind>-NNN directory")->capture_default_str();
  app->add_option("--seed", c.seed, "seed for random probes and optimizer restarts")->capture_default_str();
  app->add_flag("--no-snapshots", c.no_snapshots, "skip full-field CSV snapshots");
}

int run(ExperimentKind kind, const Common& c, const std::function<void(Experiment&)>& tweak = {}) {
  Experiment e;
  e.kind = kind;
  e.config = load_config(c.config);
  e.output_dir = c.out;
  e.seed = c.seed;
  e.write_snapshots = !c.no_snapshots;
  if (tweak) tweak(e);
  const Manifest m = run_experiment(e);
  std::cout << m.dir.string() << "/manifest.json\n";
  if (m.json.contains("error")) std::cerr << "error: " << m.json["error"]["message"].get<std::string>() << "\n";
  return m.exit_status;
}

std::vector<double> split_reals(const std::string& key, const std::string& text) {
  return canetoads::detail::parse_list(key, text, ',');
}

hj::Equation parse_equation(const std::string& s) {
  if (s == "I") return hj::Equation::ObstacleI;
  if (s == "J") return hj::Equation::ActionJ;
  if (s == "w") return hj::Equation::GeometricW;
  throw ConfigError("--equation: expected I, J, w or all");
}

int analyze_files(const std::vector<std::string>& files, const std::string& out, std::optional<std::size_t> row,
                  std::optional<double> level, const std::string& form) {
  std::vector<ScalarField> snaps;
  for (const auto& f : files) snaps.push_back(io::read_field(f));
  std::sort(snaps.begin(), snaps.end(), [](const ScalarField& a, const ScalarField& b) { return a.time < b.time; });
  const front::FrontCurve curve = front::front_curve(snaps, {row}, level);
  const auto dir = canetoads::detail::fresh_dir(out, "analyze-front");
  io::write_front_curve(dir / "front.csv", curve);
  nlohmann::json m{{"kind", "analyze-front"}, {"inputs", files}, {"front", pipeline::to_json(curve)},
                   {"monotone", curve.monotone()}};
  if (curve.t.size() >= 4) {
    const front::LawForm lf = form == "power_sqrt_log" ? front::LawForm::PowerSqrtLog : front::LawForm::Power;
    const front::LawFit fit = front::fit_law(curve, lf);
    m["law_fit"] = pipeline::to_json(fit);
    m["law_fit"]["in_sanity_window"] = fit.in_sanity_window();
  }
  m["exit_status"] = 0;
  io::write_text(dir / "manifest.json", m.dump(2) + "\n");
  std::cout << (dir / "manifest.json").string() << "\n";
  return 0;
}

int check(const std::string& out, std::uint64_t seed, std::size_t cases) {
  acceptance::Options opt;
  opt.seed = seed;
  opt.property_cases = cases;
  opt.log = &std::cerr;
  acceptance::Suite suite(opt);
  nlohmann::json m{{"kind", "check"}, {"seed", seed}, {"versions", {{"canetoads", kVersion}, {"compiler", __VERSION__}}}};
  bool all = true;
  for (const acceptance::Criterion& c : suite.run_all()) {
    std::cout << acceptance::format_line(c) << std::endl;
    m["criteria"][std::to_string(c.id)] = c.metrics;
    all = all && c.pass();
  }
  m["pass"] = all;
  m["exit_status"] = all ? 0 : 1;
  const auto dir = canetoads::detail::fresh_dir(out, "check");
  io::write_text(dir / "manifest.json", m.dump(2) + "\n");
  std::cout << (dir / "manifest.json").string() << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cane-toad invasion fronts: reaction-diffusion and limit solvers"};
  app.require_subcommand(1);

  Common pde, hjc, act, dist, front_c, sweep_c;
  add_common(app.add_subcommand("simulate-pde", "evolve the reaction-diffusion equation"), pde);

  auto* hj_cmd = app.add_subcommand("solve-hj", "solve the limit problems I, J and w");
  add_common(hj_cmd, hjc);
  std::string equation = "all";
  hj_cmd->add_option("-e,--equation", equation, "I, J, w or all")->capture_default_str();

  auto* act_cmd = app.add_subcommand("solve-action", "minimize the action to probe points");
  add_common(act_cmd, act);
  std::vector<std::string> probes;
  std::size_t random_probes = 10;
  act_cmd->add_option("-p,--probe", probes, "probe 'x,theta,t' (repeatable); random probes when absent");
  act_cmd->add_option("-n,--random", random_probes, "number of random probes")->capture_default_str();

  add_common(app.add_subcommand("distance", "metric distance to the initial region (fast sweeping)"), dist);

  auto* fr_cmd = app.add_subcommand("analyze-front", "front curve and law fit from a config or snapshot files");
  add_common(fr_cmd, front_c);
  std::vector<std::string> files;
  std::optional<std::size_t> row;
  std::optional<double> level;
  std::string form = "power";
  fr_cmd->add_option("-s,--snapshots", files, "field CSV snapshots to analyze instead of solving");
  fr_cmd->add_option("--row", row, "trait row (default: supremum over rows)");
  fr_cmd->add_option("--level", level, "level defining the invaded set");
  fr_cmd->add_option("--form", form, "power or power_sqrt_log")->check(CLI::IsMember({"power", "power_sqrt_log"}));

  auto* sw_cmd = app.add_subcommand("sweep", "epsilon sweep, set equivalence or grid refinement");
  add_common(sw_cmd, sweep_c);
  std::string sweep_kind = "eps";
  std::string eps_list = "0.2,0.1,0.05";
  std::string levels = "1,2";
  double probe_distance = 0.2;
  sw_cmd->add_option("-k,--kind", sweep_kind, "eps, sets or refinement")
      ->check(CLI::IsMember({"eps", "sets", "refinement"}))
      ->capture_default_str();
  sw_cmd->add_option("--eps", eps_list, "comma-separated epsilons")->capture_default_str();
  sw_cmd->add_option("--levels", levels, "comma-separated grid refinement factors")->capture_default_str();
  sw_cmd->add_option("--probe-distance", probe_distance, "minimum distance of probes from the limit front")
      ->capture_default_str();

  auto* ck_cmd = app.add_subcommand("check", "run the acceptance suite");
  std::string check_out = "runs";
  std::uint64_t check_seed = 20240601;
  std::size_t cases = 60;
  ck_cmd->add_option("-o,--out", check_out, "output root")->capture_default_str();
  ck_cmd->add_option("--seed", check_seed, "seed for probes and random cases")->capture_default_str();
  ck_cmd->add_option("--cases", cases, "random property cases")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("simulate-pde")) return run(ExperimentKind::SimulatePDE, pde);
    if (app.got_subcommand("solve-hj")) {
      return run(ExperimentKind::SolveHJ, hjc, [&](Experiment& e) {
        if (equation != "all") e.equations = {parse_equation(equation)};
      });
    }
    if (app.got_subcommand("solve-action")) {
      return run(ExperimentKind::SolveAction, act, [&](Experiment& e) {
        e.random_probes = random_probes;
        for (const auto& p : probes) {
          const std::vector<double> v = split_reals("--probe", p);
          if (v.size() != 3) throw ConfigError("--probe: expected 'x,theta,t'");
          e.probes.push_back({v[0], v[1], v[2]});
        }
      });
    }
    if (app.got_subcommand("distance")) return run(ExperimentKind::Distance, dist);
    if (app.got_subcommand("analyze-front")) {
      if (!files.empty()) return analyze_files(files, front_c.out, row, level, form);
      return run(ExperimentKind::FrontConstant, front_c);
    }
    if (app.got_subcommand("sweep")) {
      const ExperimentKind k = sweep_kind == "eps" ? ExperimentKind::EpsSweep
                               : sweep_kind == "sets" ? ExperimentKind::SetEquivalence
                                                      : ExperimentKind::Refinement;
      return run(k, sweep_c, [&](Experiment& e) {
        e.eps_list = split_reals("--eps", eps_list);
        e.refinement_levels.clear();
        for (double f : split_reals("--levels", levels)) {
          if (!(f >= 1.0) || f != std::floor(f)) throw ConfigError("--levels: positive integers expected");
          e.refinement_levels.push_back(static_cast<std::size_t>(f));
        }
        e.probe_distance = probe_distance;
      });
    }
    if (app.got_subcommand("check")) return check(check_out, check_seed, cases);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const OutOfDomainError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

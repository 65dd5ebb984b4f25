// Command-line driver: dispersion roots, single fronts, speed search, D-sweeps, checks.

#include "roadfront/asymptotics.hpp"
#include "roadfront/config.hpp"
#include "roadfront/diagnostics.hpp"
#include "roadfront/dispersion.hpp"
#include "roadfront/snapshot.hpp"
#include "roadfront/speed.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

using namespace roadfront;

namespace {

enum Exit { kOk = 0, kConfig = 2, kSolver = 3, kDiagnostics = 4 };

const char* kFooter = R"(Commands:
  dispersion   tail exponent at speed c; CSV columns: lambda,beta,y,h
  wave         front at fixed speed c; writes a JSON snapshot
  speed        pinned speed c_M by bisection; writes a JSON snapshot
  sweep        speeds over D_list in the rescaled frame; CSV columns:
               D,c_rescaled,c_physical,lambda,iterations,identity_residual,
               tail_fit_error,status  followed by a '# c_inf = ...' summary line
  limit-speed  speed of the limit system; prints c and writes a snapshot
  check        diagnostics of a snapshot (--snapshot PATH), one 'key = value' per line

Every configuration key can be given in the --config file as 'key = value'
or on the command line as '--key value'; flags win over the file.

Exit codes: 0 ok, 2 configuration error, 3 solver error, 4 diagnostics failure.)";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot read '" + path + "'"});
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ostream& precise(std::ostream& os) {
  return os << std::setprecision(std::numeric_limits<double>::max_digits10);
}

/// Opens --out when given, stdout otherwise.
struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw ConfigError({"out: cannot write '" + path + "'"});
    os = &file;
  }
};

std::string snapshot_path(const RunConfig& cfg, const std::string& fallback) {
  return cfg.out.empty() ? fallback : cfg.out;
}

std::map<std::string, double> report_with_pin(const FrontSolution& sol, const RunConfig& cfg,
                                              const ReactionCurve& curve) {
  auto rep = diagnose(sol, curve).values;
  rep["pin_residual"] = pin_value(sol.u, sol.grid, sol.params, make_pin(sol.grid, cfg.theta));
  for (const auto& [k, x] : sol.diagnostics) rep.emplace("solver_" + k, x);
  return rep;
}

int run_dispersion(const RunConfig& cfg) {
  const auto root = solve_lambda(cfg.c, cfg.regime_params(), 1e-12, cfg.ny);
  Output out(cfg.out);
  auto& os = precise(*out.os);
  os << "lambda,beta,y,h\n";
  for (int i = 0; i < cfg.ny; ++i) {
    const double y = -cfg.params.L + cfg.params.L * i / (cfg.ny - 1);
    os << root.lambda << ',' << root.beta << ',' << y << ',' << root.h_samples[i] << '\n';
  }
  return kOk;
}

int run_wave(const RunConfig& cfg) {
  const auto curve = make_reaction(cfg.theta);
  const auto sol = monotone_solve(cfg.c, curve, cfg.grid(), cfg.regime_params(), cfg.regime,
                                  cfg.monotone_options());
  const auto rep = report_with_pin(sol, cfg, curve);
  const auto path = snapshot_path(cfg, "wave.json");
  write_snapshot(path, make_snapshot(cfg, "wave", sol, rep));
  precise(std::cout) << "c = " << sol.c << "\npin_residual = " << rep.at("pin_residual")
                     << "\nsnapshot = " << path << "\n";
  return kOk;
}

int report_speed(const RunConfig& cfg, const std::string& command, const SpeedResult& res,
                 const ReactionCurve& curve) {
  auto rep = report_with_pin(res.front, cfg, curve);
  rep["bracket_lo"] = res.bracket.c_lo;
  rep["bracket_hi"] = res.bracket.c_hi;
  const auto path = snapshot_path(cfg, command + ".json");
  write_snapshot(path, make_snapshot(cfg, command, res.front, rep));
  precise(std::cout) << "c = " << res.c << "\nbracket = [" << res.bracket.c_lo << ", "
                     << res.bracket.c_hi << "]\nsnapshot = " << path << "\n";
  return kOk;
}

int run_speed(const RunConfig& cfg) {
  const auto curve = make_reaction(cfg.theta);
  const auto res =
      find_speed(curve, cfg.grid(), cfg.regime_params(), cfg.regime, cfg.speed_options());
  return report_speed(cfg, "speed", res, curve);
}

int run_limit_speed(const RunConfig& cfg) {
  const auto curve = make_reaction(cfg.theta);
  RunConfig limit = cfg;
  limit.regime = Regime::Limit;
  const auto res = limit_speed(curve, limit.grid(), limit.params, limit.speed_options());
  return report_speed(limit, "limit-speed", res, curve);
}

int run_sweep(const RunConfig& cfg) {
  const auto curve = make_reaction(cfg.theta);
  const auto records =
      sweep_D(cfg.D_list, curve, cfg.grid(), cfg.params, cfg.speed_options(), cfg.workers);
  Output out(cfg.out);
  write_sweep_csv(*out.os, records);
  bool failed = false;
  for (const auto& r : records) {
    if (!r.ok) {
      std::cerr << "error[solver]: D = " << r.D << ": " << r.error << "\n";
      failed = true;
    }
  }
  try {
    const auto e = extrapolate_cinf(records);
    precise(*out.os) << "# c_inf = " << e.c_inf << ", slope = " << e.slope
                     << ", model = c_inf + a/D on the last three records"
                     << (e.warning ? ", warning = non-monotone trend" : "") << "\n";
  } catch (const ParameterError& err) {
    *out.os << "# c_inf unavailable: " << err.what() << "\n";
  }
  return failed ? kSolver : kOk;
}

int run_check(const std::string& snapshot_file) {
  if (snapshot_file.empty()) throw ConfigError({"snapshot: --snapshot PATH is required"});
  const auto snap = read_snapshot(snapshot_file);
  const auto curve = make_reaction(snap.config.theta);
  const auto sol = snap.solution();
  const auto rep = diagnose(sol, curve);

  std::vector<std::string> failures;
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  require(rep.all_finite(), "all entries finite");
  require(rep.at("velocity_identity") < 0.05, "velocity_identity < 0.05");
  require(rep.at("min_du") >= -1e-10 && rep.at("min_dv") >= -1e-10, "monotone in x");
  require(rep.at("min_value") >= -1e-10 && rep.at("max_value") <= 1.0 + 1e-10,
          "confinement in [0,1/mu]x[0,1]");
  for (const char* k : {"energy_horizontal", "energy_vertical", "energy_exchange",
                        "energy_transport", "energy_flux"}) {
    require(rep.at(k) >= -1e-10, std::string(k) + " >= 0");
  }
  if (rep.at("tail_available") > 0.0) require(rep.at("tail_error") < 0.03, "tail_error < 0.03");

  precise(std::cout);
  for (const auto& [k, x] : rep.values) std::cout << k << " = " << x << "\n";
  for (const auto& f : failures) std::cerr << "error[diagnostics]: failed " << f << "\n";
  return failures.empty() ? kOk : kDiagnostics;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Travelling fronts of a road-field reaction-diffusion system"};
  app.footer(kFooter);
  std::string command, config_path, snapshot_file;
  app.add_option("command", command, "dispersion | wave | speed | sweep | limit-speed | check")
      ->required()
      ->check(CLI::IsMember({"dispersion", "wave", "speed", "sweep", "limit-speed", "check"}));
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--snapshot", snapshot_file, "snapshot to read (check)");
  std::map<std::string, std::string> flags;
  for (const auto& key : config_keys()) {
    app.add_option("--" + key, flags[key], "override configuration key '" + key + "'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (command == "check") return run_check(snapshot_file);
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& key : config_keys()) {
      if (app.count("--" + key) > 0) overrides.emplace_back(key, flags[key]);
    }
    const RunConfig cfg =
        parse_config(config_path.empty() ? std::string() : read_file(config_path), overrides);
    if (command == "dispersion") return run_dispersion(cfg);
    if (command == "wave") return run_wave(cfg);
    if (command == "speed") return run_speed(cfg);
    if (command == "sweep") return run_sweep(cfg);
    return run_limit_speed(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error[config]: " << e.what() << "\n";
    return kConfig;
  } catch (const ParameterError& e) {
    std::cerr << "error[config]: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error[solver]: " << e.what() << "\n";
    return kSolver;
  }
}

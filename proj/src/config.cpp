#include "roadfront/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace roadfront {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity" || t == "+inf") return kInfinity;
  double value = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw std::invalid_argument("'" + t + "' is not a number");
  }
  return value;
}

int parse_int(const std::string& text) {
  const std::string t = trim(text);
  int value = 0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw std::invalid_argument("'" + t + "' is not an integer");
  }
  return value;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::string show(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return s.str();
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"d", [](RunConfig& c, const std::string& v) { c.params.d = parse_double(v); }},
      {"D", [](RunConfig& c, const std::string& v) { c.params.D = parse_double(v); }},
      {"mu", [](RunConfig& c, const std::string& v) { c.params.mu = parse_double(v); }},
      {"L", [](RunConfig& c, const std::string& v) { c.params.L = parse_double(v); }},
      {"theta", [](RunConfig& c, const std::string& v) { c.theta = parse_double(v); }},
      {"regime", [](RunConfig& c, const std::string& v) { c.regime = regime_from_string(trim(v)); }},
      {"x_lo", [](RunConfig& c, const std::string& v) { c.x_lo = parse_double(v); }},
      {"x_hi", [](RunConfig& c, const std::string& v) { c.x_hi = parse_double(v); }},
      {"nx", [](RunConfig& c, const std::string& v) { c.nx = parse_int(v); }},
      {"ny", [](RunConfig& c, const std::string& v) { c.ny = parse_int(v); }},
      {"tol", [](RunConfig& c, const std::string& v) { c.tol = parse_double(v); }},
      {"tol_c", [](RunConfig& c, const std::string& v) { c.tol_c = parse_double(v); }},
      {"max_iterations",
       [](RunConfig& c, const std::string& v) { c.max_iterations = parse_int(v); }},
      {"c", [](RunConfig& c, const std::string& v) { c.c = parse_double(v); }},
      {"D_list", [](RunConfig& c, const std::string& v) { c.D_list = parse_list(v); }},
      {"workers", [](RunConfig& c, const std::string& v) { c.workers = parse_int(v); }},
      {"scheme",
       [](RunConfig& c, const std::string& v) { c.scheme = advection_from_string(trim(v)); }},
      {"inner",
       [](RunConfig& c, const std::string& v) { c.inner = inner_solver_from_string(trim(v)); }},
      {"out", [](RunConfig& c, const std::string& v) { c.out = trim(v); }},
  };
  return table;
}

const Setter* find_setter(const std::string& key) {
  for (const auto& [name, fn] : setters()) {
    if (name == key) return &fn;
  }
  return nullptr;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value,
           const std::string& where, std::vector<std::string>& issues) {
  const Setter* set = find_setter(key);
  if (!set) {
    issues.push_back(key + ": unknown key" + where);
    return;
  }
  try {
    (*set)(cfg, value);
  } catch (const std::exception& e) {
    issues.push_back(key + ": " + e.what() + where);
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration";
        for (const auto& i : issues) msg += "\n  " + i;
        return msg;
      }()),
      issues_(std::move(issues)) {}

const char* to_string(InnerSolver inner) {
  return inner == InnerSolver::Direct ? "direct" : "fixed-point";
}

InnerSolver inner_solver_from_string(const std::string& name) {
  if (name == "direct") return InnerSolver::Direct;
  if (name == "fixed-point" || name == "fixed_point") return InnerSolver::FixedPoint;
  throw ParameterError("unknown inner solver '" + name + "' (expected direct or fixed-point)");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, fn] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

MonotoneOptions RunConfig::monotone_options() const {
  MonotoneOptions o;
  o.tol = tol;
  o.max_iterations = max_iterations;
  o.scheme = scheme;
  o.inner = inner;
  return o;
}

SpeedOptions RunConfig::speed_options() const {
  SpeedOptions o;
  o.tol_c = tol_c;
  o.solver = monotone_options();
  return o;
}

PhysParams RunConfig::regime_params() const {
  PhysParams p = params;
  if (regime == Regime::Limit) p.D = kInfinity;
  return p;
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> issues;
  const auto& p = cfg.params;
  if (!(p.d > 0.0) || !std::isfinite(p.d)) issues.push_back("d: d > 0 required");
  if (!(p.mu > 0.0) || !std::isfinite(p.mu)) issues.push_back("mu: mu > 0 required");
  if (!(p.L > 0.0) || !std::isfinite(p.L)) issues.push_back("L: L > 0 required");
  if (std::isnan(p.D) || (!std::isinf(p.D) && !(p.D > p.d)) || p.D < 0.0) {
    issues.push_back("D: D > d required (D = " + show(p.D) + ", d = " + show(p.d) + ")");
  }
  if (cfg.regime == Regime::FiniteD && std::isinf(p.D)) {
    issues.push_back("D: the finite regime needs a finite D > d");
  }
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) issues.push_back("theta: 0 < theta < 1 required");
  if (!(cfg.x_hi > cfg.x_lo) || !std::isfinite(cfg.x_hi - cfg.x_lo)) {
    issues.push_back("x_hi: x_lo < x_hi required");
  }
  if (cfg.nx < 3) issues.push_back("nx: at least 3 nodes required");
  if (cfg.ny < 3) issues.push_back("ny: at least 3 nodes required");
  if (!(cfg.tol > 0.0)) issues.push_back("tol: positive tolerance required");
  if (!(cfg.tol_c > 0.0)) issues.push_back("tol_c: positive tolerance required");
  if (cfg.max_iterations < 1) issues.push_back("max_iterations: at least 1 required");
  if (!(cfg.c > 0.0) || !std::isfinite(cfg.c)) issues.push_back("c: c > 0 required");
  if (cfg.workers < 1) issues.push_back("workers: at least 1 required");
  for (double D : cfg.D_list) {
    if (!(D > p.d) || std::isinf(D)) {
      issues.push_back("D_list: every entry must be finite with D > d (got " + show(D) + ")");
      break;
    }
  }
  // Domain length needed for the pinned speed problem when mu < 1.
  if (p.mu < 1.0 && cfg.theta > 0.0 && cfg.theta < 1.0 && issues.empty()) {
    const double lip = make_reaction(cfg.theta).lip();
    const double need = 2.0 / std::sqrt(lip) * std::log(1.0 / p.mu);
    if (cfg.x_hi - cfg.x_lo < need) {
      issues.push_back("x_hi: domain length must be at least (2/sqrt(Lip f)) ln(1/mu) = " +
                       show(need));
    }
  }
  return issues;
}

RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig cfg;
  std::vector<std::string> issues;
  std::stringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back("line " + std::to_string(number) + ": expected 'key = value'");
      continue;
    }
    apply(cfg, trim(line.substr(0, eq)), line.substr(eq + 1),
          " (line " + std::to_string(number) + ")", issues);
  }
  for (const auto& [key, value] : overrides) apply(cfg, key, value, " (flag --" + key + ")", issues);
  if (issues.empty()) issues = validate_config(cfg);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

std::string format_config(const RunConfig& cfg) {
  std::ostringstream s;
  s << "d = " << show(cfg.params.d) << "\n"
    << "D = " << show(cfg.params.D) << "\n"
    << "mu = " << show(cfg.params.mu) << "\n"
    << "L = " << show(cfg.params.L) << "\n"
    << "theta = " << show(cfg.theta) << "\n"
    << "regime = " << to_string(cfg.regime) << "\n"
    << "x_lo = " << show(cfg.x_lo) << "\n"
    << "x_hi = " << show(cfg.x_hi) << "\n"
    << "nx = " << cfg.nx << "\n"
    << "ny = " << cfg.ny << "\n"
    << "tol = " << show(cfg.tol) << "\n"
    << "tol_c = " << show(cfg.tol_c) << "\n"
    << "max_iterations = " << cfg.max_iterations << "\n"
    << "c = " << show(cfg.c) << "\n"
    << "D_list = ";
  for (size_t i = 0; i < cfg.D_list.size(); ++i) s << (i ? "," : "") << show(cfg.D_list[i]);
  s << "\n"
    << "workers = " << cfg.workers << "\n"
    << "scheme = " << to_string(cfg.scheme) << "\n"
    << "inner = " << to_string(cfg.inner) << "\n";
  if (!cfg.out.empty()) s << "out = " << cfg.out << "\n";
  return s.str();
}

}  // namespace roadfront

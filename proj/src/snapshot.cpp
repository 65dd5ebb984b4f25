#include "roadfront/snapshot.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace roadfront {

using nlohmann::json;

const char* const kCodeVersion = "0.1.0";

namespace {

// JSON has no infinities; they travel as strings.
json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double to_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return kInfinity;
  if (s == "-inf") return -kInfinity;
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw ParameterError("snapshot: '" + s + "' is not a number");
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

FrontSolution Snapshot::solution() const {
  return {c, config.regime, u, v, config.grid(), config.regime_params(), {}};
}

Snapshot make_snapshot(const RunConfig& cfg, const std::string& command,
                       const FrontSolution& sol, const std::map<std::string, double>& diagnostics) {
  Snapshot s;
  s.config = cfg;
  s.command = command;
  s.code_version = kCodeVersion;
  s.created = utc_now();
  s.c = sol.c;
  s.u = sol.u;
  s.v = sol.v;
  s.diagnostics = diagnostics;
  return s;
}

std::string snapshot_to_json(const Snapshot& snap) {
  const auto& cfg = snap.config;
  json meta;
  meta["command"] = snap.command;
  meta["code_version"] = snap.code_version;
  meta["created"] = snap.created;
  // Keep the config in its own text form so it reloads through parse_config.
  meta["config"] = format_config(cfg);

  json doc;
  doc["format"] = "roadfront-snapshot";
  doc["metadata"] = meta;
  doc["c"] = number(snap.c);
  doc["nx"] = snap.v.rows();
  doc["ny"] = snap.v.cols();
  doc["x"] = {cfg.x_lo, cfg.x_hi};
  doc["y"] = {-cfg.params.L, 0.0};
  doc["u"] = std::vector<double>(snap.u.data(), snap.u.data() + snap.u.size());
  doc["v"] = std::vector<double>(snap.v.data(), snap.v.data() + snap.v.size());
  json diag = json::object();
  for (const auto& [k, x] : snap.diagnostics) diag[k] = number(x);
  doc["diagnostics"] = diag;
  return doc.dump(1);
}

Snapshot snapshot_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("snapshot: ") + e.what());
  }
  if (doc.value("format", "") != "roadfront-snapshot") {
    throw ParameterError("snapshot: not a roadfront snapshot");
  }
  Snapshot s;
  const auto& meta = doc.at("metadata");
  s.command = meta.at("command").get<std::string>();
  s.code_version = meta.at("code_version").get<std::string>();
  s.created = meta.at("created").get<std::string>();
  s.config = parse_config(meta.at("config").get<std::string>());
  s.c = to_number(doc.at("c"));
  const auto nx = doc.at("nx").get<Eigen::Index>();
  const auto ny = doc.at("ny").get<Eigen::Index>();
  const auto u = doc.at("u").get<std::vector<double>>();
  const auto v = doc.at("v").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(u.size()) != nx || static_cast<Eigen::Index>(v.size()) != nx * ny) {
    throw ParameterError("snapshot: array sizes do not match nx, ny");
  }
  s.u = Eigen::Map<const LineField>(u.data(), nx);
  s.v = Eigen::Map<const StripField>(v.data(), nx, ny);
  for (const auto& [k, x] : doc.at("diagnostics").items()) s.diagnostics[k] = to_number(x);
  return s;
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write snapshot to '" + path + "'");
  out << snapshot_to_json(snap) << '\n';
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read snapshot '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return snapshot_from_json(buf.str());
}

}  // namespace roadfront

#pragma once

#include "roadfront/config.hpp"

#include <map>
#include <string>

namespace roadfront {

/// Self-describing record of one computed front: config, arrays and diagnostics.
struct Snapshot {
  RunConfig config;
  std::string command;
  std::string code_version;
  std::string created;  // UTC, ISO 8601
  double c = 0.0;
  LineField u;
  StripField v;  // row-major (nx, ny), stored flattened
  std::map<std::string, double> diagnostics;

  FrontSolution solution() const;
};

extern const char* const kCodeVersion;

Snapshot make_snapshot(const RunConfig& cfg, const std::string& command,
                       const FrontSolution& sol, const std::map<std::string, double>& diagnostics);

std::string snapshot_to_json(const Snapshot& snap);
Snapshot snapshot_from_json(const std::string& text);

void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

}  // namespace roadfront

#pragma once

#include "roadfront/coupled.hpp"
#include "roadfront/speed.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace roadfront {

/// Everything a CLI run needs. Keys accepted by parse_config match the field names.
struct RunConfig {
  PhysParams params;  // keys d, D, mu, L
  double theta = 0.3;
  Regime regime = Regime::Limit;
  double x_lo = 0.0;
  double x_hi = 20.0;
  int nx = 201;
  int ny = 33;
  double tol = 1e-9;     // monotone iteration stopping decrement
  double tol_c = 1e-4;   // bisection bracket width
  int max_iterations = 400000;
  double c = 0.1;        // speed for the `wave` and `dispersion` commands
  std::vector<double> D_list{4.0, 16.0, 64.0, 256.0};
  int workers = 1;
  Advection scheme = Advection::Upwind;
  InnerSolver inner = InnerSolver::Direct;
  std::string out;

  StripGrid grid() const { return {x_lo, x_hi, nx, ny, params.L}; }
  MonotoneOptions monotone_options() const;
  SpeedOptions speed_options() const;
  /// Physical parameters as the chosen regime sees them (D = infinity in the limit regime).
  PhysParams regime_params() const;
};

/// Carries every violation found, each prefixed by the offending key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Names of all recognized keys, in documentation order.
const std::vector<std::string>& config_keys();

/// Parses `key = value` lines ('#' starts a comment), applies the overrides in order
/// and validates the result. Throws ConfigError listing every problem.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Collects precondition violations of an assembled config (empty when valid).
std::vector<std::string> validate_config(const RunConfig& cfg);

/// key = value rendering that parse_config reads back to the same config.
std::string format_config(const RunConfig& cfg);

const char* to_string(InnerSolver inner);
InnerSolver inner_solver_from_string(const std::string& name);

}  // namespace roadfront

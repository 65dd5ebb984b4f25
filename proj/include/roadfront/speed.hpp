#pragma once

#include "roadfront/core.hpp"
#include "roadfront/coupled.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace roadfront {

/// Normalization that selects the speed on a truncated box: mu*u(pin_x) = target with
/// target = (1+theta)/2 and pin_x at the fraction (2+theta)/3 of the box length.
struct Pin {
  double target;
  double x;
};

Pin make_pin(const StripGrid& grid, double theta);

/// G(c) = mu*u(pin_x) - target for a given line field.
double pin_value(const LineField& u, const StripGrid& grid, const PhysParams& params,
                 const Pin& pin);

struct SpeedProbe {
  double c;
  double g_low;   // certified lower bound on G(c)
  double g_high;  // certified upper bound on G(c)
  int iterations;
};

struct SpeedBracket {
  double c_lo = 0.0;
  double c_hi = 0.0;
  double target = 0.0;
  double pin_x = 0.0;
  std::vector<SpeedProbe> history;
};

/// Runs monotone_solve to convergence and returns G(c).
double pin_functional(double c, const ReactionCurve& curve, const StripGrid& grid,
                      const PhysParams& params, Regime regime, const MonotoneOptions& options = {});

using FieldPair = std::pair<LineField, StripField>;

/// Result of running the decreasing and increasing monotone sequences side by side.
struct SignCertificate {
  int sign = 0;  // +1: G(c) > 0, -1: G(c) < 0
  double g_low = 0.0;
  double g_high = 0.0;
  int iterations = 0;
  bool converged = false;
  FieldPair super;  // last decreasing iterate, a supersolution at c
  FieldPair sub;    // last increasing iterate, a subsolution at c
};

/// Brackets u_c(pin) between a decreasing sequence from `super_start` and an increasing
/// one from `sub_start`, stopping as soon as the bracket excludes the target.
/// Starts that fail the super/subsolution test fall back to (1/mu,1) and (0,0).
SignCertificate certify_pin_sign(double c, const ReactionCurve& curve, const StripGrid& grid,
                                 const PhysParams& params, Regime regime,
                                 const MonotoneOptions& options,
                                 const std::optional<FieldPair>& super_start,
                                 const std::optional<FieldPair>& sub_start);

struct SpeedOptions {
  double tol_c = 1e-5;
  /// Initial bracket; nonpositive values select 0.05 sqrt(Lip f) and sqrt(Lip f).
  double c_lo = 0.0;
  double c_hi = 0.0;
  int max_bisections = 80;
  MonotoneOptions solver;
};

struct SpeedResult {
  double c;
  FrontSolution front;
  SpeedBracket bracket;
};

/// Bisection on the sign of G, then one converged solve at the bracket midpoint.
SpeedResult find_speed(const ReactionCurve& curve, const StripGrid& grid, const PhysParams& params,
                       Regime regime, const SpeedOptions& options = {});

}  // namespace roadfront

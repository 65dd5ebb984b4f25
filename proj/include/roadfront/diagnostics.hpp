#pragma once

#include "roadfront/core.hpp"
#include "roadfront/coupled.hpp"
#include "roadfront/dispersion.hpp"

#include <map>
#include <string>

namespace roadfront {

/// Flat name -> value report, serialized as-is into snapshots.
struct DiagnosticsReport {
  std::map<std::string, double> values;

  double& operator[](const std::string& key) { return values[key]; }
  double at(const std::string& key) const { return values.at(key); }
  bool has(const std::string& key) const { return values.count(key) != 0; }
  bool all_finite() const;
};

/// Trapezoid rule on a uniform mesh.
template <typename Derived>
double trapezoid(const Eigen::DenseBase<Derived>& f, double h) {
  const auto n = f.size();
  if (n < 2) return 0.0;
  return h * (f.sum() - 0.5 * (f(0) + f(n - 1)));
}

/// Derivative on a uniform mesh: centered inside, second-order one-sided at the ends.
LineField differentiate(const LineField& f, double h);

/// Relative mismatch in
///   int int f(v) = c [int v dy] - [u'] + c [u]  (- d/D int [v_x] dy for finite D),
/// brackets taking the difference between x_hi and x_lo.
double velocity_identity_residual(const FrontSolution& sol, const ReactionCurve& curve);

struct EnergyTerms {
  double horizontal = 0.0;  // (d/D) int int v_x^2
  double vertical = 0.0;    // d int int v_y^2
  double exchange = 0.0;    // int u' v_x(., 0)
  double transport = 0.0;   // c int u' v(., 0)
  double flux = 0.0;        // (c/2) int (v(x_hi, y)^2 - v(x_lo, y)^2) dy
  double truncation = 0.0;  // -[v(.,0) u'] - (d/D) int [v v_x] dy
  double reaction = 0.0;    // int int f(v) v
  double residual = 0.0;    // |lhs - reaction| / |reaction|
};

/// Identity obtained by testing the strip equation with v. Valid in both regimes;
/// the horizontal term vanishes when D is infinite.
EnergyTerms energy_terms(const FrontSolution& sol, const ReactionCurve& curve);
double energy_identity_residual(const FrontSolution& sol, const ReactionCurve& curve);

struct TailFit {
  bool available = false;
  double exponent = 0.0;      // from x-differences of v(., 0)
  double raw_exponent = 0.0;  // from v(., 0) itself
  double lambda = 0.0;  // dispersion root at (c, params)
  double relative_error = 0.0;
  double profile_mismatch = 0.0;
  double x_a = 0.0, x_b = 0.0;
  int nodes = 0;
};

/// Least-squares slope of log dv(x, 0) on [x_a, x_b] and the vertical-profile mismatch of
/// the x-difference of v at x_a. The plain slope of log v is reported alongside.
TailFit tail_fit(const FrontSolution& sol, double x_a, double x_b);

/// Window for tail_fit: the part of the left tail where v(., 0) < theta/2, trimmed away
/// from the inlet boundary layer.
std::pair<double, double> default_tail_window(const FrontSolution& sol, double theta);

struct Monotonicity {
  double min_du = 0.0;
  double min_dv = 0.0;
};

/// Minimum forward differences of u and v in x, divided by hx.
Monotonicity monotonicity_report(const FrontSolution& sol);

struct SmallCReport {
  double c_small = 0.0;
  double concavity_margin = 0.0;  // min over interior of -(u_{j+1} - 2u_j + u_{j-1}) / hx^2
  double half_value = 0.0;        // mu u(x_lo + M/2)
  double c_large = 0.0;
  double large_max = 0.0;         // max of mu u over the left 90% of the box at c_large
};

SmallCReport small_c_checks(const ReactionCurve& curve, const StripGrid& grid,
                            const PhysParams& params, Regime regime,
                            const MonotoneOptions& options = {});

struct KernelReport {
  double constant_error = 0.0;  // sup |u - 1/mu| when v(., 0) = 1 and u = 1/mu at both ends
  double left_rate = 0.0;
  double right_rate = 0.0;
  double left_expected = 0.0;   // (sqrt(c^2 + 4mu) + c) / 2
  double right_expected = 0.0;  // (sqrt(c^2 + 4mu) - c) / 2
  double rate_mismatch = 0.0;   // max relative error of the two rates
};

/// Discrete line solve for -u'' + c u' + mu u = v(., 0) against its exponential kernel.
KernelReport kernel_check(double c, const PhysParams& params, const StripGrid& grid,
                          Advection scheme = Advection::Upwind);

/// Everything that applies to a converged front, under stable names.
DiagnosticsReport diagnose(const FrontSolution& sol, const ReactionCurve& curve);

}  // namespace roadfront

#include "roadfront/diagnostics.hpp"

#include <cmath>

namespace roadfront {

namespace {

// Least-squares slope of log(f) against x over nodes [j0, j1].
double log_slope(const LineField& f, const StripGrid& grid, int j0, int j1) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = j1 - j0 + 1;
  for (int j = j0; j <= j1; ++j) {
    const double x = grid.x(j), y = std::log(f[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// int over y of each column of a strip field.
LineField column_integrals(const StripField& a, double hy) {
  LineField out(a.rows());
  for (Eigen::Index j = 0; j < a.rows(); ++j) out[j] = trapezoid(a.row(j), hy);
  return out;
}

double relative(double mismatch, double scale) {
  return scale != 0.0 ? std::abs(mismatch / scale) : std::abs(mismatch);
}

// d/D, zero in the limit regime.
double horizontal_weight(const PhysParams& p) { return p.limit() ? 0.0 : p.d / p.D; }

}  // namespace

bool DiagnosticsReport::all_finite() const {
  for (const auto& [key, value] : values) {
    if (!std::isfinite(value)) return false;
  }
  return true;
}

LineField differentiate(const LineField& f, double h) {
  const auto n = f.size();
  LineField out = LineField::Zero(n);
  if (n < 3) {
    if (n == 2) out.setConstant((f[1] - f[0]) / h);
    return out;
  }
  for (Eigen::Index j = 1; j + 1 < n; ++j) out[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return out;
}

double velocity_identity_residual(const FrontSolution& sol, const ReactionCurve& curve) {
  const auto& g = sol.grid;
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  const StripField fv = curve.apply(sol.v);
  const double source = trapezoid(column_integrals(fv, hy), hx);

  const LineField du = differentiate(sol.u, hx);
  double rhs = sol.c * (trapezoid(sol.v.row(nx - 1), hy) - trapezoid(sol.v.row(0), hy)) -
               (du[nx - 1] - du[0]) + sol.c * (sol.u[nx - 1] - sol.u[0]);
  const double w = horizontal_weight(sol.params);
  if (w != 0.0) {
    LineField jump(ny);
    for (int i = 0; i < ny; ++i) {
      const LineField col = sol.v.col(i);
      const LineField dv = differentiate(col, hx);
      jump[i] = dv[nx - 1] - dv[0];
    }
    rhs -= w * trapezoid(jump, hy);
  }
  return relative(source - rhs, source);
}

EnergyTerms energy_terms(const FrontSolution& sol, const ReactionCurve& curve) {
  const auto& g = sol.grid;
  const int nx = g.nx(), ny = g.ny(), top = g.top();
  const double hx = g.hx(), hy = g.hy();
  const double w = horizontal_weight(sol.params);

  StripField vx(nx, ny), vy(nx, ny);
  for (int i = 0; i < ny; ++i) vx.col(i) = differentiate(sol.v.col(i), hx);
  for (int j = 0; j < nx; ++j) vy.row(j) = differentiate(sol.v.row(j).transpose(), hy).transpose();

  const LineField du = differentiate(sol.u, hx);
  const LineField v0 = sol.v.col(top);

  EnergyTerms t;
  t.horizontal = w * trapezoid(column_integrals(vx.array().square().matrix(), hy), hx);
  t.vertical = sol.params.d * trapezoid(column_integrals(vy.array().square().matrix(), hy), hx);
  t.exchange = trapezoid(du.cwiseProduct(vx.col(top)), hx);
  t.transport = sol.c * trapezoid(du.cwiseProduct(v0), hx);
  t.flux = 0.5 * sol.c *
           (trapezoid(sol.v.row(nx - 1).array().square(), hy) -
            trapezoid(sol.v.row(0).array().square(), hy));
  const LineField vvx_jump =
      (sol.v.row(nx - 1).cwiseProduct(vx.row(nx - 1)) - sol.v.row(0).cwiseProduct(vx.row(0)))
          .transpose();
  t.truncation = -(v0[nx - 1] * du[nx - 1] - v0[0] * du[0]) - w * trapezoid(vvx_jump, hy);
  const StripField fvv = curve.apply(sol.v).cwiseProduct(sol.v);
  t.reaction = trapezoid(column_integrals(fvv, hy), hx);
  const double lhs = t.horizontal + t.vertical + t.exchange + t.transport + t.flux + t.truncation;
  t.residual = relative(lhs - t.reaction, t.reaction);
  return t;
}

double energy_identity_residual(const FrontSolution& sol, const ReactionCurve& curve) {
  return energy_terms(sol, curve).residual;
}

TailFit tail_fit(const FrontSolution& sol, double x_a, double x_b) {
  const auto& g = sol.grid;
  TailFit out;
  out.x_a = x_a;
  out.x_b = x_b;
  const int j0 = static_cast<int>(std::ceil((x_a - g.x_lo()) / g.hx() - 1e-9));
  const int j1 = static_cast<int>(std::floor((x_b - g.x_lo()) / g.hx() + 1e-9));
  if (j0 < 0 || j1 + 1 >= g.nx() || j1 - j0 + 1 < 3) return out;
  const int top = g.top();
  // Forward differences cancel the constant mode that the left Dirichlet data adds
  // to the tail; for a pure exponential they carry the same exponent.
  LineField dv(g.nx());
  dv.setZero();
  for (int j = j0; j <= j1; ++j) {
    dv[j] = sol.v(j + 1, top) - sol.v(j, top);
    if (!(dv[j] > 0.0) || !(sol.v(j, top) > 0.0)) return out;
  }
  DispersionRoot root;
  try {
    root = solve_lambda(sol.c, sol.params, 1e-10, g.ny());
  } catch (const std::exception&) {
    return out;
  }
  out.nodes = j1 - j0 + 1;
  out.exponent = log_slope(dv, g, j0, j1);
  out.raw_exponent = log_slope(sol.v.col(top), g, j0, j1);
  out.lambda = root.lambda;
  out.relative_error = std::abs(out.exponent - root.lambda) / root.lambda;
  const double h_top = root.h_samples[top];
  for (int i = 0; i < g.ny(); ++i) {
    const double ratio = (sol.v(j0 + 1, i) - sol.v(j0, i)) / dv[j0];
    out.profile_mismatch = std::max(out.profile_mismatch, std::abs(ratio - root.h_samples[i] / h_top));
  }
  out.available = true;
  return out;
}

std::pair<double, double> default_tail_window(const FrontSolution& sol, double theta) {
  const auto& g = sol.grid;
  const LineField v0 = sol.v.col(g.top());
  int j = 0;
  while (j < g.nx() && v0[j] < 0.5 * theta) ++j;
  const double x_half = g.x(std::max(j - 1, 0));
  return {g.x_lo() + 0.25 * (x_half - g.x_lo()), x_half};
}

Monotonicity monotonicity_report(const FrontSolution& sol) {
  const double hx = sol.grid.hx();
  const auto n = sol.u.size();
  Monotonicity m;
  m.min_du = (sol.u.tail(n - 1) - sol.u.head(n - 1)).minCoeff() / hx;
  const auto rows = sol.v.rows();
  m.min_dv = (sol.v.bottomRows(rows - 1) - sol.v.topRows(rows - 1)).minCoeff() / hx;
  return m;
}

SmallCReport small_c_checks(const ReactionCurve& curve, const StripGrid& grid,
                            const PhysParams& params, Regime regime,
                            const MonotoneOptions& options) {
  const double root_lip = std::sqrt(curve.lip());
  SmallCReport r;
  r.c_small = 0.01 * root_lip;
  const auto slow = monotone_solve(r.c_small, curve, grid, params, regime, options);
  const double h2 = grid.hx() * grid.hx();
  const auto n = slow.u.size();
  const LineField second =
      (slow.u.tail(n - 2) - 2.0 * slow.u.segment(1, n - 2) + slow.u.head(n - 2)) / h2;
  r.concavity_margin = (-second).minCoeff();
  r.half_value = params.mu * grid.interpolate(slow.u, grid.x_lo() + 0.5 * grid.length());

  r.c_large = 10.0 * root_lip;
  const auto fast = monotone_solve(r.c_large, curve, grid, params, regime, options);
  const double x_cut = grid.x_lo() + 0.9 * grid.length();
  for (int j = 0; j < grid.nx() && grid.x(j) <= x_cut + 1e-12; ++j) {
    r.large_max = std::max(r.large_max, params.mu * fast.u[j]);
  }
  return r;
}

KernelReport kernel_check(double c, const PhysParams& params, const StripGrid& grid,
                          Advection scheme) {
  const int nx = grid.nx();
  const auto line = line_operator(grid, params, c, 0.0, scheme);
  KernelReport r;
  const double disc = std::sqrt(c * c + 4.0 * params.mu);
  r.left_expected = 0.5 * (disc + c);
  r.right_expected = 0.5 * (disc - c);

  LineField rhs = LineField::Ones(nx);
  rhs[0] = rhs[nx - 1] = 1.0 / params.mu;
  r.constant_error = (thomas_solve(line, rhs).array() - 1.0 / params.mu).abs().maxCoeff();

  const int j0 = nx / 2;
  rhs.setZero();
  rhs[j0] = 1.0 / grid.hx();
  const LineField u = thomas_solve(line, rhs);
  const int side = std::min(j0, nx - 1 - j0);
  const int near = std::max(2, side / 20), far = std::max(near + 2, side / 2);
  r.right_rate = -log_slope(u, grid, j0 + near, j0 + far);
  r.left_rate = log_slope(u, grid, j0 - far, j0 - near);
  r.rate_mismatch = std::max(std::abs(r.left_rate / r.left_expected - 1.0),
                             std::abs(r.right_rate / r.right_expected - 1.0));
  return r;
}

DiagnosticsReport diagnose(const FrontSolution& sol, const ReactionCurve& curve) {
  DiagnosticsReport rep;
  rep["velocity_identity"] = velocity_identity_residual(sol, curve);
  const auto e = energy_terms(sol, curve);
  rep["energy_identity"] = e.residual;
  rep["energy_horizontal"] = e.horizontal;
  rep["energy_vertical"] = e.vertical;
  rep["energy_exchange"] = e.exchange;
  rep["energy_transport"] = e.transport;
  rep["energy_flux"] = e.flux;
  const auto m = monotonicity_report(sol);
  rep["min_du"] = m.min_du;
  rep["min_dv"] = m.min_dv;
  rep["min_value"] = std::min((sol.params.mu * sol.u).minCoeff(), sol.v.minCoeff());
  rep["max_value"] = std::max((sol.params.mu * sol.u).maxCoeff(), sol.v.maxCoeff());
  const auto [xa, xb] = default_tail_window(sol, curve.theta());
  const auto tail = tail_fit(sol, xa, xb);
  rep["tail_available"] = tail.available ? 1.0 : 0.0;
  if (tail.available) {
    rep["tail_exponent"] = tail.exponent;
    rep["tail_raw_exponent"] = tail.raw_exponent;
    rep["tail_lambda"] = tail.lambda;
    rep["tail_error"] = tail.relative_error;
    rep["profile_mismatch"] = tail.profile_mismatch;
  }
  const auto res = nonlinear_residual(sol.c, curve, sol.grid, sol.params, sol.regime, sol.u, sol.v,
                                      BoundaryData::front(sol.grid, sol.params));
  rep["residual"] = res.sup();
  return rep;
}

}  // namespace roadfront

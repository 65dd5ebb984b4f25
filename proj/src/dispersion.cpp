#include "roadfront/dispersion.hpp"

#include <cmath>
#include <sstream>

namespace roadfront {

double beta_of_lambda(double lambda, double c, const PhysParams& params) {
  if (params.limit()) {
    if (!(lambda > 0.0) || !(c > 0.0)) {
      throw DomainError("beta_of_lambda: need lambda > 0 and c > 0");
    }
    return std::sqrt(c * lambda / params.d);
  }
  const double upper = c * params.D / params.d;
  if (!(lambda > 0.0) || !(lambda < upper)) {
    std::ostringstream msg;
    msg << "beta_of_lambda: lambda = " << lambda << " outside (0, cD/d = " << upper << ")";
    throw DomainError(msg.str());
  }
  return std::sqrt(std::max(0.0, lambda * (c / params.d - lambda / params.D)));
}

double dispersion_residual(double lambda, double c, const PhysParams& params) {
  const double b = beta_of_lambda(lambda, c, params);
  const double t = params.d * b * std::tanh(b * params.L);
  return lambda * (c - lambda) + params.mu * t / (1.0 + t);
}

std::pair<double, double> lambda_bracket(double c, const PhysParams& params) {
  if (!(c > 0.0)) throw DomainError("lambda_bracket: c must be positive");
  double hi = 0.5 * (c + std::sqrt(c * c + 4.0 * params.mu));
  if (!params.limit()) hi = std::min(hi, c * params.D / params.d * (1.0 - 1e-15));
  return {c * (1.0 + 1e-12), hi};
}

DispersionRoot solve_lambda(double c, const PhysParams& params, double tol, int ny) {
  params.validate();
  if (!(tol > 0.0)) throw ParameterError("solve_lambda: tol must be positive");
  if (ny < 2) throw ParameterError("solve_lambda: ny must be at least 2");
  auto [lo, hi] = lambda_bracket(c, params);
  const double f_lo = dispersion_residual(lo, c, params);
  const double f_hi = dispersion_residual(hi, c, params);
  if (!(f_lo > 0.0) || !(f_hi < 0.0)) {
    std::ostringstream msg;
    msg << "solve_lambda: no sign change on [" << lo << ", " << hi << "] (F = " << f_lo << ", "
        << f_hi << ")";
    throw NumericalError(msg.str());
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (dispersion_residual(mid, c, params) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  DispersionRoot root;
  root.lambda = 0.5 * (lo + hi);
  root.c = c;
  root.params = params;
  root.beta = beta_of_lambda(root.lambda, c, params);
  const double scale = std::max(params.mu, root.lambda * root.lambda);
  if (!(std::abs(dispersion_residual(root.lambda, c, params)) <= tol * scale)) {
    throw NumericalError("solve_lambda: residual above tolerance after bisection");
  }
  root.h_samples.resize(ny);
  for (int i = 0; i < ny; ++i) {
    root.h_samples[i] = std::cosh(root.beta * params.L * i / (ny - 1));
  }
  return root;
}

double h_profile(const DispersionRoot& root, double y) {
  const double L = root.params.L;
  if (!(y >= -L && y <= 0.0)) {
    throw DomainError("h_profile: y outside [-L, 0]");
  }
  return std::cosh(root.beta * (y + L));
}

std::pair<double, double> tail_envelope(const DispersionRoot& root, double x, double y,
                                        double m_low, double theta) {
  const double shape = std::exp(root.lambda * x) * h_profile(root, y);
  const double h_max = std::cosh(root.beta * root.params.L);
  return {m_low / h_max * shape, theta * shape};
}

}  // namespace roadfront

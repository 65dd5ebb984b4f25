#pragma once

#include "roadfront/core.hpp"

#include <utility>

namespace roadfront {

/// Exponential tail e^{lambda x} h(y) of the linearized problem ahead of the front.
struct DispersionRoot {
  double lambda = 0.0;
  double beta = 0.0;
  double c = 0.0;
  PhysParams params;
  /// h at ny equispaced nodes from y = -L (index 0) to y = 0, min h = 1.
  LineField h_samples;
};

/// beta = sqrt(lambda (c/d - lambda/D)), or sqrt(c lambda / d) when D is infinite.
double beta_of_lambda(double lambda, double c, const PhysParams& params);

/// F(lambda) = -lambda^2 + c lambda + mu d beta tanh(beta L) / (1 + d beta tanh(beta L)).
double dispersion_residual(double lambda, double c, const PhysParams& params);

/// Admissible search interval (c(1+eps), min((c + sqrt(c^2+4mu))/2, cD/d)).
std::pair<double, double> lambda_bracket(double c, const PhysParams& params);

DispersionRoot solve_lambda(double c, const PhysParams& params, double tol = 1e-12,
                            int ny = 65);

/// cosh(beta (y+L)), equal to 1 at y = -L.
double h_profile(const DispersionRoot& root, double y);

/// Lower and upper tail bounds (m_low / max h) e^{lambda x} h(y) and theta e^{lambda x} h(y).
std::pair<double, double> tail_envelope(const DispersionRoot& root, double x, double y,
                                        double m_low, double theta);

}  // namespace roadfront

#include "roadfront/core.hpp"

#include <algorithm>
#include <sstream>

namespace roadfront {

namespace {

constexpr int kLipSamples = 200001;

// Golden-section refinement of a local maximum of |f'| inside [a, b].
double refine_max(const ReactionCurve& curve, double a, double b) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  auto g = [&](double s) { return std::abs(curve.derivative(s)); };
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double g1 = g(x1), g2 = g(x2);
  for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
    if (g1 < g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + ratio * (b - a);
      g2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - ratio * (b - a);
      g1 = g(x1);
    }
  }
  return std::max({g1, g2, g(a), g(b)});
}

}  // namespace

const char* to_string(Regime regime) {
  return regime == Regime::Limit ? "limit" : "finite";
}

Regime regime_from_string(const std::string& name) {
  if (name == "limit" || name == "LIMIT" || name == "inf") return Regime::Limit;
  if (name == "finite" || name == "FINITE_D" || name == "finite-d") return Regime::FiniteD;
  throw ParameterError("unknown regime '" + name + "' (expected limit or finite)");
}

void PhysParams::validate() const {
  if (!(d > 0.0) || !std::isfinite(d)) throw ParameterError("d > 0 required");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ParameterError("mu > 0 required");
  if (!(L > 0.0) || !std::isfinite(L)) throw ParameterError("L > 0 required");
  if (std::isnan(D) || (!std::isinf(D) && !(D > d)) || D < 0.0) {
    std::ostringstream msg;
    msg << "D > d required (D = " << D << ", d = " << d << ")";
    throw ParameterError(msg.str());
  }
}

double PhysParams::speed_bound(double lip) const {
  if (limit()) return std::sqrt(lip);
  return std::sqrt(D / (D - d) * lip);
}

ReactionCurve::ReactionCurve(double theta, Fn value, Fn derivative)
    : theta_(theta), value_(std::move(value)), derivative_(std::move(derivative)), lip_(0.0) {
  lip_ = lip_f(*this);
}

double ReactionCurve::lip_restricted(double alpha) const {
  if (alpha <= theta_) return 0.0;
  return lip_on(*this, theta_, alpha);
}

ReactionCurve make_reaction(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw ParameterError("theta must lie in (0, 1)");
  }
  const double slope_at_one = -(1.0 - theta) * (1.0 - theta);
  auto value = [theta, slope_at_one](double s) {
    if (s <= theta) return 0.0;
    if (s > 1.0) return slope_at_one * (s - 1.0);
    return (s - theta) * (s - theta) * (1.0 - s);
  };
  auto derivative = [theta, slope_at_one](double s) {
    if (s <= theta) return 0.0;
    if (s > 1.0) return slope_at_one;
    return (s - theta) * (2.0 + theta - 3.0 * s);
  };
  return ReactionCurve(theta, value, derivative);
}

double lip_on(const ReactionCurve& curve, double lo, double hi) {
  if (hi <= lo) return std::abs(curve.derivative(lo));
  const double step = (hi - lo) / (kLipSamples - 1);
  double best = 0.0;
  int arg = 0;
  for (int i = 0; i < kLipSamples; ++i) {
    const double g = std::abs(curve.derivative(lo + i * step));
    if (g > best) {
      best = g;
      arg = i;
    }
  }
  // Endpoints are sampled exactly; refine only interior maxima.
  if (arg > 0 && arg < kLipSamples - 1) {
    best = std::max(best, refine_max(curve, lo + (arg - 1) * step, lo + (arg + 1) * step));
  }
  return best;
}

double lip_f(const ReactionCurve& curve) {
  // f' vanishes left of theta and is constant right of 1, so [theta, 1] plus one
  // probe beyond each end covers the extended line.
  const double inside = lip_on(curve, curve.theta(), 1.0);
  const double outside = std::max(std::abs(curve.derivative(2.0)), std::abs(curve.derivative(-1.0)));
  return std::max(inside, outside);
}

Rescaled rescale_frame(double c_physical, double x_physical, double D) {
  if (!(D > 0.0) || std::isinf(D)) throw ParameterError("rescale_frame requires finite D > 0");
  const double s = std::sqrt(D);
  return {c_physical / s, x_physical / s};
}

Rescaled unscale_frame(double c_rescaled, double x_rescaled, double D) {
  if (!(D > 0.0) || std::isinf(D)) throw ParameterError("unscale_frame requires finite D > 0");
  const double s = std::sqrt(D);
  return {c_rescaled * s, x_rescaled * s};
}

StripGrid::StripGrid(double x_lo, double x_hi, int nx, int ny, double L)
    : x_lo_(x_lo), x_hi_(x_hi), nx_(nx), ny_(ny), L_(L) {
  if (!(x_hi > x_lo)) throw ParameterError("grid requires x_hi > x_lo");
  if (nx < 3) throw ParameterError("grid requires nx >= 3");
  if (ny < 3) throw ParameterError("grid requires ny >= 3");
  if (!(L > 0.0)) throw ParameterError("grid requires L > 0");
  hx_ = (x_hi - x_lo) / (nx - 1);
  hy_ = L / (ny - 1);
}

LineField StripGrid::xs() const {
  return LineField::LinSpaced(nx_, x_lo_, x_hi_);
}

LineField StripGrid::ys() const {
  return LineField::LinSpaced(ny_, -L_, 0.0);
}

double StripGrid::interpolate(const LineField& u, double xq) const {
  const double t = std::clamp((xq - x_lo_) / hx_, 0.0, static_cast<double>(nx_ - 1));
  const int j = std::min(static_cast<int>(t), nx_ - 2);
  const double w = t - j;
  return (1.0 - w) * u[j] + w * u[j + 1];
}

}  // namespace roadfront

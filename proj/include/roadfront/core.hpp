#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace roadfront {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Node values on an (nx × ny) strip grid; row j is the vertical column at x_j.
template <typename Scalar>
using StripArray = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using LineField = VectorX<double>;
using StripField = StripArray<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Error categories. The CLI maps these onto exit codes.

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RegimeError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Raised when an iterate breaks an ordering the discrete comparison principle guarantees.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

enum class Regime { FiniteD, Limit };

const char* to_string(Regime regime);
Regime regime_from_string(const std::string& name);

/// Physical constants of the road-field system. `D == kInfinity` stands for the
/// limiting (hypoelliptic) system.
struct PhysParams {
  double d = 1.0;
  double D = kInfinity;
  double mu = 1.0;
  double L = 1.0;

  bool limit() const { return std::isinf(D); }

  /// Throws ParameterError naming the first violated constraint.
  void validate() const;

  /// Upper bound sqrt(D/(D-d) Lip f) on the rescaled speed of a finite-D front.
  double speed_bound(double lip) const;
};

/// Ignition-type reaction term. Zero on (-inf, theta], positive on (theta, 1),
/// zero at 1 and continued past 1 by its tangent line.
class ReactionCurve {
 public:
  using Fn = std::function<double(double)>;

  ReactionCurve(double theta, Fn value, Fn derivative);

  double theta() const { return theta_; }
  double operator()(double s) const { return value_(s); }
  double evaluate(double s) const { return value_(s); }
  double derivative(double s) const { return derivative_(s); }

  double lip() const { return lip_; }
  double lip_restricted(double alpha) const;

  template <typename Derived>
  auto apply(const Eigen::DenseBase<Derived>& s) const {
    return s.derived().unaryExpr([this](double x) { return value_(x); });
  }

 private:
  double theta_;
  Fn value_;
  Fn derivative_;
  double lip_;
};

/// s -> 1_{s>theta} (s-theta)^2 (1-s), tangent continuation for s > 1.
ReactionCurve make_reaction(double theta);

/// sup |f'| over the extended real line, by dense sampling of the derivative.
double lip_f(const ReactionCurve& curve);

/// sup |f'| over [0, alpha] with the same sampler.
double lip_on(const ReactionCurve& curve, double lo, double hi);

struct Rescaled {
  double c;
  double x;
};

/// x <- x / sqrt(D), c <- c / sqrt(D).
Rescaled rescale_frame(double c_physical, double x_physical, double D);
Rescaled unscale_frame(double c_rescaled, double x_rescaled, double D);

/// Uniform tensor grid on [x_lo, x_hi] × [-L, 0]; y index 0 is the bottom.
class StripGrid {
 public:
  StripGrid(double x_lo, double x_hi, int nx, int ny, double L);

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double L() const { return L_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double length() const { return x_hi_ - x_lo_; }

  double x(int j) const { return x_lo_ + j * hx_; }
  double y(int i) const { return -L_ + i * hy_; }
  int top() const { return ny_ - 1; }

  LineField xs() const;
  LineField ys() const;

  /// Linear interpolation of a line field at abscissa xq (clamped to the grid).
  double interpolate(const LineField& u, double xq) const;

  /// Same grid with nx, ny replaced.
  StripGrid refined(int nx, int ny) const { return {x_lo_, x_hi_, nx, ny, L_}; }

 private:
  double x_lo_, x_hi_;
  int nx_, ny_;
  double L_;
  double hx_, hy_;
};

using Diagnostics = std::map<std::string, double>;

struct FrontSolution {
  double c = 0.0;
  Regime regime = Regime::Limit;
  LineField u;
  StripField v;
  StripGrid grid;
  PhysParams params;
  Diagnostics diagnostics;
};

}  // namespace roadfront

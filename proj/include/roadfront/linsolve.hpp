#pragma once

#include "roadfront/core.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <memory>
#include <string>

namespace roadfront {

/// Tridiagonal matrix of order n: lower/upper have n-1 entries.
template <typename Scalar>
struct Tridiag {
  VectorX<Scalar> lower;
  VectorX<Scalar> diag;
  VectorX<Scalar> upper;

  Tridiag() = default;
  explicit Tridiag(Eigen::Index n)
      : lower(VectorX<Scalar>::Zero(n > 0 ? n - 1 : 0)),
        diag(VectorX<Scalar>::Zero(n)),
        upper(VectorX<Scalar>::Zero(n > 0 ? n - 1 : 0)) {}

  Eigen::Index size() const { return diag.size(); }

  bool consistent() const {
    const auto n = diag.size();
    return n > 0 && lower.size() == n - 1 && upper.size() == n - 1;
  }

  /// Strict row diagonal dominance.
  bool diagonally_dominant() const {
    const auto n = diag.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar off = 0;
      if (i > 0) off += std::abs(lower[i - 1]);
      if (i + 1 < n) off += std::abs(upper[i]);
      if (!(std::abs(diag[i]) > off)) return false;
    }
    return true;
  }

  VectorX<Scalar> apply(const VectorX<Scalar>& x) const {
    const auto n = diag.size();
    VectorX<Scalar> y = diag.cwiseProduct(x);
    if (n > 1) {
      y.head(n - 1) += upper.cwiseProduct(x.tail(n - 1));
      y.tail(n - 1) += lower.cwiseProduct(x.head(n - 1));
    }
    return y;
  }
};

/// Thomas algorithm, O(n). Throws NumericalError on a vanishing pivot.
template <typename Scalar, typename Rhs>
VectorX<Scalar> thomas_solve(const Tridiag<Scalar>& m, const Eigen::MatrixBase<Rhs>& rhs) {
  if (!m.consistent() || rhs.size() != m.size()) {
    throw NumericalError("thomas_solve: inconsistent tridiagonal dimensions");
  }
  const Eigen::Index n = m.size();
  VectorX<Scalar> c_star(n);
  VectorX<Scalar> x(n);
  Scalar pivot = m.diag[0];
  if (pivot == Scalar(0)) throw NumericalError("thomas_solve: zero pivot at row 0");
  c_star[0] = n > 1 ? m.upper[0] / pivot : Scalar(0);
  x[0] = rhs[0] / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = m.diag[i] - m.lower[i - 1] * c_star[i - 1];
    if (pivot == Scalar(0)) {
      throw NumericalError("thomas_solve: zero pivot at row " + std::to_string(i));
    }
    c_star[i] = i + 1 < n ? m.upper[i] / pivot : Scalar(0);
    x[i] = (rhs[i] - m.lower[i - 1] * x[i - 1]) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= c_star[i] * x[i + 1];
  return x;
}

enum class Advection { Upwind, Centered };

const char* to_string(Advection scheme);
Advection advection_from_string(const std::string& name);

/// Row kind of a strip node in the assembled 2D operator.
enum class NodeKind { Interior, Dirichlet };

/// 5-point stencil on the strip grid. Row (j, i) reads
///   center*v(j,i) + west*v(j-1,i) + east*v(j+1,i) + south*v(j,i-1) + north*v(j,i+1) = rhs.
/// Boundary closures (ghost-node Neumann at y=-L, Robin at y=0) are already folded
/// into the coefficients; `robin_gain` is the factor multiplying mu*u in the top row's rhs.
struct Banded2D {
  int nx = 0;
  int ny = 0;
  StripField center, west, east, south, north;
  Eigen::Matrix<NodeKind, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> kind;
  double robin_gain = 0.0;

  Eigen::Index index(int j, int i) const { return static_cast<Eigen::Index>(j) * ny + i; }
  Eigen::SparseMatrix<double> assemble() const;

  /// Nonpositive off-diagonals and weak row dominance with strict dominance on some row.
  bool is_m_matrix(double tol = 1e-14) const;

  StripField apply(const StripField& v) const;
};

/// The strip operator  -(d/D) dxx - d dyy + c dx + k  with Dirichlet left/right,
/// Robin d v_y + v = (data) at y=0 and Neumann at y=-L.
Banded2D assemble_strip_operator(const StripGrid& grid, const PhysParams& params, double c,
                                 double k, Advection scheme);

/// Factorizes a Banded2D once; solve() is then a pair of triangular sweeps.
class BandedSolver {
 public:
  explicit BandedSolver(Banded2D op);

  const Banded2D& op() const { return op_; }

  /// Solves and checks the residual against tol * |rhs|.
  StripField solve(const StripField& rhs, double tol = 1e-10) const;

 private:
  Banded2D op_;
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

StripField banded_solve(const Banded2D& m, const StripField& rhs, double tol = 1e-10);

}  // namespace roadfront

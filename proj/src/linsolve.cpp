#include "roadfront/linsolve.hpp"

#include <sstream>
#include <vector>

namespace roadfront {

const char* to_string(Advection scheme) {
  return scheme == Advection::Upwind ? "upwind" : "centered";
}

Advection advection_from_string(const std::string& name) {
  if (name == "upwind") return Advection::Upwind;
  if (name == "centered") return Advection::Centered;
  throw ParameterError("unknown advection scheme '" + name + "'");
}

Eigen::SparseMatrix<double> Banded2D::assemble() const {
  const Eigen::Index n = static_cast<Eigen::Index>(nx) * ny;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<size_t>(n) * 5);
  for (int j = 0; j < nx; ++j) {
    for (int i = 0; i < ny; ++i) {
      const auto row = index(j, i);
      entries.emplace_back(row, row, center(j, i));
      if (kind(j, i) == NodeKind::Dirichlet) continue;
      if (j > 0 && west(j, i) != 0.0) entries.emplace_back(row, index(j - 1, i), west(j, i));
      if (j + 1 < nx && east(j, i) != 0.0) entries.emplace_back(row, index(j + 1, i), east(j, i));
      if (i > 0 && south(j, i) != 0.0) entries.emplace_back(row, index(j, i - 1), south(j, i));
      if (i + 1 < ny && north(j, i) != 0.0) entries.emplace_back(row, index(j, i + 1), north(j, i));
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  return a;
}

bool Banded2D::is_m_matrix(double tol) const {
  bool strict_somewhere = false;
  for (int j = 0; j < nx; ++j) {
    for (int i = 0; i < ny; ++i) {
      if (kind(j, i) == NodeKind::Dirichlet) {
        strict_somewhere = true;
        continue;
      }
      const double offs[] = {west(j, i), east(j, i), south(j, i), north(j, i)};
      double sum = 0.0;
      for (double o : offs) {
        if (o > tol) return false;
        sum += -o;
      }
      if (center(j, i) + tol < sum) return false;
      if (center(j, i) > sum * (1.0 + 1e-12)) strict_somewhere = true;
    }
  }
  return strict_somewhere;
}

StripField Banded2D::apply(const StripField& v) const {
  StripField out(nx, ny);
  for (int j = 0; j < nx; ++j) {
    for (int i = 0; i < ny; ++i) {
      double s = center(j, i) * v(j, i);
      if (kind(j, i) == NodeKind::Interior) {
        if (j > 0) s += west(j, i) * v(j - 1, i);
        if (j + 1 < nx) s += east(j, i) * v(j + 1, i);
        if (i > 0) s += south(j, i) * v(j, i - 1);
        if (i + 1 < ny) s += north(j, i) * v(j, i + 1);
      }
      out(j, i) = s;
    }
  }
  return out;
}

Banded2D assemble_strip_operator(const StripGrid& grid, const PhysParams& params, double c,
                                 double k, Advection scheme) {
  if (params.limit()) {
    throw RegimeError("the elliptic strip operator needs a finite D");
  }
  const int nx = grid.nx(), ny = grid.ny();
  const double hx = grid.hx(), hy = grid.hy();
  const double ax = params.d / params.D / (hx * hx);
  const double ay = params.d / (hy * hy);

  Banded2D m;
  m.nx = nx;
  m.ny = ny;
  m.center = StripField::Zero(nx, ny);
  m.west = StripField::Zero(nx, ny);
  m.east = StripField::Zero(nx, ny);
  m.south = StripField::Zero(nx, ny);
  m.north = StripField::Zero(nx, ny);
  m.kind.resize(nx, ny);
  m.kind.setConstant(NodeKind::Interior);
  m.robin_gain = 2.0 / hy;

  for (int j = 0; j < nx; ++j) {
    for (int i = 0; i < ny; ++i) {
      if (j == 0 || j == nx - 1) {
        m.kind(j, i) = NodeKind::Dirichlet;
        m.center(j, i) = 1.0;
        continue;
      }
      double cc = 2.0 * ax + k, cw = -ax, ce = -ax;
      if (scheme == Advection::Upwind) {
        // c > 0 transports from the left; c < 0 from the right.
        if (c >= 0.0) {
          cc += c / hx;
          cw -= c / hx;
        } else {
          cc -= c / hx;
          ce += c / hx;
        }
      } else {
        cw -= 0.5 * c / hx;
        ce += 0.5 * c / hx;
      }
      double cs = 0.0, cn = 0.0;
      cc += 2.0 * ay;
      if (i == 0) {
        cn = -2.0 * ay;  // ghost v(-1) = v(1)
      } else if (i == ny - 1) {
        cs = -2.0 * ay;  // ghost from d v_y + v = mu u
        cc += 2.0 / hy;
      } else {
        cs = -ay;
        cn = -ay;
      }
      m.center(j, i) = cc;
      m.west(j, i) = cw;
      m.east(j, i) = ce;
      m.south(j, i) = cs;
      m.north(j, i) = cn;
    }
  }
  return m;
}

BandedSolver::BandedSolver(Banded2D op)
    : op_(std::move(op)), lu_(std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>()) {
  const auto a = op_.assemble();
  lu_->analyzePattern(a);
  lu_->factorize(a);
  if (lu_->info() != Eigen::Success) {
    throw NumericalError("banded factorization failed: " + lu_->lastErrorMessage());
  }
}

StripField BandedSolver::solve(const StripField& rhs, double tol) const {
  if (rhs.rows() != op_.nx || rhs.cols() != op_.ny) {
    throw NumericalError("banded_solve: rhs has the wrong shape");
  }
  const Eigen::Map<const VectorX<double>> b(rhs.data(), rhs.size());
  VectorX<double> x = lu_->solve(b);
  StripField v = Eigen::Map<const StripField>(x.data(), op_.nx, op_.ny);
  const double rnorm = (op_.apply(v) - rhs).cwiseAbs().maxCoeff();
  const double bnorm = rhs.cwiseAbs().maxCoeff();
  if (!(rnorm <= tol * std::max(bnorm, 1e-300)) && rnorm > 1e-13) {
    std::ostringstream msg;
    msg << "banded_solve: residual " << rnorm << " exceeds " << tol << " * " << bnorm;
    throw NumericalError(msg.str());
  }
  return v;
}

StripField banded_solve(const Banded2D& m, const StripField& rhs, double tol) {
  return BandedSolver(m).solve(rhs, tol);
}

}  // namespace roadfront

#include "roadfront/coupled.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace roadfront {

namespace {

void require_shape(const LineField& u, const StripGrid& grid, const char* what) {
  if (u.size() != grid.nx()) {
    throw ParameterError(std::string(what) + ": line array does not match nx");
  }
}

void require_shape(const StripField& v, const StripGrid& grid, const char* what) {
  if (v.rows() != grid.nx() || v.cols() != grid.ny()) {
    throw ParameterError(std::string(what) + ": strip array does not match (nx, ny)");
  }
}

// One implicit upwind x-step of  c dx v - d dyy v + k v  as a tridiagonal in y.
Tridiag<double> march_column(const StripGrid& grid, const PhysParams& params, double c, double k) {
  const int ny = grid.ny();
  const double hy = grid.hy();
  const double ay = params.d / (hy * hy);
  Tridiag<double> m(ny);
  m.diag.setConstant(c / grid.hx() + k + 2.0 * ay);
  m.diag[ny - 1] += 2.0 / hy;
  m.lower.setConstant(-ay);
  m.upper.setConstant(-ay);
  m.upper[0] = -2.0 * ay;
  m.lower[ny - 2] = -2.0 * ay;
  return m;
}

// Line coefficients on an interior row j: (west, center, east) without the mu+k term.
struct LineStencil {
  double west, center, east;
};

LineStencil line_stencil(double hx, double c, Advection scheme) {
  const double a = 1.0 / (hx * hx);
  LineStencil s{-a, 2.0 * a, -a};
  if (scheme == Advection::Upwind) {
    if (c >= 0.0) {
      s.center += c / hx;
      s.west -= c / hx;
    } else {
      s.center -= c / hx;
      s.east += c / hx;
    }
  } else {
    s.west -= 0.5 * c / hx;
    s.east += 0.5 * c / hx;
  }
  return s;
}

// Raw residual of the k = 0 operators minus the reaction, with the diagonal of each row
// (used to express the residual in units of the unknowns).
struct ScaledResidual {
  Residual raw;
  LineField line_diag;
  StripField strip_diag;
};

ScaledResidual compute_residual(double c, const ReactionCurve& curve, const StripGrid& grid,
                                const PhysParams& params, Regime regime, const LineField& u,
                                const StripField& v, const BoundaryData& bc, Advection scheme) {
  const int nx = grid.nx(), ny = grid.ny();
  const double hx = grid.hx(), hy = grid.hy();
  const double ay = params.d / (hy * hy);
  ScaledResidual out;
  out.raw.line = LineField::Zero(nx);
  out.raw.strip = StripField::Zero(nx, ny);
  out.line_diag = LineField::Ones(nx);
  out.strip_diag = StripField::Ones(nx, ny);

  const auto ls = line_stencil(hx, c, scheme);
  out.raw.line[0] = u[0] - bc.u_left;
  out.raw.line[nx - 1] = u[nx - 1] - bc.u_right;
  for (int j = 1; j < nx - 1; ++j) {
    out.raw.line[j] = ls.west * u[j - 1] + (ls.center + params.mu) * u[j] + ls.east * u[j + 1] -
                      v(j, ny - 1);
    out.line_diag[j] = ls.center + params.mu;
  }

  if (regime == Regime::Limit) {
    for (int i = 0; i < ny; ++i) out.raw.strip(0, i) = v(0, i) - bc.v_left[i];
    for (int j = 1; j < nx; ++j) {
      for (int i = 0; i < ny; ++i) {
        double lap;
        if (i == 0) {
          lap = 2.0 * ay * (v(j, 0) - v(j, 1));
        } else if (i == ny - 1) {
          lap = 2.0 * ay * (v(j, i) - v(j, i - 1)) + 2.0 / hy * (v(j, i) - params.mu * u[j]);
        } else {
          lap = ay * (2.0 * v(j, i) - v(j, i - 1) - v(j, i + 1));
        }
        out.raw.strip(j, i) = c * (v(j, i) - v(j - 1, i)) / hx + lap - curve(v(j, i));
        out.strip_diag(j, i) = c / hx + 2.0 * ay + (i == ny - 1 ? 2.0 / hy : 0.0);
      }
    }
  } else {
    const auto op = assemble_strip_operator(grid, params, c, 0.0, scheme);
    const StripField lv = op.apply(v);
    for (int j = 0; j < nx; ++j) {
      for (int i = 0; i < ny; ++i) {
        if (op.kind(j, i) == NodeKind::Dirichlet) {
          out.raw.strip(j, i) = v(j, i) - (j == 0 ? bc.v_left[i] : bc.v_right[i]);
        } else {
          double r = lv(j, i) - curve(v(j, i));
          if (i == ny - 1) r -= op.robin_gain * params.mu * u[j];
          out.raw.strip(j, i) = r;
          out.strip_diag(j, i) = op.center(j, i);
        }
      }
    }
  }
  return out;
}

}  // namespace

BoundaryData BoundaryData::zero(const StripGrid& grid) {
  BoundaryData bc;
  bc.v_left = LineField::Zero(grid.ny());
  bc.v_right = LineField::Zero(grid.ny());
  return bc;
}

BoundaryData BoundaryData::front(const StripGrid& grid, const PhysParams& params) {
  BoundaryData bc;
  bc.u_left = 0.0;
  bc.u_right = 1.0 / params.mu;
  bc.v_left = LineField::Zero(grid.ny());
  bc.v_right = LineField::Ones(grid.ny());
  return bc;
}

Tridiag<double> line_operator(const StripGrid& grid, const PhysParams& params, double c, double k,
                              Advection scheme) {
  const int nx = grid.nx();
  const auto s = line_stencil(grid.hx(), c, scheme);
  Tridiag<double> m(nx);
  m.diag.setConstant(s.center + params.mu + k);
  m.lower.setConstant(s.west);
  m.upper.setConstant(s.east);
  m.diag[0] = 1.0;
  m.upper[0] = 0.0;
  m.diag[nx - 1] = 1.0;
  m.lower[nx - 2] = 0.0;
  return m;
}

LineField op_T(const LineField& v_trace, const LineField& g, double k, double c,
               const StripGrid& grid, const PhysParams& params, double u_left, double u_right,
               Advection scheme) {
  require_shape(v_trace, grid, "op_T");
  require_shape(g, grid, "op_T");
  const int nx = grid.nx();
  LineField rhs = g + v_trace;
  rhs[0] = u_left;
  rhs[nx - 1] = u_right;
  return thomas_solve(line_operator(grid, params, c, k, scheme), rhs);
}

StripField op_S_limit(const LineField& u, const StripField& h, double k, double c,
                      const StripGrid& grid, const PhysParams& params, const LineField& v_inlet) {
  BoundaryData bc = BoundaryData::zero(grid);
  bc.v_left = v_inlet;
  return StripSolver(grid, params, Regime::Limit, c, k).solve(u, h, bc);
}

StripField op_S_finiteD(const LineField& u, const StripField& h, double k, double c,
                        const StripGrid& grid, const PhysParams& params, const LineField& v_left,
                        const LineField& v_right, Advection scheme) {
  BoundaryData bc = BoundaryData::zero(grid);
  bc.v_left = v_left;
  bc.v_right = v_right;
  return StripSolver(grid, params, Regime::FiniteD, c, k, scheme).solve(u, h, bc);
}

StripSolver::StripSolver(const StripGrid& grid, const PhysParams& params, Regime regime, double c,
                         double k, Advection scheme)
    : grid_(grid), params_(params), regime_(regime), c_(c), k_(k) {
  if (regime == Regime::Limit) {
    if (!(c > 0.0)) throw RegimeError("the limit-regime strip march requires c > 0");
    column_ = march_column(grid, params, c, k);
  } else {
    elliptic_.emplace(assemble_strip_operator(grid, params, c, k, scheme));
  }
}

StripField StripSolver::solve(const LineField& u, const StripField& h,
                              const BoundaryData& bc) const {
  require_shape(u, grid_, "strip solve");
  require_shape(h, grid_, "strip solve");
  const int nx = grid_.nx(), ny = grid_.ny();
  const double robin = 2.0 / grid_.hy() * params_.mu;
  if (regime_ == Regime::Limit) {
    StripField v(nx, ny);
    v.row(0) = bc.v_left.transpose();
    const double adv = c_ / grid_.hx();
    LineField rhs(ny);
    for (int j = 1; j < nx; ++j) {
      rhs = h.row(j).transpose() + adv * v.row(j - 1).transpose();
      rhs[ny - 1] += robin * u[j];
      v.row(j) = thomas_solve(column_, rhs).transpose();
    }
    return v;
  }
  StripField rhs = h;
  rhs.col(ny - 1) += robin * u;
  rhs.row(0) = bc.v_left.transpose();
  rhs.row(nx - 1) = bc.v_right.transpose();
  return elliptic_->solve(rhs);
}

LinearSolveResult linear_coupled_solve(const LinearProblemData& data, const StripGrid& grid,
                                       const PhysParams& params, const BoundaryData& bc,
                                       const FixedPointOptions& options) {
  require_shape(data.g, grid, "linear_coupled_solve");
  require_shape(data.h, grid, "linear_coupled_solve");
  if (!(data.k > 0.0)) throw ParameterError("linear_coupled_solve requires k > 0");
  const StripSolver strip(grid, params, data.regime, data.c, data.k, options.scheme);
  const auto line = line_operator(grid, params, data.c, data.k, options.scheme);
  const int nx = grid.nx(), top = grid.top();

  LinearSolveResult out;
  LineField u = options.u_start.value_or(LineField::Zero(nx));
  require_shape(u, grid, "linear_coupled_solve start");
  double previous = -1.0;
  LineField rhs(nx);
  for (int n = 1; n <= options.max_iterations; ++n) {
    const StripField v = strip.solve(u, data.h, bc);
    rhs = data.g + v.col(top);
    rhs[0] = bc.u_left;
    rhs[nx - 1] = bc.u_right;
    LineField next = thomas_solve(line, rhs);
    const double diff = (next - u).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, next.cwiseAbs().maxCoeff());
    if (previous > 1e-10 * scale) {
      const double factor = diff / previous;
      out.factors.push_back(factor);
      out.max_factor = std::max(out.max_factor, factor);
    }
    previous = diff;
    u = std::move(next);
    out.iterations = n;
    if (diff <= options.tol * scale) {
      out.v = strip.solve(u, data.h, bc);
      out.u = std::move(u);
      return out;
    }
  }
  std::ostringstream msg;
  msg << "linear_coupled_solve: no convergence after " << options.max_iterations
      << " iterations (last factor " << (out.factors.empty() ? 0.0 : out.factors.back()) << ")";
  throw NumericalError(msg.str());
}

CoupledOperator::CoupledOperator(const StripGrid& grid, const PhysParams& params, Regime regime,
                                 double c, double k, Advection scheme)
    : grid_(grid),
      params_(params),
      regime_(regime),
      c_(c),
      k_(k),
      nx_(grid.nx()),
      ny_(grid.ny()),
      lu_(std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>()) {
  if (regime == Regime::Limit && !(c > 0.0)) {
    throw RegimeError("the limit-regime strip march requires c > 0");
  }
  const double hx = grid.hx(), hy = grid.hy();
  const double robin = 2.0 / hy * params.mu;
  const Eigen::Index n = static_cast<Eigen::Index>(nx_) * (ny_ + 1);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(n) * 6);

  if (regime == Regime::Limit) {
    const auto col = march_column(grid, params, c, k);
    for (int i = 0; i < ny_; ++i) t.emplace_back(v_index(0, i), v_index(0, i), 1.0);
    for (int j = 1; j < nx_; ++j) {
      for (int i = 0; i < ny_; ++i) {
        const auto r = v_index(j, i);
        t.emplace_back(r, r, col.diag[i]);
        t.emplace_back(r, v_index(j - 1, i), -c / hx);
        if (i > 0) t.emplace_back(r, v_index(j, i - 1), col.lower[i - 1]);
        if (i + 1 < ny_) t.emplace_back(r, v_index(j, i + 1), col.upper[i]);
      }
      t.emplace_back(v_index(j, ny_ - 1), u_index(j), -robin);
    }
  } else {
    const auto op = assemble_strip_operator(grid, params, c, k, scheme);
    for (int j = 0; j < nx_; ++j) {
      for (int i = 0; i < ny_; ++i) {
        const auto r = v_index(j, i);
        t.emplace_back(r, r, op.center(j, i));
        if (op.kind(j, i) == NodeKind::Dirichlet) continue;
        if (op.west(j, i) != 0.0) t.emplace_back(r, v_index(j - 1, i), op.west(j, i));
        if (op.east(j, i) != 0.0) t.emplace_back(r, v_index(j + 1, i), op.east(j, i));
        if (i > 0) t.emplace_back(r, v_index(j, i - 1), op.south(j, i));
        if (i + 1 < ny_) t.emplace_back(r, v_index(j, i + 1), op.north(j, i));
        if (i == ny_ - 1) t.emplace_back(r, u_index(j), -op.robin_gain * params.mu);
      }
    }
  }

  const auto ls = line_stencil(hx, c, scheme);
  t.emplace_back(u_index(0), u_index(0), 1.0);
  t.emplace_back(u_index(nx_ - 1), u_index(nx_ - 1), 1.0);
  for (int j = 1; j < nx_ - 1; ++j) {
    const auto r = u_index(j);
    t.emplace_back(r, r, ls.center + params.mu + k);
    t.emplace_back(r, u_index(j - 1), ls.west);
    t.emplace_back(r, u_index(j + 1), ls.east);
    t.emplace_back(r, v_index(j, ny_ - 1), -1.0);
  }

  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  lu_->analyzePattern(a);
  lu_->factorize(a);
  if (lu_->info() != Eigen::Success) {
    throw NumericalError("coupled factorization failed: " + lu_->lastErrorMessage());
  }
}

std::pair<LineField, StripField> CoupledOperator::solve(const LineField& g, const StripField& h,
                                                        const BoundaryData& bc) const {
  require_shape(g, grid_, "coupled solve");
  require_shape(h, grid_, "coupled solve");
  VectorX<double> b(static_cast<Eigen::Index>(nx_) * (ny_ + 1));
  for (int j = 0; j < nx_; ++j) {
    for (int i = 0; i < ny_; ++i) b[v_index(j, i)] = h(j, i);
    b[u_index(j)] = g[j];
  }
  for (int i = 0; i < ny_; ++i) {
    b[v_index(0, i)] = bc.v_left[i];
    if (regime_ == Regime::FiniteD) b[v_index(nx_ - 1, i)] = bc.v_right[i];
  }
  b[u_index(0)] = bc.u_left;
  b[u_index(nx_ - 1)] = bc.u_right;

  const VectorX<double> x = lu_->solve(b);
  std::pair<LineField, StripField> out{LineField(nx_), StripField(nx_, ny_)};
  for (int j = 0; j < nx_; ++j) {
    for (int i = 0; i < ny_; ++i) out.second(j, i) = x[v_index(j, i)];
    out.first[j] = x[u_index(j)];
  }
  return out;
}

double Residual::sup() const {
  return std::max(line.cwiseAbs().maxCoeff(), strip.cwiseAbs().maxCoeff());
}

Residual nonlinear_residual(double c, const ReactionCurve& curve, const StripGrid& grid,
                            const PhysParams& params, Regime regime, const LineField& u,
                            const StripField& v, const BoundaryData& bc, Advection scheme) {
  return compute_residual(c, curve, grid, params, regime, u, v, bc, scheme).raw;
}

bool is_supersolution(double c, const ReactionCurve& curve, const StripGrid& grid,
                      const PhysParams& params, Regime regime, const LineField& u,
                      const StripField& v, const BoundaryData& bc, double slack,
                      Advection scheme) {
  const auto r = compute_residual(c, curve, grid, params, regime, u, v, bc, scheme);
  if ((r.raw.line.array() / r.line_diag.array()).minCoeff() < -slack) return false;
  return (r.raw.strip.array() / r.strip_diag.array()).minCoeff() >= -slack;
}

bool is_subsolution(double c, const ReactionCurve& curve, const StripGrid& grid,
                    const PhysParams& params, Regime regime, const LineField& u,
                    const StripField& v, const BoundaryData& bc, double slack,
                    Advection scheme) {
  const auto r = compute_residual(c, curve, grid, params, regime, u, v, bc, scheme);
  if ((r.raw.line.array() / r.line_diag.array()).maxCoeff() > slack) return false;
  return (r.raw.strip.array() / r.strip_diag.array()).maxCoeff() <= slack;
}

double default_penalty(const ReactionCurve& curve) { return 1.01 * curve.lip() + 0.1; }

MonotoneStepper::MonotoneStepper(double c, const ReactionCurve& curve, const StripGrid& grid,
                                 const PhysParams& params, Regime regime,
                                 const MonotoneOptions& options)
    : c_(c),
      curve_(&curve),
      grid_(grid),
      params_(params),
      regime_(regime),
      k_(options.k > 0.0 ? options.k : default_penalty(curve)),
      options_(options),
      bc_(options.boundary.value_or(BoundaryData::front(grid, params))) {
  params.validate();
  if (regime == Regime::FiniteD && params.limit()) {
    throw RegimeError("finite-D regime requires a finite D");
  }
  if (regime == Regime::Limit && !(c > 0.0)) {
    throw RegimeError("the limit regime requires c > 0");
  }
  if (!(k_ > curve.lip())) {
    throw ParameterError("penalization k must exceed Lip f");
  }
  options_.observer = nullptr;
  options_.start.reset();
  if (options.inner == InnerSolver::Direct) {
    direct_.emplace(grid, params, regime, c, k_, options.scheme);
  }
}

std::pair<LineField, StripField> MonotoneStepper::step(const LineField& u,
                                                       const StripField& v) const {
  const LineField g = k_ * u;
  const StripField h = curve_->apply(v) + k_ * v;
  if (direct_) return direct_->solve(g, h, bc_);
  LinearProblemData data{g, h, k_, c_, regime_};
  FixedPointOptions fp;
  fp.tol = 1e-14;
  fp.scheme = options_.scheme;
  fp.u_start = u;
  auto r = linear_coupled_solve(data, grid_, params_, bc_, fp);
  return {std::move(r.u), std::move(r.v)};
}

FrontSolution monotone_solve(double c, const ReactionCurve& curve, const StripGrid& grid,
                             const PhysParams& params, Regime regime,
                             const MonotoneOptions& options) {
  const MonotoneStepper stepper(c, curve, grid, params, regime, options);
  const int nx = grid.nx(), ny = grid.ny();
  const double mu = params.mu;
  constexpr double kOrderSlack = 1e-10;

  LineField u;
  StripField v;
  if (options.start) {
    u = options.start->first;
    v = options.start->second;
    require_shape(u, grid, "monotone_solve start");
    require_shape(v, grid, "monotone_solve start");
  } else {
    u = LineField::Constant(nx, 1.0 / mu);
    v = StripField::Constant(nx, ny, 1.0);
  }

  double decrement = 0.0;
  int n = 0;
  bool converged = false;
  while (n < options.max_iterations) {
    auto [u1, v1] = stepper.step(u, v);
    ++n;
    if (options.check_invariants) {
      const double rise = std::max((u1 - u).maxCoeff(), (v1 - v).maxCoeff());
      if (rise > kOrderSlack) {
        std::ostringstream msg;
        msg << "monotone_solve: iterate " << n << " increased by " << rise << " at c = " << c;
        throw InvariantError(msg.str());
      }
      const double lo = std::min((mu * u1).minCoeff(), v1.minCoeff());
      const double hi = std::max((mu * u1).maxCoeff(), v1.maxCoeff());
      if (lo < -kOrderSlack || hi > 1.0 + kOrderSlack) {
        std::ostringstream msg;
        msg << "monotone_solve: iterate " << n << " left [0,1/mu]x[0,1] (range " << lo << ", "
            << hi << ")";
        throw InvariantError(msg.str());
      }
    }
    decrement = std::max((u - u1).cwiseAbs().maxCoeff(), (v - v1).cwiseAbs().maxCoeff());
    u = std::move(u1);
    v = std::move(v1);
    if (options.observer) options.observer(n, u, v);
    if (decrement < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "monotone_solve: no convergence at c = " << c << " after " << n
        << " iterations (last decrement " << decrement << ")";
    throw NumericalError(msg.str());
  }

  FrontSolution sol{c, regime, std::move(u), std::move(v), grid, params, {}};
  const auto res = nonlinear_residual(c, curve, grid, params, regime, sol.u, sol.v,
                                      stepper.boundary(), options.scheme);
  sol.diagnostics["iterations"] = n;
  sol.diagnostics["final_decrement"] = decrement;
  sol.diagnostics["residual"] = res.sup();
  sol.diagnostics["k"] = stepper.k();
  return sol;
}

}  // namespace roadfront

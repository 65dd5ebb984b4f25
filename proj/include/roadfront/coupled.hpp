#pragma once

#include "roadfront/core.hpp"
#include "roadfront/linsolve.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace roadfront {

/// Dirichlet data on the truncated box. v_right is ignored in the limit regime,
/// where the strip equation is marched in x and carries no right condition.
struct BoundaryData {
  double u_left = 0.0;
  double u_right = 0.0;
  LineField v_left;
  LineField v_right;

  static BoundaryData zero(const StripGrid& grid);
  /// (0,0) on the left, (1/mu, 1) on the right.
  static BoundaryData front(const StripGrid& grid, const PhysParams& params);
};

/// Data of the penalized linear problem
///   -u'' + c u' + (mu+k) u - v(.,0) = g,    c dx v - d dyy v (- d/D dxx v) + k v = h.
struct LinearProblemData {
  LineField g;
  StripField h;
  double k = 1.0;
  double c = 1.0;
  Regime regime = Regime::Limit;
};

/// -u'' + c u' + (mu+k) u with Dirichlet end rows.
Tridiag<double> line_operator(const StripGrid& grid, const PhysParams& params, double c, double k,
                              Advection scheme);

LineField op_T(const LineField& v_trace, const LineField& g, double k, double c,
               const StripGrid& grid, const PhysParams& params, double u_left, double u_right,
               Advection scheme = Advection::Upwind);

StripField op_S_limit(const LineField& u, const StripField& h, double k, double c,
                      const StripGrid& grid, const PhysParams& params, const LineField& v_inlet);

StripField op_S_finiteD(const LineField& u, const StripField& h, double k, double c,
                        const StripGrid& grid, const PhysParams& params, const LineField& v_left,
                        const LineField& v_right, Advection scheme = Advection::Upwind);

/// Strip half of the linear problem with its factorization cached: u -> v.
class StripSolver {
 public:
  StripSolver(const StripGrid& grid, const PhysParams& params, Regime regime, double c, double k,
              Advection scheme = Advection::Upwind);

  StripField solve(const LineField& u, const StripField& h, const BoundaryData& bc) const;

 private:
  StripGrid grid_;
  PhysParams params_;
  Regime regime_;
  double c_, k_;
  Tridiag<double> column_;                 // limit regime: one implicit x-step
  std::optional<BandedSolver> elliptic_;  // finite D
};

struct LinearSolveResult {
  LineField u;
  StripField v;
  int iterations = 0;
  std::vector<double> factors;  // |u_{n+1}-u_n| / |u_n-u_{n-1}|
  double max_factor = 0.0;
};

struct FixedPointOptions {
  double tol = 1e-12;
  int max_iterations = 2000;
  Advection scheme = Advection::Upwind;
  std::optional<LineField> u_start;
};

/// Solves the linear problem by the fixed point u <- T(S(u)(.,0)), whose
/// contraction constant is mu/(mu+k).
LinearSolveResult linear_coupled_solve(const LinearProblemData& data, const StripGrid& grid,
                                       const PhysParams& params, const BoundaryData& bc,
                                       const FixedPointOptions& options = {});

/// The same linear problem assembled as one sparse system in (v, u) and factorized once.
class CoupledOperator {
 public:
  CoupledOperator(const StripGrid& grid, const PhysParams& params, Regime regime, double c,
                  double k, Advection scheme = Advection::Upwind);

  std::pair<LineField, StripField> solve(const LineField& g, const StripField& h,
                                         const BoundaryData& bc) const;

  double c() const { return c_; }
  double k() const { return k_; }

 private:
  Eigen::Index v_index(int j, int i) const { return static_cast<Eigen::Index>(j) * (ny_ + 1) + i; }
  Eigen::Index u_index(int j) const { return static_cast<Eigen::Index>(j) * (ny_ + 1) + ny_; }

  StripGrid grid_;
  PhysParams params_;
  Regime regime_;
  double c_, k_;
  int nx_, ny_;
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

enum class InnerSolver { Direct, FixedPoint };

/// Discrete nonlinear residual split by component.
struct Residual {
  LineField line;   // -u'' + c u' + mu u - v(.,0) on interior nodes, 0 on Dirichlet nodes
  StripField strip; // strip equation minus f(v); Robin folded in at the top row
  double sup() const;
};

Residual nonlinear_residual(double c, const ReactionCurve& curve, const StripGrid& grid,
                            const PhysParams& params, Regime regime, const LineField& u,
                            const StripField& v, const BoundaryData& bc,
                            Advection scheme = Advection::Upwind);

/// True when (u, v) lies above the equations and the boundary data (up to slack).
bool is_supersolution(double c, const ReactionCurve& curve, const StripGrid& grid,
                      const PhysParams& params, Regime regime, const LineField& u,
                      const StripField& v, const BoundaryData& bc, double slack = 1e-12,
                      Advection scheme = Advection::Upwind);

/// True when (u, v) lies below the equations and the boundary data (up to slack).
bool is_subsolution(double c, const ReactionCurve& curve, const StripGrid& grid,
                    const PhysParams& params, Regime regime, const LineField& u,
                    const StripField& v, const BoundaryData& bc, double slack = 1e-12,
                    Advection scheme = Advection::Upwind);

struct MonotoneOptions {
  double tol = 1e-9;
  int max_iterations = 400000;
  /// Penalization constant; nonpositive selects 1.01 Lip f + 0.1.
  double k = 0.0;
  InnerSolver inner = InnerSolver::Direct;
  Advection scheme = Advection::Upwind;
  /// Starting supersolution; (1/mu, 1) when absent.
  std::optional<std::pair<LineField, StripField>> start;
  std::optional<BoundaryData> boundary;
  bool check_invariants = true;
  /// Called after every outer iteration with (n, u_n, v_n).
  std::function<void(int, const LineField&, const StripField&)> observer;
};

double default_penalty(const ReactionCurve& curve);

/// Monotone (Perron) iteration from a supersolution toward the front at fixed c.
FrontSolution monotone_solve(double c, const ReactionCurve& curve, const StripGrid& grid,
                             const PhysParams& params, Regime regime,
                             const MonotoneOptions& options = {});

/// One outer step of the monotone scheme, shared by monotone_solve and the speed search.
class MonotoneStepper {
 public:
  MonotoneStepper(double c, const ReactionCurve& curve, const StripGrid& grid,
                  const PhysParams& params, Regime regime, const MonotoneOptions& options);

  std::pair<LineField, StripField> step(const LineField& u, const StripField& v) const;

  const BoundaryData& boundary() const { return bc_; }
  double k() const { return k_; }

 private:
  double c_;
  const ReactionCurve* curve_;
  StripGrid grid_;
  PhysParams params_;
  Regime regime_;
  double k_;
  MonotoneOptions options_;
  BoundaryData bc_;
  std::optional<CoupledOperator> direct_;
};

}  // namespace roadfront

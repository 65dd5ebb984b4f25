#include "roadfront/speed.hpp"

#include <cmath>
#include <sstream>

namespace roadfront {

namespace {

constexpr double kOrderSlack = 1e-10;

bool same_shape(const FieldPair& p, const StripGrid& grid) {
  return p.first.size() == grid.nx() && p.second.rows() == grid.nx() &&
         p.second.cols() == grid.ny();
}

double sup_diff(const FieldPair& a, const FieldPair& b) {
  return std::max((a.first - b.first).cwiseAbs().maxCoeff(),
                  (a.second - b.second).cwiseAbs().maxCoeff());
}

// max over nodes of (a - b); positive means a is somewhere above b.
double excess(const FieldPair& a, const FieldPair& b) {
  return std::max((a.first - b.first).maxCoeff(), (a.second - b.second).maxCoeff());
}

}  // namespace

Pin make_pin(const StripGrid& grid, double theta) {
  return {0.5 * (1.0 + theta), grid.x_lo() + (2.0 + theta) / 3.0 * grid.length()};
}

double pin_value(const LineField& u, const StripGrid& grid, const PhysParams& params,
                 const Pin& pin) {
  return params.mu * grid.interpolate(u, pin.x) - pin.target;
}

double pin_functional(double c, const ReactionCurve& curve, const StripGrid& grid,
                      const PhysParams& params, Regime regime, const MonotoneOptions& options) {
  if (!(c > 0.0)) throw ParameterError("pin_functional requires c > 0");
  const auto sol = monotone_solve(c, curve, grid, params, regime, options);
  return pin_value(sol.u, grid, params, make_pin(grid, curve.theta()));
}

SignCertificate certify_pin_sign(double c, const ReactionCurve& curve, const StripGrid& grid,
                                 const PhysParams& params, Regime regime,
                                 const MonotoneOptions& options,
                                 const std::optional<FieldPair>& super_start,
                                 const std::optional<FieldPair>& sub_start) {
  const MonotoneStepper stepper(c, curve, grid, params, regime, options);
  const auto& bc = stepper.boundary();
  const Pin pin = make_pin(grid, curve.theta());
  const int nx = grid.nx(), ny = grid.ny();

  SignCertificate out;
  if (super_start && same_shape(*super_start, grid) &&
      is_supersolution(c, curve, grid, params, regime, super_start->first, super_start->second,
                       bc, 1e-12, options.scheme)) {
    out.super = *super_start;
  } else {
    out.super = {LineField::Constant(nx, 1.0 / params.mu), StripField::Ones(nx, ny)};
  }
  if (sub_start && same_shape(*sub_start, grid) &&
      is_subsolution(c, curve, grid, params, regime, sub_start->first, sub_start->second, bc,
                     1e-12, options.scheme)) {
    out.sub = *sub_start;
  } else {
    out.sub = {LineField::Zero(nx), StripField::Zero(nx, ny)};
  }

  bool super_done = false, sub_done = false;
  for (int n = 0; n < options.max_iterations; ++n) {
    out.g_high = pin_value(out.super.first, grid, params, pin);
    out.g_low = pin_value(out.sub.first, grid, params, pin);
    if (out.g_high < 0.0) {
      out.sign = -1;
      return out;
    }
    if (out.g_low > 0.0) {
      out.sign = 1;
      return out;
    }
    if (super_done && sub_done) {
      out.converged = true;
      out.sign = (out.g_low + out.g_high) >= 0.0 ? 1 : -1;
      return out;
    }

    FieldPair super_next = stepper.step(out.super.first, out.super.second);
    FieldPair sub_next = stepper.step(out.sub.first, out.sub.second);
    ++out.iterations;
    if (options.check_invariants) {
      const double rise = excess(super_next, out.super);
      const double fall = excess(out.sub, sub_next);
      const double cross = excess(sub_next, super_next);
      if (rise > kOrderSlack || fall > kOrderSlack || cross > kOrderSlack) {
        std::ostringstream msg;
        msg << "certify_pin_sign: ordering lost at c = " << c << " after " << out.iterations
            << " steps (rise " << rise << ", fall " << fall << ", crossing " << cross << ")";
        throw InvariantError(msg.str());
      }
    }
    super_done = sup_diff(super_next, out.super) < options.tol;
    sub_done = sup_diff(sub_next, out.sub) < options.tol;
    out.super = std::move(super_next);
    out.sub = std::move(sub_next);
    if (options.observer) options.observer(out.iterations, out.super.first, out.super.second);
  }
  std::ostringstream msg;
  msg << "certify_pin_sign: undecided at c = " << c << " after " << options.max_iterations
      << " steps (G in [" << out.g_low << ", " << out.g_high << "])";
  throw NumericalError(msg.str());
}

SpeedResult find_speed(const ReactionCurve& curve, const StripGrid& grid, const PhysParams& params,
                       Regime regime, const SpeedOptions& options) {
  params.validate();
  if (!(options.tol_c > 0.0)) throw ParameterError("tol_c must be positive");
  const double root_lip = std::sqrt(curve.lip());
  const double c_ceiling = 10.0 * root_lip;
  const double c_floor = 1e-3 * root_lip;
  const Pin pin = make_pin(grid, curve.theta());

  SpeedBracket br;
  br.target = pin.target;
  br.pin_x = pin.x;

  std::optional<FieldPair> super_seed;  // supersolution at every c above the last positive probe
  std::optional<FieldPair> sub_seed;    // subsolution at every c below the last negative probe

  auto probe = [&](double c) {
    auto cert = certify_pin_sign(c, curve, grid, params, regime, options.solver, super_seed,
                                 sub_seed);
    br.history.push_back({c, cert.g_low, cert.g_high, cert.iterations});
    if (cert.sign > 0) {
      super_seed = std::move(cert.super);
    } else {
      sub_seed = std::move(cert.sub);
    }
    return cert.sign;
  };

  double hi = options.c_hi > 0.0 ? options.c_hi : root_lip;
  while (probe(hi) > 0) {
    if (hi >= c_ceiling) {
      throw ParameterError("find_speed: G stays positive up to c = 10 sqrt(Lip f); "
                           "the domain is too short or the grid too coarse");
    }
    hi = std::min(2.0 * hi, c_ceiling);
  }
  double lo = options.c_lo > 0.0 ? std::min(options.c_lo, hi) : 0.05 * root_lip;
  if (lo >= hi) lo = 0.5 * hi;
  while (probe(lo) < 0) {
    hi = lo;
    if (lo <= c_floor) {
      throw ParameterError("find_speed: G stays negative down to c = 1e-3 sqrt(Lip f); "
                           "the domain is too short or the grid too coarse");
    }
    lo = std::max(0.5 * lo, c_floor);
  }

  // Seeds now match the bracket: super_seed was computed at lo, sub_seed at hi.
  for (int n = 0; n < options.max_bisections && hi - lo > options.tol_c; ++n) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo > options.tol_c) {
    std::ostringstream msg;
    msg << "find_speed: bracket width " << hi - lo << " above tol_c after "
        << options.max_bisections << " bisections";
    throw NumericalError(msg.str());
  }
  br.c_lo = lo;
  br.c_hi = hi;
  const double c = 0.5 * (lo + hi);

  MonotoneOptions solve = options.solver;
  if (super_seed && is_supersolution(c, curve, grid, params, regime, super_seed->first,
                                     super_seed->second,
                                     solve.boundary.value_or(BoundaryData::front(grid, params)),
                                     1e-12, solve.scheme)) {
    solve.start = *super_seed;
  }
  SpeedResult result{c, monotone_solve(c, curve, grid, params, regime, solve), std::move(br)};
  result.front.diagnostics["pin_residual"] = pin_value(result.front.u, grid, params, pin);
  result.front.diagnostics["bracket_lo"] = lo;
  result.front.diagnostics["bracket_hi"] = hi;
  result.front.diagnostics["probes"] = static_cast<double>(result.bracket.history.size());
  return result;
}

}  // namespace roadfront

#include "roadfront/speed.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace roadfront;

namespace {

const ReactionCurve& curve() {
  static const ReactionCurve f = make_reaction(0.3);
  return f;
}

StripGrid small_grid() { return {0.0, 12.0, 61, 9, 1.0}; }

}  // namespace

TEST(Pin, TargetAndAbscissa) {
  const StripGrid g(2.0, 32.0, 31, 5, 1.0);
  const Pin pin = make_pin(g, 0.3);
  EXPECT_DOUBLE_EQ(pin.target, 0.65);
  EXPECT_NEAR(pin.x, 2.0 + 23.0, 1e-12);
  LineField u = LineField::Constant(31, 0.65);
  EXPECT_DOUBLE_EQ(pin_value(u, g, PhysParams{}, pin), 0.0);
  PhysParams p;
  p.mu = 2.0;
  EXPECT_DOUBLE_EQ(pin_value(u, g, p, pin), 0.65);
}

TEST(PinFunctional, PositiveForSlowAndNegativeForFastSpeeds) {
  const double root_lip = std::sqrt(curve().lip());
  EXPECT_GT(pin_functional(0.01 * root_lip, curve(), small_grid(), PhysParams{}, Regime::Limit), 0.0);
  EXPECT_LT(pin_functional(10 * root_lip, curve(), small_grid(), PhysParams{}, Regime::Limit), 0.0);
  EXPECT_THROW(pin_functional(0.0, curve(), small_grid(), PhysParams{}, Regime::Limit),
               ParameterError);
}

TEST(PinFunctional, DecreasingInC) {
  double prev = kInfinity;
  for (double c : {0.05, 0.1, 0.15, 0.2, 0.3, 0.5}) {
    const double g = pin_functional(c, curve(), small_grid(), PhysParams{}, Regime::Limit);
    EXPECT_LT(g, prev) << c;
    prev = g;
  }
}

TEST(SignCertificate, BoundsEncloseTheConvergedValue) {
  const auto g = small_grid();
  for (double c : {0.08, 0.2}) {
    const auto cert = certify_pin_sign(c, curve(), g, PhysParams{}, Regime::Limit, {}, std::nullopt,
                                       std::nullopt);
    const double exact = pin_functional(c, curve(), g, PhysParams{}, Regime::Limit);
    EXPECT_LE(cert.g_low, exact + 1e-9);
    EXPECT_GE(cert.g_high, exact - 1e-9);
    EXPECT_EQ(cert.sign, exact > 0 ? 1 : -1);
    EXPECT_LE((cert.sub.first - cert.super.first).maxCoeff(), 1e-10);
  }
}

TEST(SignCertificate, InvalidSeedsFallBackToCornerStates) {
  const auto g = small_grid();
  const FieldPair wrong{LineField::Constant(g.nx(), 0.5), StripField::Constant(g.nx(), g.ny(), 0.5)};
  const auto a = certify_pin_sign(0.2, curve(), g, PhysParams{}, Regime::Limit, {}, wrong, wrong);
  const auto b = certify_pin_sign(0.2, curve(), g, PhysParams{}, Regime::Limit, {}, std::nullopt,
                                  std::nullopt);
  EXPECT_EQ(a.sign, b.sign);
}

TEST(FindSpeed, LimitRegimeSpeedBelowBound) {
  SpeedOptions o;
  o.tol_c = 1e-4;
  const auto res = find_speed(curve(), small_grid(), PhysParams{}, Regime::Limit, o);
  EXPECT_GT(res.c, 0.0);
  EXPECT_LE(res.c, std::sqrt(curve().lip()) * 1.02);
  EXPECT_LE(res.bracket.c_hi - res.bracket.c_lo, o.tol_c);
  EXPECT_NEAR(res.bracket.target, 0.65, 1e-15);
  EXPECT_FALSE(res.bracket.history.empty());
  // Steepness of G limits how well the midpoint pins; stay well inside the bracket's reach.
  EXPECT_LT(std::abs(res.front.diagnostics.at("pin_residual")), 0.05);
}

TEST(FindSpeed, IndependentOfInitialBracket) {
  SpeedOptions a, b;
  a.tol_c = b.tol_c = 1e-4;
  b.c_lo = 0.01;
  b.c_hi = 0.2;
  const double ca = find_speed(curve(), small_grid(), PhysParams{}, Regime::Limit, a).c;
  const double cb = find_speed(curve(), small_grid(), PhysParams{}, Regime::Limit, b).c;
  EXPECT_NEAR(ca, cb, 10 * a.tol_c);
}

TEST(FindSpeed, ExpandsAnUpperGuessThatIsTooLow) {
  SpeedOptions o;
  o.tol_c = 1e-3;
  o.c_lo = 0.01;
  o.c_hi = 0.02;
  const auto res = find_speed(curve(), small_grid(), PhysParams{}, Regime::Limit, o);
  EXPECT_GT(res.c, 0.02);
}

TEST(FindSpeed, FiniteDUsesTheSamePin) {
  PhysParams p;
  p.D = 16.0;
  SpeedOptions o;
  o.tol_c = 1e-3;
  const auto res = find_speed(curve(), small_grid(), p, Regime::FiniteD, o);
  EXPECT_GT(res.c, 0.0);
  EXPECT_LE(res.c, p.speed_bound(curve().lip()) * 1.02);
}

TEST(FindSpeed, RejectsNonpositiveTolerance) {
  SpeedOptions o;
  o.tol_c = 0.0;
  EXPECT_THROW(find_speed(curve(), small_grid(), PhysParams{}, Regime::Limit, o), ParameterError);
}

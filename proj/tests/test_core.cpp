#include "roadfront/core.hpp"

#include <gtest/gtest.h>

using namespace roadfront;

namespace {

// Maximum of |f'| for theta = 0.3 from a 1e6-sample scan of [-0.5, 1.5] (numpy).
constexpr double kLipOracle = 0.48999999999999994;
// Largest positive slope, reached at s = (1 + 2 theta) / 3.
constexpr double kPeakSlope = 0.16333333333333333;

}  // namespace

TEST(Reaction, VanishesBelowThresholdAndAtOne) {
  const auto f = make_reaction(0.3);
  EXPECT_EQ(f(0.0), 0.0);
  EXPECT_EQ(f(0.3), 0.0);
  EXPECT_EQ(f(-2.0), 0.0);
  EXPECT_EQ(f(1.0), 0.0);
  EXPECT_GT(f(0.5), 0.0);
  EXPECT_NEAR(f(0.5), 0.2 * 0.2 * 0.5, 1e-15);
}

TEST(Reaction, TangentContinuationPastOne) {
  const auto f = make_reaction(0.3);
  EXPECT_NEAR(f.derivative(1.5), -0.49, 1e-15);
  EXPECT_NEAR(f(1.5), -0.49 * 0.5, 1e-15);
  EXPECT_NEAR(f.derivative(1.0), -0.49, 1e-15);
}

TEST(Reaction, DerivativeMatchesDifferenceQuotient) {
  const auto f = make_reaction(0.4);
  for (double s : {0.45, 0.6, 0.8, 0.95}) {
    const double h = 1e-6;
    EXPECT_NEAR(f.derivative(s), (f(s + h) - f(s - h)) / (2 * h), 1e-8) << s;
  }
}

TEST(Reaction, LipschitzConstantAgreesWithSampledOracle) {
  const auto f = make_reaction(0.3);
  EXPECT_NEAR(f.lip(), kLipOracle, 1e-12);
  EXPECT_NEAR(lip_f(f), kLipOracle, 1e-12);
}

TEST(Reaction, RestrictedLipschitz) {
  const auto f = make_reaction(0.3);
  EXPECT_EQ(f.lip_restricted(0.2), 0.0);
  EXPECT_EQ(f.lip_restricted(0.3), 0.0);
  EXPECT_NEAR(f.lip_restricted(0.8), kPeakSlope, 1e-10);
  EXPECT_NEAR(lip_on(f, 0.0, 1.0), kLipOracle, 1e-12);
}

TEST(Reaction, ApplyActsNodewise) {
  const auto f = make_reaction(0.3);
  StripField v(2, 3);
  v << 0.1, 0.5, 0.9, 1.0, 0.3, 0.7;
  const StripField fv = f.apply(v);
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 3; ++i) EXPECT_EQ(fv(j, i), f(v(j, i)));
  }
}

TEST(Reaction, RejectsThresholdOutsideUnitInterval) {
  EXPECT_THROW(make_reaction(0.0), ParameterError);
  EXPECT_THROW(make_reaction(1.0), ParameterError);
  EXPECT_THROW(make_reaction(-0.1), ParameterError);
}

TEST(PhysParams, DefaultsAreTheLimitSystem) {
  PhysParams p;
  EXPECT_TRUE(p.limit());
  EXPECT_NO_THROW(p.validate());
  EXPECT_NEAR(p.speed_bound(0.49), 0.7, 1e-15);
}

TEST(PhysParams, ValidationNamesTheConstraint) {
  PhysParams p;
  p.D = 0.5;
  try {
    p.validate();
    FAIL() << "expected ParameterError";
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("D > d"), std::string::npos);
  }
  p.D = 1.0;
  EXPECT_THROW(p.validate(), ParameterError);
  p = PhysParams{};
  p.mu = 0.0;
  EXPECT_THROW(p.validate(), ParameterError);
  p = PhysParams{};
  p.L = -1.0;
  EXPECT_THROW(p.validate(), ParameterError);
}

TEST(PhysParams, FiniteSpeedBound) {
  PhysParams p;
  p.D = 4.0;
  EXPECT_NEAR(p.speed_bound(0.49), std::sqrt(4.0 / 3.0 * 0.49), 1e-15);
  p.D = 1.01;
  EXPECT_NEAR(p.speed_bound(0.49), std::sqrt(101.0 * 0.49), 1e-12);
}

TEST(Regime, StringRoundTrip) {
  EXPECT_EQ(regime_from_string(to_string(Regime::Limit)), Regime::Limit);
  EXPECT_EQ(regime_from_string(to_string(Regime::FiniteD)), Regime::FiniteD);
  EXPECT_THROW(regime_from_string("sideways"), ParameterError);
}

TEST(Rescaling, RoundTrip) {
  const auto r = rescale_frame(2.0, 8.0, 16.0);
  EXPECT_DOUBLE_EQ(r.c, 0.5);
  EXPECT_DOUBLE_EQ(r.x, 2.0);
  const auto back = unscale_frame(r.c, r.x, 16.0);
  EXPECT_DOUBLE_EQ(back.c, 2.0);
  EXPECT_DOUBLE_EQ(back.x, 8.0);
  EXPECT_THROW(rescale_frame(1.0, 1.0, 0.0), ParameterError);
  EXPECT_THROW(rescale_frame(1.0, 1.0, kInfinity), ParameterError);
}

TEST(StripGrid, Geometry) {
  const StripGrid g(-1.0, 3.0, 5, 3, 2.0);
  EXPECT_DOUBLE_EQ(g.hx(), 1.0);
  EXPECT_DOUBLE_EQ(g.hy(), 1.0);
  EXPECT_DOUBLE_EQ(g.x(4), 3.0);
  EXPECT_DOUBLE_EQ(g.y(0), -2.0);
  EXPECT_DOUBLE_EQ(g.y(g.top()), 0.0);
  EXPECT_DOUBLE_EQ(g.length(), 4.0);
  EXPECT_EQ(g.xs().size(), 5);
  EXPECT_DOUBLE_EQ(g.ys()[2], 0.0);
}

TEST(StripGrid, InterpolationIsLinearAndClamped) {
  const StripGrid g(0.0, 4.0, 5, 3, 1.0);
  LineField u(5);
  u << 0, 1, 4, 9, 16;
  EXPECT_DOUBLE_EQ(g.interpolate(u, 1.5), 2.5);
  EXPECT_DOUBLE_EQ(g.interpolate(u, 4.0), 16.0);
  EXPECT_DOUBLE_EQ(g.interpolate(u, 9.0), 16.0);
  EXPECT_DOUBLE_EQ(g.interpolate(u, -1.0), 0.0);
}

TEST(StripGrid, RejectsDegenerateShapes) {
  EXPECT_THROW(StripGrid(0, 1, 2, 5, 1), ParameterError);
  EXPECT_THROW(StripGrid(0, 1, 5, 2, 1), ParameterError);
  EXPECT_THROW(StripGrid(1, 1, 5, 5, 1), ParameterError);
  EXPECT_THROW(StripGrid(0, 1, 5, 5, 0), ParameterError);
}

#include "roadfront/dispersion.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace roadfront;

namespace {

// Roots at c = 1, d = mu = L = 1 from a 40-digit mpmath bisection.
constexpr double kLambdaLimitOracle = 1.3600955394092126;
constexpr double kLambdaD4Oracle = 1.3112943043582739;

PhysParams with_D(double D) {
  PhysParams p;
  p.D = D;
  return p;
}

}  // namespace

TEST(Beta, ClosedForms) {
  EXPECT_DOUBLE_EQ(beta_of_lambda(1.0, 1.0, PhysParams{}), 1.0);
  EXPECT_DOUBLE_EQ(beta_of_lambda(2.0, 1.0, with_D(4.0)), 1.0);
  EXPECT_LT(beta_of_lambda(1e-14, 1.0, PhysParams{}), 1e-6);
  EXPECT_LT(beta_of_lambda(1e-14, 1.0, with_D(4.0)), 1e-6);
}

TEST(Beta, OutsideAdmissibleIntervalIsADomainError) {
  EXPECT_THROW(beta_of_lambda(0.0, 1.0, PhysParams{}), DomainError);
  EXPECT_THROW(beta_of_lambda(-1.0, 1.0, with_D(4.0)), DomainError);
  EXPECT_THROW(beta_of_lambda(4.0, 1.0, with_D(4.0)), DomainError);
}

TEST(DispersionResidual, SignsAtBracketEnds) {
  for (double c : {0.05, 0.3, 1.0, 3.0}) {
    for (double D : {1.5, 4.0, 100.0, kInfinity}) {
      const auto p = with_D(D);
      const auto [lo, hi] = lambda_bracket(c, p);
      EXPECT_GT(dispersion_residual(lo, c, p), 0.0) << c << " " << D;
      EXPECT_LT(dispersion_residual(hi, c, p), 0.0) << c << " " << D;
    }
  }
}

TEST(DispersionResidual, AtLambdaEqualCOnlyExchangeRemains) {
  const PhysParams p;
  const double b = beta_of_lambda(0.7, 0.7, p);
  const double t = b * std::tanh(b);
  EXPECT_NEAR(dispersion_residual(0.7, 0.7, p), t / (1 + t), 1e-15);
}

TEST(DispersionResidual, SingleSignChangeOnFineScan) {
  for (double c : {0.1, 0.5, 2.0}) {
    for (double D : {2.0, 10.0, kInfinity}) {
      const auto p = with_D(D);
      const auto [lo, hi] = lambda_bracket(c, p);
      int changes = 0;
      double prev = dispersion_residual(lo, c, p);
      for (int i = 1; i <= 20000; ++i) {
        const double f = dispersion_residual(lo + (hi - lo) * i / 20000.0, c, p);
        if ((f > 0) != (prev > 0)) ++changes;
        prev = f;
      }
      EXPECT_EQ(changes, 1) << c << " " << D;
    }
  }
}

TEST(SolveLambda, MatchesHighPrecisionOracle) {
  const auto root = solve_lambda(1.0, PhysParams{});
  EXPECT_NEAR(root.lambda, kLambdaLimitOracle, 1e-14);
  EXPECT_NEAR(solve_lambda(1.0, with_D(4.0)).lambda, kLambdaD4Oracle, 1e-14);
  EXPECT_GT(root.lambda, 1.0);
  EXPECT_LT(root.lambda, 0.5 * (1.0 + std::sqrt(5.0)));
}

TEST(SolveLambda, IncreasingInCAndInD) {
  double prev_c = 0.0;
  for (double c : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    const double l = solve_lambda(c, with_D(8.0)).lambda;
    EXPECT_GT(l, prev_c);
    EXPECT_GT(l, c);
    prev_c = l;
  }
  double prev_D = 0.0;
  for (double D : {1.5, 3.0, 10.0, 100.0, 1e4}) {
    const double l = solve_lambda(0.3, with_D(D)).lambda;
    EXPECT_GT(l, prev_D);
    prev_D = l;
  }
  EXPECT_LT(prev_D, solve_lambda(0.3, PhysParams{}).lambda);
}

TEST(SolveLambda, ThinStripPushesRootTowardC) {
  PhysParams p;
  p.L = 1e-8;
  EXPECT_NEAR(solve_lambda(0.5, p).lambda, 0.5, 1e-7);
}

TEST(SolveLambda, ProfileSamples) {
  const auto root = solve_lambda(0.6, with_D(5.0), 1e-12, 11);
  ASSERT_EQ(root.h_samples.size(), 11);
  EXPECT_DOUBLE_EQ(root.h_samples[0], 1.0);
  EXPECT_DOUBLE_EQ(root.h_samples.minCoeff(), 1.0);
  EXPECT_DOUBLE_EQ(root.h_samples.maxCoeff(), root.h_samples[10]);
  EXPECT_NEAR(root.h_samples[5], h_profile(root, -0.5), 1e-15);
}

TEST(SolveLambda, RejectsBadInput) {
  EXPECT_THROW(solve_lambda(0.0, PhysParams{}), DomainError);
  EXPECT_THROW(solve_lambda(1.0, PhysParams{}, 0.0), ParameterError);
  EXPECT_THROW(solve_lambda(1.0, with_D(0.5)), ParameterError);
}

TEST(HProfile, NormalizationAndNeumannEnd) {
  auto root = solve_lambda(1.0, PhysParams{});
  EXPECT_DOUBLE_EQ(h_profile(root, -1.0), 1.0);
  const double h = 1e-6;
  EXPECT_NEAR((h_profile(root, -1.0 + h) - h_profile(root, -1.0)) / h, 0.0, 1e-5);
  EXPECT_THROW(h_profile(root, 0.1), DomainError);
  EXPECT_THROW(h_profile(root, -1.1), DomainError);
  root.beta = 0.0;
  EXPECT_DOUBLE_EQ(h_profile(root, -0.3), 1.0);
}

TEST(TailEnvelope, EndpointsAndOrdering) {
  const auto root = solve_lambda(0.5, PhysParams{});
  const double hmax = std::cosh(root.beta);
  const auto [lo, hi] = tail_envelope(root, 0.0, -1.0, 0.2, 0.3);
  EXPECT_DOUBLE_EQ(lo, 0.2 / hmax);
  EXPECT_DOUBLE_EQ(hi, 0.3);
  const auto far = tail_envelope(root, -200.0, -0.5, 0.2, 0.3);
  EXPECT_LT(far.second, 1e-20);
  for (double y : {-1.0, -0.5, 0.0}) {
    const auto [a, b] = tail_envelope(root, -1.0, y, 0.3, 0.3);
    EXPECT_LE(a, b);
  }
}

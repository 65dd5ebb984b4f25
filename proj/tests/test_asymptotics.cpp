#include "roadfront/asymptotics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace roadfront;

namespace {

SweepRecord record(double D, double c) {
  SweepRecord r;
  r.D = D;
  r.c_rescaled = c;
  r.c_physical = c * std::sqrt(D);
  r.ok = true;
  return r;
}

}  // namespace

TEST(Extrapolation, RecoversExactInverseDModel) {
  std::vector<SweepRecord> rs;
  for (double D : {10.0, 100.0, 1000.0}) rs.push_back(record(D, 0.5 + 1.0 / D));
  const auto e = extrapolate_cinf(rs);
  EXPECT_NEAR(e.c_inf, 0.5, 1e-12);
  EXPECT_NEAR(e.slope, 1.0, 1e-10);
  EXPECT_FALSE(e.warning);
}

TEST(Extrapolation, UsesOnlyTheLastThreeSuccessfulRecords) {
  std::vector<SweepRecord> rs{record(2.0, 9.0)};
  for (double D : {10.0, 100.0, 1000.0}) rs.push_back(record(D, 0.5 + 1.0 / D));
  SweepRecord failed = record(5000.0, 42.0);
  failed.ok = false;
  rs.push_back(failed);
  EXPECT_NEAR(extrapolate_cinf(rs).c_inf, 0.5, 1e-12);
}

TEST(Extrapolation, ConstantSpeedsAndNonMonotoneWarning) {
  const auto flat = extrapolate_cinf({record(4, 0.3), record(16, 0.3), record(64, 0.3)});
  EXPECT_NEAR(flat.c_inf, 0.3, 1e-14);
  EXPECT_NEAR(flat.slope, 0.0, 1e-12);
  EXPECT_FALSE(flat.warning);
  EXPECT_TRUE(extrapolate_cinf({record(4, 0.3), record(16, 0.2), record(64, 0.25)}).warning);
}

TEST(Extrapolation, RejectsShortOrUnorderedInput) {
  EXPECT_THROW(extrapolate_cinf({record(4, 0.3), record(16, 0.2)}), ParameterError);
  EXPECT_THROW(extrapolate_cinf({record(16, 0.3), record(4, 0.2), record(64, 0.1)}),
               ParameterError);
}

TEST(Sweep, FailingEntryDoesNotStopTheOthers) {
  const auto f = make_reaction(0.3);
  const StripGrid g(0, 12, 61, 9, 1.0);
  SpeedOptions o;
  o.tol_c = 1e-3;
  const auto rs = sweep_D({0.5, 16.0}, f, g, PhysParams{}, o, 2);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_FALSE(rs[0].ok);
  EXPECT_NE(rs[0].error.find("D > d"), std::string::npos) << rs[0].error;
  ASSERT_TRUE(rs[1].ok) << rs[1].error;
  EXPECT_NEAR(rs[1].c_physical, rs[1].c_rescaled * 4.0, 1e-14);
  EXPECT_GT(rs[1].lambda, rs[1].c_rescaled);
  EXPECT_LT(rs[1].identity_residual, 0.05);
}

TEST(Sweep, SpeedsApproachTheLimitSpeed) {
  const auto f = make_reaction(0.3);
  const StripGrid g(0, 12, 61, 9, 1.0);
  SpeedOptions o;
  o.tol_c = 1e-4;
  const auto rs = sweep_D({4.0, 64.0}, f, g, PhysParams{}, o);
  const double c_limit = limit_speed(f, g, PhysParams{}, o).c;
  ASSERT_TRUE(rs[0].ok && rs[1].ok);
  EXPECT_LT(std::abs(rs[1].c_rescaled - c_limit), std::abs(rs[0].c_rescaled - c_limit));
}

TEST(SweepCsv, HeaderAndRows) {
  std::ostringstream out;
  SweepRecord bad;
  bad.D = 3.0;
  bad.error = "boom";
  write_sweep_csv(out, {record(4.0, 0.25), bad});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kSweepCsvHeader);
  std::getline(in, line);
  EXPECT_EQ(line.rfind("4,0.25,0.5,", 0), 0u) << line;
  EXPECT_NE(line.find(",ok"), std::string::npos);
  std::getline(in, line);
  EXPECT_EQ(line.rfind("3,", 0), 0u);
  EXPECT_EQ(line.find(",ok"), std::string::npos);
}

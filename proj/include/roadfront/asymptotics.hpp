#pragma once

#include "roadfront/speed.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace roadfront {

/// One finite-D front, speeds in the rescaled frame.
struct SweepRecord {
  double D = 0.0;
  double c_rescaled = 0.0;
  double c_physical = 0.0;  // c_rescaled * sqrt(D)
  double lambda = 0.0;      // dispersion root at (c_rescaled, D)
  int iterations = 0;
  double identity_residual = 0.0;
  double tail_fit_error = 0.0;
  bool ok = false;
  std::string error;
};

/// find_speed on the rescaled finite-D system for each D (params.D is ignored).
/// A failing record keeps ok = false and its message; the others are unaffected.
/// Up to `workers` records run at once.
std::vector<SweepRecord> sweep_D(const std::vector<double>& D_list, const ReactionCurve& curve,
                                 const StripGrid& grid, const PhysParams& params,
                                 const SpeedOptions& options = {}, int workers = 1);

struct Extrapolation {
  double c_inf = 0.0;
  double slope = 0.0;  // a in c(D) = c_inf + a/D
  /// Set when the last three speeds do not move monotonically.
  bool warning = false;
};

/// Least-squares fit of c(D) = c_inf + a/D on the last three successful records.
Extrapolation extrapolate_cinf(const std::vector<SweepRecord>& records);

/// find_speed for the limit system (D = infinity).
SpeedResult limit_speed(const ReactionCurve& curve, const StripGrid& grid, PhysParams params,
                        const SpeedOptions& options = {});

extern const char* const kSweepCsvHeader;

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

}  // namespace roadfront

#include "roadfront/asymptotics.hpp"

#include "roadfront/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>

namespace roadfront {

namespace {

SweepRecord run_record(double D, const ReactionCurve& curve, const StripGrid& grid,
                       PhysParams params, const SpeedOptions& options) {
  SweepRecord rec;
  rec.D = D;
  try {
    params.D = D;
    params.validate();
    if (params.limit()) throw ParameterError("sweep_D needs finite D values");
    const auto res = find_speed(curve, grid, params, Regime::FiniteD, options);
    rec.c_rescaled = res.c;
    rec.c_physical = res.c * std::sqrt(D);
    rec.lambda = solve_lambda(res.c, params).lambda;
    rec.iterations = static_cast<int>(res.front.diagnostics.at("iterations"));
    rec.identity_residual = velocity_identity_residual(res.front, curve);
    const auto [xa, xb] = default_tail_window(res.front, curve.theta());
    const auto tail = tail_fit(res.front, xa, xb);
    rec.tail_fit_error =
        tail.available ? tail.relative_error : std::numeric_limits<double>::quiet_NaN();
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

const char* const kSweepCsvHeader =
    "D,c_rescaled,c_physical,lambda,iterations,identity_residual,tail_fit_error,status";

std::vector<SweepRecord> sweep_D(const std::vector<double>& D_list, const ReactionCurve& curve,
                                 const StripGrid& grid, const PhysParams& params,
                                 const SpeedOptions& options, int workers) {
  std::vector<SweepRecord> out(D_list.size());
  const size_t batch = static_cast<size_t>(std::max(1, workers));
  for (size_t start = 0; start < D_list.size(); start += batch) {
    const size_t stop = std::min(D_list.size(), start + batch);
    std::vector<std::future<SweepRecord>> jobs;
    for (size_t i = start; i < stop; ++i) {
      jobs.push_back(std::async(batch > 1 ? std::launch::async : std::launch::deferred,
                                run_record, D_list[i], std::cref(curve), std::cref(grid), params,
                                std::cref(options)));
    }
    for (size_t i = start; i < stop; ++i) out[i] = jobs[i - start].get();
  }
  return out;
}

Extrapolation extrapolate_cinf(const std::vector<SweepRecord>& records) {
  std::vector<const SweepRecord*> good;
  for (const auto& r : records) {
    if (r.ok) good.push_back(&r);
  }
  if (good.size() < 3) throw ParameterError("extrapolate_cinf needs at least 3 successful records");
  const auto n = good.size();
  const SweepRecord* last[3] = {good[n - 3], good[n - 2], good[n - 1]};
  if (!(last[0]->D < last[1]->D && last[1]->D < last[2]->D)) {
    throw ParameterError("extrapolate_cinf needs increasing D");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto* r : last) {
    const double x = 1.0 / r->D;
    sx += x;
    sy += r->c_rescaled;
    sxx += x * x;
    sxy += x * r->c_rescaled;
  }
  Extrapolation e;
  e.slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
  e.c_inf = (sy - e.slope * sx) / 3.0;
  const double d1 = last[1]->c_rescaled - last[0]->c_rescaled;
  const double d2 = last[2]->c_rescaled - last[1]->c_rescaled;
  const double noise = 1e-9 * std::max(1.0, std::abs(e.c_inf));
  e.warning = (d1 > noise && d2 < -noise) || (d1 < -noise && d2 > noise);
  return e;
}

SpeedResult limit_speed(const ReactionCurve& curve, const StripGrid& grid, PhysParams params,
                        const SpeedOptions& options) {
  params.D = kInfinity;
  return find_speed(curve, grid, params, Regime::Limit, options);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << kSweepCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.D << ',' << r.c_rescaled << ',' << r.c_physical << ',' << r.lambda << ','
        << r.iterations << ',' << r.identity_residual << ',' << r.tail_fit_error << ','
        << (r.ok ? "ok" : "error") << '\n';
  }
  out.precision(precision);
}

}  // namespace roadfront

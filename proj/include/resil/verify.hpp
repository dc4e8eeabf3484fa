#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resil/model.hpp"

namespace resil::verify {

/// Consistency audit settings. Defaults are the documented tolerances.
struct Options {
  std::size_t realizations = 10000;
  std::uint64_t seed = 1;
  numerics::Tolerance quadrature{};
  std::size_t grid_points = 10000;
  std::size_t curve_points = 50;
  double z_limit = 4.0;
  /// Replaces every acceptance threshold when set. Only meant for exercising
  /// the failure path.
  std::optional<double> threshold_override;
};

struct Check {
  std::string name;
  bool passed = false;
  double observed = 0.0;  // discrepancy measured by the check
  double limit = 0.0;     // largest discrepancy accepted
  std::string detail;
};

/// Grid minimum of the mean performance curve on [lo, hi] with `points`
/// evenly spaced samples (endpoints included).
struct GridMinimum {
  double time;
  double value;
  double step;
};
GridMinimum grid_minimum(const EventModel& m, double lo, double hi, std::size_t points);

/// End of the nadir search grid: the 1 - 1e-12 quantile of the restore time,
/// or o_b if later.
double nadir_grid_horizon(const EventModel& m);

/// Runs the cross-checks: closed-form vs quadrature area, nadir vs grid
/// minimization, lognormal stationarity, duration definitions, and Monte
/// Carlo agreement for the area, the mean curve and the realized nadirs.
std::vector<Check> run(const EventModel& m, const Options& options = {});

bool all_passed(const std::vector<Check>& checks);

}  // namespace resil::verify

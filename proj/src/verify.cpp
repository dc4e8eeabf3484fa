#include "resil/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "resil/montecarlo.hpp"

namespace resil::verify {

GridMinimum grid_minimum(const EventModel& m, double lo, double hi, std::size_t points) {
  const double step = points > 1 ? (hi - lo) / static_cast<double>(points - 1) : 0.0;
  GridMinimum best{lo, mean_performance(m, lo), step};
  for (std::size_t i = 1; i < points; ++i) {
    const double t = i + 1 == points ? hi : lo + step * static_cast<double>(i);
    const double v = mean_performance(m, t);
    if (v < best.value) {
      best.time = t;
      best.value = v;
    }
  }
  return best;
}

double nadir_grid_horizon(const EventModel& m) {
  return std::max(m.outage_end(), restore_quantile(m.restore(), 1.0 - 1e-12));
}

namespace {

class Audit {
public:
  explicit Audit(const Options& options) : options_(options) {}

  void add(std::string name, double observed, double limit, std::string detail = {}) {
    if (options_.threshold_override) {
      limit = *options_.threshold_override;
    }
    const bool passed = std::isfinite(observed) ? observed <= limit : false;
    checks_.push_back(Check{std::move(name), passed, observed, limit, std::move(detail)});
  }

  void fail(std::string name, std::string detail) {
    checks_.push_back(Check{std::move(name), false, std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN(), std::move(detail)});
  }

  std::vector<Check> take() { return std::move(checks_); }

private:
  const Options& options_;
  std::vector<Check> checks_;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void check_area(const EventModel& m, const Options& options, Audit& audit) {
  const double closed = area_closed_form(m);
  try {
    const double numeric = area_numeric(m, options.quadrature);
    audit.add("area closed form vs quadrature", std::abs(closed - numeric),
              std::max(1e-6, 1e-6 * std::abs(closed)),
              "closed " + fmt(closed) + ", quadrature " + fmt(numeric));
  } catch (const ConvergenceError& e) {
    audit.fail("area closed form vs quadrature", e.what());
  }
}

void check_location(const NadirResult& n, const GridMinimum& g, Audit& audit) {
  double distance = 0.0;
  if (const auto* p = std::get_if<NadirPoint>(&n.location)) {
    distance = std::abs(g.time - p->time);
  } else {
    const auto& i = std::get<NadirInterval>(n.location);
    distance = std::max({0.0, i.start - g.time, g.time - i.end});
  }
  audit.add("nadir time vs grid argmin", distance, g.step * (1.0 + 1e-9),
            "grid argmin " + fmt(g.time) + ", analytic " + fmt(n.time()));
}

void check_nadir(const EventModel& m, const Options& options, Audit& audit) {
  const NadirResult n = nadir(m);
  const double slack = 1e-6 * m.total();

  const auto coarse = grid_minimum(m, 0.0, nadir_grid_horizon(m), options.grid_points);
  audit.add("nadir bound on truncation grid", -n.value - coarse.value, slack,
            "grid min " + fmt(coarse.value) + " at " + fmt(coarse.time));

  // The minimum lies before both the last outage and the first restore are
  // well past; a grid on this span resolves its location, which the long
  // truncation grid can step over.
  const double span = 1.25 * std::max(m.outage_end(), m.restore_start());
  const auto fine = grid_minimum(m, 0.0, span, options.grid_points);
  audit.add("nadir bound on event grid", -n.value - fine.value, slack,
            "grid min " + fmt(fine.value) + " at " + fmt(fine.time));
  check_location(n, fine, audit);

  audit.add("nadir equals -P at reported time", std::abs(n.value + mean_performance(m, n.time())),
            1e-9 * m.total());
}

void check_shape(const EventModel& m, Audit& audit) {
  if (std::holds_alternative<LognormalRestore>(m.restore())) {
    if (const auto t = lognormal_stationary_time(m)) {
      audit.add("stationary point o_b * f_r(t*) = 1",
                std::abs(m.outage_end() * restore_density(m.restore(), *t) - 1.0), 1e-8,
                "t* = " + fmt(*t));
    }
  }

  const auto durations = restore_durations(m);
  const double start = m.restore_start();
  const auto fraction_at = [&](double d) { return mean_cum_restores(m, start + d) / m.total(); };
  if (const auto it = durations.find("D_95_ln"); it != durations.end()) {
    audit.add("95% restoration at r_a + D_95", std::abs(fraction_at(it->second) - 0.95), 1e-9);
    audit.add("median restoration at r_a + D_GM", std::abs(fraction_at(durations.at("D_GM")) - 0.5), 1e-12);
  }
  if (const auto it = durations.find("D_95_exp"); it != durations.end()) {
    audit.add("95% restoration at r_a + D_95", std::abs(fraction_at(it->second) - 0.95), 1e-9);
  }
  if (const auto it = durations.find("D_n"); it != durations.end()) {
    audit.add("full restoration at r_a + D_n", std::abs(fraction_at(it->second) - 1.0), 1e-12);
  }
}

void check_monte_carlo(const EventModel& m, const Options& options, Audit& audit) {
  if (options.realizations < 2) {
    audit.fail("monte carlo", "standard errors need at least 2 realizations");
    return;
  }
  montecarlo::SimulationConfig cfg;
  cfg.realizations = options.realizations;
  cfg.seed = options.seed;
  const double horizon = std::max(m.outage_end(), restore_quantile(m.restore(), 0.99));
  const std::size_t points = std::max<std::size_t>(2, options.curve_points);
  for (std::size_t i = 0; i < points; ++i) {
    cfg.grid.push_back(horizon * static_cast<double>(i) / static_cast<double>(points - 1));
  }

  // Realizations hold round(n_c) unit-quantity outages; rescale the analytic
  // values when n_c is fractional.
  const double count = static_cast<double>(montecarlo::resolve_count(m, cfg));
  const double scale = count / m.total();
  const double z = options.z_limit;

  const auto area = montecarlo::estimate_mean_area(m, cfg);
  const double expected_area = scale * area_closed_form(m);
  audit.add("monte carlo mean area", std::abs(area.mean - expected_area), z * *area.std_error,
            "estimate " + fmt(area.mean) + " +- " + fmt(*area.std_error) + ", closed form " +
                fmt(expected_area));

  const auto curve = montecarlo::estimate_mean_curve(m, cfg);
  double worst = 0.0;
  double worst_time = 0.0;
  for (std::size_t g = 0; g < curve.grid.size(); ++g) {
    const double diff = std::abs(curve.mean[g] - scale * mean_performance(m, curve.grid[g]));
    const double score = diff <= 1e-9 * m.total() ? 0.0
                         : curve.std_error[g] > 0.0 ? diff / curve.std_error[g]
                                                    : std::numeric_limits<double>::infinity();
    if (score > worst) {
      worst = score;
      worst_time = curve.grid[g];
    }
  }
  audit.add("monte carlo mean curve (max |z|)", worst, z, "worst at t = " + fmt(worst_time));

  // Deepest realized drops average at least as deep as the mean curve.
  const auto& realized = curve.mean_realized_nadir;
  const double expected_nadir = scale * nadir(m).value;
  audit.add("mean realized nadir >= nadir of mean curve", expected_nadir - realized.mean,
            z * *realized.std_error,
            "mean realized " + fmt(realized.mean) + ", mean-curve nadir " + fmt(expected_nadir));
}

}  // namespace

std::vector<Check> run(const EventModel& m, const Options& options) {
  Audit audit(options);
  check_area(m, options, audit);
  check_nadir(m, options, audit);
  check_shape(m, audit);
  check_monte_carlo(m, options, audit);
  return audit.take();
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

}  // namespace resil::verify

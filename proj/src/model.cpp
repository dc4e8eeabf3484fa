#include "resil/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace resil {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Probability mass left beyond the numeric truncation points.
constexpr double tail_mass = 1e-12;

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) {
    throw ValidationError(field, std::string(field) + ": " + message);
  }
}

void require_time(double t, const char* op) {
  if (!(t >= 0.0)) {
    throw DomainError(std::string(op) + ": time must be nonnegative");
  }
}

double lognormal_z(const LognormalRestore& r, double t) {
  return (std::log(t - r.restore_start) - r.mu) / r.sigma;
}

}  // namespace

std::string restore_kind(const RestoreModel& restore) {
  return std::visit(Overloaded{[](const ConstantRestore&) { return std::string("constant"); },
                               [](const LognormalRestore&) { return std::string("lognormal"); },
                               [](const ExponentialRestore&) { return std::string("exponential"); }},
                    restore);
}

double restore_start(const RestoreModel& restore) {
  return std::visit([](const auto& r) { return r.restore_start; }, restore);
}

void validate(const OutageModel& outage) {
  require(std::isfinite(outage.outage_end) && outage.outage_end > 0.0, "o_b",
          "outage end must be positive and finite");
}

void validate(const RestoreModel& restore) {
  const double start = restore_start(restore);
  require(std::isfinite(start) && start >= 0.0, "r_a",
          "restore start must be nonnegative and finite");
  std::visit(Overloaded{[&](const ConstantRestore& r) {
                          require(std::isfinite(r.restore_end) && r.restore_end > start, "r_b",
                                  "restore end must be finite and exceed r_a");
                        },
                        [](const LognormalRestore& r) {
                          require(std::isfinite(r.mu), "mu", "must be finite");
                          require(std::isfinite(r.sigma) && r.sigma > 0.0, "sigma",
                                  "must be positive and finite");
                        },
                        [](const ExponentialRestore& r) {
                          require(std::isfinite(r.tau) && r.tau > 0.0, "tau",
                                  "must be positive and finite");
                        }},
             restore);
}

double restore_density(const RestoreModel& restore, double t) {
  return std::visit(
      Overloaded{[t](const ConstantRestore& r) {
                   if (t < r.restore_start || t > r.restore_end) {
                     return 0.0;
                   }
                   return 1.0 / (r.restore_end - r.restore_start);
                 },
                 [t](const LognormalRestore& r) {
                   if (t <= r.restore_start) {
                     return 0.0;
                   }
                   const double z = lognormal_z(r, t);
                   return numerics::std_normal_pdf(z) / ((t - r.restore_start) * r.sigma);
                 },
                 [t](const ExponentialRestore& r) {
                   if (t < r.restore_start) {
                     return 0.0;
                   }
                   return std::exp(-(t - r.restore_start) / r.tau) / r.tau;
                 }},
      restore);
}

double restore_cdf(const RestoreModel& restore, double t) {
  return std::visit(
      Overloaded{[t](const ConstantRestore& r) {
                   if (t <= r.restore_start) {
                     return 0.0;
                   }
                   if (t >= r.restore_end) {
                     return 1.0;
                   }
                   return (t - r.restore_start) / (r.restore_end - r.restore_start);
                 },
                 [t](const LognormalRestore& r) {
                   if (t <= r.restore_start) {
                     return 0.0;
                   }
                   return numerics::std_normal_cdf(lognormal_z(r, t));
                 },
                 [t](const ExponentialRestore& r) {
                   if (t <= r.restore_start) {
                     return 0.0;
                   }
                   return -std::expm1(-(t - r.restore_start) / r.tau);
                 }},
      restore);
}

double restore_survival(const RestoreModel& restore, double t) {
  return std::visit(
      Overloaded{[&](const ConstantRestore&) { return 1.0 - restore_cdf(restore, t); },
                 [t](const LognormalRestore& r) {
                   if (t <= r.restore_start) {
                     return 1.0;
                   }
                   return numerics::std_normal_sf(lognormal_z(r, t));
                 },
                 [t](const ExponentialRestore& r) {
                   if (t <= r.restore_start) {
                     return 1.0;
                   }
                   return std::exp(-(t - r.restore_start) / r.tau);
                 }},
      restore);
}

double restore_quantile(const RestoreModel& restore, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("restore_quantile: probability must lie in (0, 1)");
  }
  return std::visit(
      Overloaded{[p](const ConstantRestore& r) {
                   return r.restore_start + p * (r.restore_end - r.restore_start);
                 },
                 [p](const LognormalRestore& r) {
                   return r.restore_start +
                          std::exp(r.mu + r.sigma * numerics::std_normal_quantile(p));
                 },
                 [p](const ExponentialRestore& r) {
                   return r.restore_start - r.tau * std::log1p(-p);
                 }},
      restore);
}

double mean_restore_time(const RestoreModel& restore) {
  return std::visit(
      Overloaded{[](const ConstantRestore& r) { return 0.5 * (r.restore_start + r.restore_end); },
                 [](const LognormalRestore& r) {
                   return r.restore_start + std::exp(r.mu + 0.5 * r.sigma * r.sigma);
                 },
                 [](const ExponentialRestore& r) { return r.restore_start + r.tau; }},
      restore);
}

EventModel::EventModel(double total, OutageModel outage, RestoreModel restore)
    : total_(total), outage_(outage), restore_(restore) {
  require(std::isfinite(total) && total > 0.0, "n_c", "event total must be positive and finite");
  validate(outage_);
  validate(restore_);
  require(std::isfinite(resil::mean_restore_time(restore_)), "restore",
          "mean restore time overflows");
}

double EventModel::restore_start() const noexcept { return resil::restore_start(restore_); }

double outage_rate(const EventModel& m) { return m.total() / m.outage_end(); }

double mean_outage_time(const EventModel& m) { return 0.5 * m.outage_end(); }

double mean_restore_time(const EventModel& m) { return mean_restore_time(m.restore()); }

double mean_cum_outages(const EventModel& m, double t) {
  require_time(t, "mean_cum_outages");
  if (t >= m.outage_end()) {
    return m.total();
  }
  return m.total() * t / m.outage_end();
}

double mean_cum_restores(const EventModel& m, double t) {
  require_time(t, "mean_cum_restores");
  return m.total() * restore_cdf(m.restore(), t);
}

double mean_performance(const EventModel& m, double t) {
  return mean_cum_restores(m, t) - mean_cum_outages(m, t);
}

double area_closed_form(const EventModel& m) {
  return m.total() * (mean_restore_time(m) - mean_outage_time(m));
}

double area_truncation(const EventModel& m) {
  // The neglected area n_c * E[(X - T)+] is bounded by n_c * E[X; X > T], so
  // truncate at the tail quantile of the size-biased restore delay rather than
  // of the delay itself.
  const double limit = std::visit(
      Overloaded{[](const ConstantRestore& r) { return r.restore_end; },
                 [](const LognormalRestore& r) {
                   const double z = -numerics::std_normal_quantile(tail_mass);
                   return r.restore_start + std::exp(r.mu + r.sigma * r.sigma + r.sigma * z);
                 },
                 [](const ExponentialRestore& r) {
                   return r.restore_start - r.tau * std::log(tail_mass);
                 }},
      m.restore());
  return std::max(limit, m.outage_end());
}

namespace {

// Subinterval boundaries at the kinks of the integrand and across the scales
// of the restore delay distribution.
std::vector<double> area_partition(const EventModel& m, double upper) {
  std::vector<double> points{0.0, upper, m.outage_end(), m.restore_start()};
  std::visit(Overloaded{[&](const ConstantRestore& r) { points.push_back(r.restore_end); },
                        [&](const LognormalRestore& r) {
                          for (int k = -10; k <= 12; ++k) {
                            points.push_back(r.restore_start + std::exp(r.mu + k * r.sigma));
                          }
                        },
                        [&](const ExponentialRestore& r) {
                          for (double k : {0.25, 1.0, 3.0, 8.0, 16.0}) {
                            points.push_back(r.restore_start + k * r.tau);
                          }
                        }},
             m.restore());
  std::erase_if(points, [upper](double t) { return !(t >= 0.0 && t <= upper); });
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

}  // namespace

double area_numeric(const EventModel& m, const numerics::Tolerance& tol) {
  const double upper = area_truncation(m);
  const auto points = area_partition(m, upper);
  const auto unrestored = [&m](double t) {
    return mean_cum_outages(m, t) - mean_cum_restores(m, t);
  };
  return numerics::integrate_partitioned(unrestored, points, tol);
}

double NadirResult::time() const {
  return std::visit(Overloaded{[](const NadirPoint& p) { return p.time; },
                               [](const NadirInterval& i) { return i.start; }},
                    location);
}

namespace {

NadirCandidate candidate(const EventModel& m, double t) { return {t, mean_performance(m, t)}; }

NadirResult constant_nadir(const EventModel& m, const ConstantRestore& r) {
  const double start = r.restore_start;
  const double end = m.outage_end();
  const double window = r.restore_end - r.restore_start;

  NadirResult result;
  result.candidates = {candidate(m, start), candidate(m, end)};
  if (r.restore_end < end) {
    result.candidates.push_back(candidate(m, r.restore_end));
  }

  // restore rate vs outage rate reduces to comparing the two windows.
  if (std::abs(window - end) <= 1e-12 * end) {
    result.value = m.total() * start / end;
    result.location = NadirInterval{start, end};
  } else if (window < end) {
    result.value = m.total() * start / end;
    result.location = NadirPoint{start};
  } else {
    result.value = m.total() * (r.restore_end - end) / window;
    result.location = NadirPoint{end};
  }
  return result;
}

NadirResult lognormal_nadir(const EventModel& m) {
  const double end = m.outage_end();
  NadirResult result;
  result.candidates.push_back(candidate(m, end));

  NadirCandidate best = result.candidates.front();
  if (const auto stationary = lognormal_stationary_time(m); stationary && *stationary <= end) {
    const NadirCandidate c = candidate(m, *stationary);
    result.candidates.push_back(c);
    if (c.performance < best.performance) {
      best = c;
    }
  }
  result.value = -best.performance;
  result.location = NadirPoint{best.time};
  return result;
}

NadirResult exponential_nadir(const EventModel& m, const ExponentialRestore& r) {
  const double start = r.restore_start;
  const double end = m.outage_end();
  NadirResult result;
  result.candidates = {candidate(m, start), candidate(m, end)};

  const double at_start = start / end;
  const double at_end = std::exp(-(end - start) / r.tau);
  if (at_start > at_end) {
    result.value = m.total() * at_start;
    result.location = NadirPoint{start};
  } else {
    result.value = m.total() * at_end;
    result.location = NadirPoint{end};
  }
  return result;
}

}  // namespace

NadirResult nadir(const EventModel& m) {
  const double start = m.restore_start();
  const double end = m.outage_end();

  // Outages finish before restores begin: the curve bottoms out at -total.
  if (start >= end) {
    NadirResult result;
    result.value = m.total();
    result.candidates = {candidate(m, end)};
    if (start == end) {
      result.location = NadirPoint{end};
    } else {
      result.location = NadirInterval{end, start};
      result.candidates.push_back(candidate(m, start));
    }
    return result;
  }

  return std::visit(Overloaded{[&](const ConstantRestore& r) { return constant_nadir(m, r); },
                               [&](const LognormalRestore&) { return lognormal_nadir(m); },
                               [&](const ExponentialRestore& r) { return exponential_nadir(m, r); }},
                    m.restore());
}

namespace {

const LognormalRestore& as_lognormal(const EventModel& m, const char* op) {
  const auto* r = std::get_if<LognormalRestore>(&m.restore());
  if (r == nullptr) {
    throw VariantError(std::string(op) + ": requires a lognormal restore model");
  }
  return *r;
}

}  // namespace

std::optional<double> lognormal_stationary_time(const EventModel& m) {
  const auto& r = as_lognormal(m, "lognormal_stationary_time");
  const double s2 = r.sigma * r.sigma;
  // ln(t - r_a) solves u^2 + 2(s2 - mu) u + mu^2 + 2 s2 ln(sigma sqrt(2 pi) / o_b) = 0;
  // the smaller root lies where the restore CDF is convex.
  const double scale = r.sigma * std::sqrt(2.0 * std::numbers::pi) / m.outage_end();
  const double discriminant = s2 - 2.0 * r.mu - 2.0 * std::log(scale);
  if (discriminant < 0.0) {
    return std::nullopt;
  }
  return r.restore_start + std::exp(r.mu - s2 - r.sigma * std::sqrt(discriminant));
}

double lognormal_inflection_time(const EventModel& m) {
  const auto& r = as_lognormal(m, "lognormal_inflection_time");
  return r.restore_start + std::exp(r.mu - r.sigma * r.sigma);
}

std::map<std::string, double> restore_durations(const EventModel& m) {
  std::map<std::string, double> out;
  double restore_duration = 0.0;
  std::visit(Overloaded{[&](const ConstantRestore& r) {
                          restore_duration = r.restore_end - r.restore_start;
                          out["D_n"] = restore_duration;
                        },
                        [&](const LognormalRestore& r) {
                          restore_duration =
                              std::exp(r.mu + r.sigma * numerics::std_normal_quantile(0.95));
                          out["D_95_ln"] = restore_duration;
                          out["D_GM"] = std::exp(r.mu);
                        },
                        [&](const ExponentialRestore& r) {
                          restore_duration = r.tau * std::log(20.0);
                          out["D_95_exp"] = restore_duration;
                        }},
             m.restore());
  out["event_duration"] = m.restore_start() + restore_duration;
  return out;
}

MetricsReport metrics(const EventModel& m, const numerics::Tolerance& tol) {
  MetricsReport report;
  report.area = area_closed_form(m);
  report.area_numeric = area_numeric(m, tol);
  report.area_discrepancy = std::abs(report.area - report.area_numeric);
  report.nadir = nadir(m);
  report.mean_outage_time = mean_outage_time(m);
  report.mean_restore_time = mean_restore_time(m);
  report.durations = restore_durations(m);
  return report;
}

}  // namespace resil

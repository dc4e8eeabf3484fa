#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "resil/numerics.hpp"

namespace resil {

/// Constant-rate outage process active on [0, outage_end].
struct OutageModel {
  double outage_end = 0.0;  // hours

  bool operator==(const OutageModel&) const = default;
};

/// Constant restore rate on [restore_start, restore_end].
struct ConstantRestore {
  double restore_start = 0.0;
  double restore_end = 0.0;

  bool operator==(const ConstantRestore&) const = default;
};

/// Restore rate proportional to a lognormal density shifted to start at
/// restore_start. mu and sigma are the parameters of ln(t - restore_start).
struct LognormalRestore {
  double restore_start = 0.0;
  double mu = 0.0;
  double sigma = 1.0;

  bool operator==(const LognormalRestore&) const = default;
};

/// Exponential recovery with time constant tau (also the mean restore delay).
struct ExponentialRestore {
  double restore_start = 0.0;
  double tau = 1.0;

  bool operator==(const ExponentialRestore&) const = default;
};

using RestoreModel = std::variant<ConstantRestore, LognormalRestore, ExponentialRestore>;

/// "constant", "lognormal" or "exponential".
std::string restore_kind(const RestoreModel& restore);

double restore_start(const RestoreModel& restore);

/// Throws ValidationError naming the first offending field.
void validate(const OutageModel& outage);
void validate(const RestoreModel& restore);

/// Restore-time distribution f_r on absolute time (zero before restore_start).
double restore_density(const RestoreModel& restore, double t);
double restore_cdf(const RestoreModel& restore, double t);
/// Upper tail 1 - restore_cdf, accurate in the far tail.
double restore_survival(const RestoreModel& restore, double t);
/// Absolute time at which the restore CDF reaches p, for p in (0, 1).
double restore_quantile(const RestoreModel& restore, double p);
/// Mean restore time on the absolute time axis.
double mean_restore_time(const RestoreModel& restore);

/// Mean outage/restore behaviour of a resilience event. Immutable once built.
class EventModel {
public:
  /// Throws ValidationError if any parameter is out of range.
  EventModel(double total, OutageModel outage, RestoreModel restore);

  /// Event total of the tracked quantity (outages, customers, MVA, ...).
  double total() const noexcept { return total_; }
  const OutageModel& outage() const noexcept { return outage_; }
  const RestoreModel& restore() const noexcept { return restore_; }

  double outage_end() const noexcept { return outage_.outage_end; }
  double restore_start() const noexcept;

  /// Copy with a different event total.
  EventModel with_total(double total) const { return EventModel(total, outage_, restore_); }

  bool operator==(const EventModel&) const = default;

private:
  double total_;
  OutageModel outage_;
  RestoreModel restore_;
};

/// Mean outage rate total / outage_end.
double outage_rate(const EventModel& m);
double mean_outage_time(const EventModel& m);
double mean_restore_time(const EventModel& m);

/// Mean cumulative outages at time t >= 0.
double mean_cum_outages(const EventModel& m, double t);
/// Mean cumulative restores at time t >= 0.
double mean_cum_restores(const EventModel& m, double t);
/// Mean performance curve: mean restores minus mean outages.
double mean_performance(const EventModel& m, double t);

/// Closed-form mean area total * (mean restore time - mean outage time).
double area_closed_form(const EventModel& m);

/// Upper limit used when integrating the mean curve numerically. Beyond it the
/// neglected area is below 1e-12 * total * (mean restore delay).
double area_truncation(const EventModel& m);

/// Quadrature of mean outages minus mean restores over [0, area_truncation].
double area_numeric(const EventModel& m, const numerics::Tolerance& tol = {});

struct NadirPoint {
  double time;
};

/// The mean curve is flat at its minimum over [start, end].
struct NadirInterval {
  double start;
  double end;
};

using NadirLocation = std::variant<NadirPoint, NadirInterval>;

struct NadirCandidate {
  double time;
  double performance;
};

struct NadirResult {
  double value = 0.0;
  NadirLocation location = NadirPoint{0.0};
  /// Times examined by the case analysis with the mean performance there.
  std::vector<NadirCandidate> candidates;

  /// Reported time, or the interval start for flat minima.
  double time() const;
};

NadirResult nadir(const EventModel& m);

/// Stationary point of the mean curve in the convex part of a lognormal
/// restore CDF, or nullopt when none exists. Throws VariantError for other
/// restore variants.
std::optional<double> lognormal_stationary_time(const EventModel& m);

/// Mode of the lognormal restore density (the inflection of the restore
/// curve). Throws VariantError for other restore variants.
double lognormal_inflection_time(const EventModel& m);

/// Named restore durations in hours. Keys: "D_n" (constant), "D_95_ln" and
/// "D_GM" (lognormal), "D_95_exp" (exponential), and "event_duration" for all.
std::map<std::string, double> restore_durations(const EventModel& m);

struct MetricsReport {
  double area = 0.0;
  double area_numeric = 0.0;
  double area_discrepancy = 0.0;
  NadirResult nadir;
  double mean_outage_time = 0.0;
  double mean_restore_time = 0.0;
  std::map<std::string, double> durations;
};

MetricsReport metrics(const EventModel& m, const numerics::Tolerance& tol = {});

}  // namespace resil

#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace resil::empirical {

/// One outaged component: when it went out, when it came back, and how much
/// of the tracked quantity (customers, MVA, or 1 for counts) it carried.
struct OutageRecord {
  std::string component_id;
  double outage_time = 0.0;
  double restore_time = 0.0;
  double quantity = 1.0;

  double repair_time() const { return restore_time - outage_time; }
};

/// Recorded outages and restores of one event.
///
/// Records are kept in outage order (stable in input order for equal outage
/// times). The restore order is a stable sort on (restore time, outage
/// order); `restore_order()[k]` is the outage index of the k-th restore.
class EmpiricalEvent {
public:
  /// Throws ValidationError for an empty list, a restore before its outage,
  /// a nonpositive quantity, or non-finite values.
  explicit EmpiricalEvent(std::vector<OutageRecord> records);

  std::size_t size() const noexcept { return records_.size(); }
  const std::vector<OutageRecord>& records() const noexcept { return records_; }

  const std::vector<double>& outage_times() const noexcept { return outage_times_; }
  const std::vector<double>& restore_times() const noexcept { return restore_times_; }
  const std::vector<std::size_t>& restore_order() const noexcept { return restore_order_; }
  /// Inverse of restore_order: the restore rank of each outage.
  std::vector<std::size_t> restore_rank() const;

  double total_quantity() const noexcept { return total_quantity_; }

private:
  std::vector<OutageRecord> records_;
  std::vector<double> outage_times_;
  std::vector<double> restore_times_;
  std::vector<std::size_t> restore_order_;
  double total_quantity_ = 0.0;
};

/// Parse `component_id,outage_time,restore_time[,quantity]` CSV with a header
/// row. Times are decimal hours; a missing or empty quantity means 1.
/// Throws ParseError (with 1-based line) or ValidationError.
EmpiricalEvent load_event(std::istream& in);
EmpiricalEvent load_event_file(const std::string& path);

/// Right-continuous step function. Value is 0 before the first breakpoint and
/// `breakpoints[k].second` on [breakpoints[k].first, breakpoints[k+1].first).
struct StepCurve {
  std::vector<std::pair<double, double>> breakpoints;

  double value_at(double t) const;
  /// Exact integral of the step function over [a, b].
  double integral(double a, double b) const;
};

struct StepCurves {
  StepCurve outages;
  StepCurve restores;
  StepCurve performance;
};

/// Cumulative outages, cumulative restores and their difference. Coincident
/// jumps share a breakpoint that carries the net change.
StepCurves step_curves(const EmpiricalEvent& e);

/// Sum of quantity-weighted sorted restore times minus quantity-weighted
/// outage times.
double area_pairwise(const EmpiricalEvent& e);

/// Sum over components of quantity times repair time.
double area_repair(const EmpiricalEvent& e);

/// Area as if every component carried `mean_quantity`. Throws DomainError if
/// mean_quantity is not positive.
double area_uniform(const EmpiricalEvent& e, double mean_quantity);

struct EmpiricalReport {
  std::size_t count = 0;
  double total_quantity = 0.0;
  double area = 0.0;           // from repair times
  double area_pairwise = 0.0;  // from sorted restore times
  double nadir = 0.0;
  double nadir_time = 0.0;
  double duration = 0.0;
  double mean_repair_time = 0.0;  // quantity-weighted
};

EmpiricalReport empirical_metrics(const EmpiricalEvent& e);

}  // namespace resil::empirical

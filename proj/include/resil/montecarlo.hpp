#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "resil/model.hpp"

namespace resil::montecarlo {

/// Counter-based generator: output k of stream (seed, index) is a SplitMix64
/// finalization of a key derived from both. Streams for different
/// realization indices are independent of evaluation order.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double next_open01();
  /// Standard normal by inversion.
  double next_normal();

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Every component carries the same quantity.
struct ConstantQuantity {
  double value = 1.0;
};

/// Quantities drawn uniformly with replacement from a list.
struct SampledQuantity {
  std::vector<double> values;
};

using QuantityModel = std::variant<ConstantQuantity, SampledQuantity>;

/// Mean of the quantity distribution.
double mean_quantity(const QuantityModel& q);

struct SimulationConfig {
  std::size_t realizations = 10000;
  std::uint64_t seed = 1;
  std::vector<double> grid;
  QuantityModel quantity = ConstantQuantity{};
  /// Outages per realization. Defaults to round(total / mean quantity).
  std::optional<std::size_t> count;
  /// Worker threads; 0 selects hardware concurrency. Results do not depend
  /// on it.
  unsigned workers = 0;

  /// Throws ValidationError for M = 0, a bad grid, or bad quantities.
  void validate() const;
};

/// Number of outages per realization implied by the model and config.
std::size_t resolve_count(const EventModel& m, const SimulationConfig& cfg);

/// One sampled event. Outage i and restore i carry quantity i but their
/// times are drawn independently.
struct RealizedEvent {
  std::vector<double> outage_times;
  std::vector<double> restore_times;
  std::vector<double> quantities;

  /// Sum of quantity-weighted restore times minus outage times.
  double area() const;
  /// Performance R(t) - O(t) at the given sorted times.
  std::vector<double> performance(const std::vector<double>& sorted_times) const;
  /// Minimum of the realized performance curve over all times.
  double min_performance() const;
};

RealizedEvent sample_event(const EventModel& m, std::size_t count, const QuantityModel& quantity,
                           CounterRng& rng);

/// Realization `index` of a simulation keyed by `cfg.seed`.
RealizedEvent sample_realization(const EventModel& m, const SimulationConfig& cfg, std::size_t index);

/// Mean and standard error; stderr is absent for a single realization.
struct Estimate {
  double mean = 0.0;
  std::optional<double> std_error;
};

struct CurveEstimate {
  std::vector<double> grid;
  std::vector<double> mean;
  /// Standard error per grid time; empty when only one realization was run.
  std::vector<double> std_error;
  std::size_t realizations = 0;
  std::size_t count = 0;
  /// Mean over realizations of the deepest realized drop (positive magnitude).
  Estimate mean_realized_nadir;
  /// Fraction of (realization, grid time) pairs with positive realized
  /// performance, which the uncoupled process model allows.
  double positive_fraction = 0.0;
};

CurveEstimate estimate_mean_curve(const EventModel& m, const SimulationConfig& cfg);

Estimate estimate_mean_area(const EventModel& m, const SimulationConfig& cfg);

}  // namespace resil::montecarlo

#include "resil/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace resil::montecarlo {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL + golden_gamma))) {}

std::uint64_t CounterRng::next_u64() { return mix64(key_ + (++counter_) * golden_gamma); }

double CounterRng::next_open01() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_normal() { return numerics::std_normal_quantile(next_open01()); }

double mean_quantity(const QuantityModel& q) {
  if (const auto* c = std::get_if<ConstantQuantity>(&q)) {
    return c->value;
  }
  const auto& values = std::get<SampledQuantity>(q).values;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

void SimulationConfig::validate() const {
  if (realizations < 1) {
    throw ValidationError("realizations", "realizations: must be at least 1");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
      throw ValidationError("grid", "grid: times must be finite and nonnegative");
    }
    if (i > 0 && grid[i] < grid[i - 1]) {
      throw ValidationError("grid", "grid: times must be sorted");
    }
  }
  if (const auto* c = std::get_if<ConstantQuantity>(&quantity)) {
    if (!(c->value > 0.0) || !std::isfinite(c->value)) {
      throw ValidationError("quantity", "quantity: must be positive");
    }
  } else {
    const auto& values = std::get<SampledQuantity>(quantity).values;
    if (values.empty()) {
      throw ValidationError("quantity", "quantity: sample list is empty");
    }
    for (double v : values) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError("quantity", "quantity: samples must be positive");
      }
    }
  }
  if (count && *count < 1) {
    throw ValidationError("count", "count: must be at least 1");
  }
}

std::size_t resolve_count(const EventModel& m, const SimulationConfig& cfg) {
  if (cfg.count) {
    return *cfg.count;
  }
  const double n = std::round(m.total() / mean_quantity(cfg.quantity));
  return static_cast<std::size_t>(std::max(1.0, n));
}

double RealizedEvent::area() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < quantities.size(); ++i) {
    sum += quantities[i] * (restore_times[i] - outage_times[i]);
  }
  return sum;
}

namespace {

using Jump = std::pair<double, double>;  // (time, quantity)

std::vector<Jump> sorted_jumps(const std::vector<double>& times, const std::vector<double>& quantities) {
  std::vector<Jump> jumps(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    jumps[i] = {times[i], quantities[i]};
  }
  std::sort(jumps.begin(), jumps.end());
  return jumps;
}

}  // namespace

std::vector<double> RealizedEvent::performance(const std::vector<double>& sorted_times) const {
  const auto outages = sorted_jumps(outage_times, quantities);
  const auto restores = sorted_jumps(restore_times, quantities);
  std::vector<double> out(sorted_times.size());
  std::size_t i = 0;
  std::size_t k = 0;
  double outaged = 0.0;
  double restored = 0.0;
  for (std::size_t g = 0; g < sorted_times.size(); ++g) {
    const double t = sorted_times[g];
    for (; i < outages.size() && outages[i].first <= t; ++i) {
      outaged += outages[i].second;
    }
    for (; k < restores.size() && restores[k].first <= t; ++k) {
      restored += restores[k].second;
    }
    out[g] = (i == outages.size() && k == restores.size()) ? 0.0 : restored - outaged;
  }
  return out;
}

double RealizedEvent::min_performance() const {
  std::vector<Jump> jumps;
  jumps.reserve(2 * quantities.size());
  for (std::size_t i = 0; i < quantities.size(); ++i) {
    jumps.emplace_back(outage_times[i], -quantities[i]);
    jumps.emplace_back(restore_times[i], quantities[i]);
  }
  std::sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) { return a.first < b.first; });
  double level = 0.0;
  double lowest = 0.0;
  for (std::size_t j = 0; j < jumps.size(); ++j) {
    level += jumps[j].second;
    if (j + 1 == jumps.size() || jumps[j + 1].first != jumps[j].first) {
      lowest = std::min(lowest, level);
    }
  }
  return lowest;
}

namespace {

double sample_restore(const RestoreModel& restore, CounterRng& rng) {
  if (const auto* r = std::get_if<ConstantRestore>(&restore)) {
    return r->restore_start + (r->restore_end - r->restore_start) * rng.next_open01();
  }
  if (const auto* r = std::get_if<LognormalRestore>(&restore)) {
    return r->restore_start + std::exp(r->mu + r->sigma * rng.next_normal());
  }
  const auto& r = std::get<ExponentialRestore>(restore);
  return r.restore_start - r.tau * std::log(rng.next_open01());
}

double sample_quantity(const QuantityModel& q, CounterRng& rng) {
  if (const auto* c = std::get_if<ConstantQuantity>(&q)) {
    return c->value;
  }
  const auto& values = std::get<SampledQuantity>(q).values;
  auto idx = static_cast<std::size_t>(rng.next_open01() * static_cast<double>(values.size()));
  return values[std::min(idx, values.size() - 1)];
}

}  // namespace

RealizedEvent sample_event(const EventModel& m, std::size_t count, const QuantityModel& quantity,
                           CounterRng& rng) {
  RealizedEvent e;
  e.outage_times.resize(count);
  e.restore_times.resize(count);
  e.quantities.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    e.outage_times[i] = m.outage_end() * rng.next_open01();
    e.restore_times[i] = sample_restore(m.restore(), rng);
    e.quantities[i] = sample_quantity(quantity, rng);
  }
  return e;
}

RealizedEvent sample_realization(const EventModel& m, const SimulationConfig& cfg, std::size_t index) {
  CounterRng rng(cfg.seed, index);
  return sample_event(m, resolve_count(m, cfg), cfg.quantity, rng);
}

namespace {

// Running mean and sum of squared deviations (Welford), merged with Chan's
// pairwise update.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.n == 0.0) {
      return;
    }
    if (n == 0.0) {
      *this = other;
      return;
    }
    const double total = n + other.n;
    const double delta = other.mean - mean;
    mean += delta * other.n / total;
    m2 += other.m2 + delta * delta * n * other.n / total;
    n = total;
  }

  Estimate estimate() const {
    Estimate e{mean, std::nullopt};
    if (n > 1.0) {
      e.std_error = std::sqrt(m2 / (n - 1.0) / n);
    }
    return e;
  }
};

// Realizations are grouped into fixed-size blocks; blocks are folded in index
// order so results do not depend on the number of workers.
constexpr std::size_t block_size = 256;

template <class Block, class Fill>
std::vector<Block> run_blocks(std::size_t realizations, unsigned workers, Fill fill) {
  const std::size_t blocks = (realizations + block_size - 1) / block_size;
  std::vector<Block> results(blocks);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) {
      const std::size_t begin = b * block_size;
      const std::size_t end = std::min(realizations, begin + block_size);
      results[b] = fill(begin, end);
    }
  };

  unsigned threads = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
  if (threads <= 1) {
    work();
    return results;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back(work);
  }
  pool.clear();
  return results;
}

}  // namespace

CurveEstimate estimate_mean_curve(const EventModel& m, const SimulationConfig& cfg) {
  cfg.validate();
  const std::size_t grid_size = cfg.grid.size();

  struct Block {
    std::vector<Moments> curve;
    Moments nadir;
    std::size_t positive = 0;
  };

  const auto blocks = run_blocks<Block>(cfg.realizations, cfg.workers, [&](std::size_t begin, std::size_t end) {
    Block block;
    block.curve.resize(grid_size);
    for (std::size_t j = begin; j < end; ++j) {
      const auto event = sample_realization(m, cfg, j);
      const auto p = event.performance(cfg.grid);
      for (std::size_t g = 0; g < grid_size; ++g) {
        block.curve[g].add(p[g]);
        block.positive += p[g] > 0.0 ? 1 : 0;
      }
      block.nadir.add(-event.min_performance());
    }
    return block;
  });

  std::vector<Moments> curve(grid_size);
  Moments nadir_moments;
  std::size_t positive = 0;
  for (const auto& block : blocks) {
    for (std::size_t g = 0; g < grid_size; ++g) {
      curve[g].merge(block.curve[g]);
    }
    nadir_moments.merge(block.nadir);
    positive += block.positive;
  }

  CurveEstimate out;
  out.grid = cfg.grid;
  out.realizations = cfg.realizations;
  out.count = resolve_count(m, cfg);
  out.mean.resize(grid_size);
  if (cfg.realizations > 1) {
    out.std_error.resize(grid_size);
  }
  for (std::size_t g = 0; g < grid_size; ++g) {
    const auto e = curve[g].estimate();
    out.mean[g] = e.mean;
    if (e.std_error) {
      out.std_error[g] = *e.std_error;
    }
  }
  out.mean_realized_nadir = nadir_moments.estimate();
  if (grid_size > 0) {
    out.positive_fraction =
        static_cast<double>(positive) / (static_cast<double>(grid_size) * static_cast<double>(cfg.realizations));
  }
  return out;
}

Estimate estimate_mean_area(const EventModel& m, const SimulationConfig& cfg) {
  cfg.validate();
  const auto blocks = run_blocks<Moments>(cfg.realizations, cfg.workers, [&](std::size_t begin, std::size_t end) {
    Moments block;
    for (std::size_t j = begin; j < end; ++j) {
      block.add(sample_realization(m, cfg, j).area());
    }
    return block;
  });
  Moments total;
  for (const auto& block : blocks) {
    total.merge(block);
  }
  return total.estimate();
}

}  // namespace resil::montecarlo

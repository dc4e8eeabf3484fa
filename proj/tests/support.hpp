#pragma once

// Test-only reference routines. These deliberately avoid the library's
// numerics so that they can act as independent oracles.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "resil/model.hpp"

namespace resil::testing {

/// Standard normal CDF from the Taylor series of the error integral, summed
/// in long double. Accurate to ~1e-17 for |x| <= 8.
inline long double series_normal_cdf(long double x) {
  long double term = x;
  long double sum = x;
  for (int k = 1; k < 400; ++k) {
    term *= x * x / (2 * k + 1);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) {
      break;
    }
  }
  const long double density = std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
  return 0.5L + density * sum;
}

/// Upper normal tail through the long double complementary error function.
inline long double reference_normal_sf(long double x) {
  return 0.5L * std::erfc(x / std::sqrt(2.0L));
}

/// Bisection for g(x) = target on [lo, hi] with g increasing.
inline long double bisect(const std::function<long double(long double)>& g, long double target, long double lo,
                          long double hi) {
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (g(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

/// Composite Simpson rule with `n` (even) panels, in long double.
inline long double simpson(const std::function<long double(long double)>& f, long double a, long double b,
                           int n) {
  const long double h = (b - a) / n;
  long double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    sum += f(a + h * i) * (i % 2 == 1 ? 4 : 2);
  }
  return sum * h / 3;
}

/// Independent evaluation of the restore survival function 1 - F_r(t).
inline long double reference_restore_survival(const RestoreModel& restore, long double t) {
  if (const auto* r = std::get_if<ConstantRestore>(&restore)) {
    if (t <= r->restore_start) return 1.0L;
    if (t >= r->restore_end) return 0.0L;
    return (r->restore_end - t) / static_cast<long double>(r->restore_end - r->restore_start);
  }
  if (const auto* r = std::get_if<LognormalRestore>(&restore)) {
    if (t <= r->restore_start) return 1.0L;
    return reference_normal_sf((std::log(t - r->restore_start) - r->mu) / r->sigma);
  }
  const auto& r = std::get<ExponentialRestore>(restore);
  if (t <= r.restore_start) return 1.0L;
  return std::exp(-(t - r.restore_start) / static_cast<long double>(r.tau));
}

/// Independent mean performance curve in long double.
inline long double reference_performance(const EventModel& m, long double t) {
  const long double outaged = t >= m.outage_end() ? m.total() : m.total() * t / m.outage_end();
  const long double restored = m.total() * (1.0L - reference_restore_survival(m.restore(), t));
  return restored - outaged;
}

/// Area between mean outage and restore curves by Simpson quadrature of the
/// restore survival function. The lognormal tail is integrated in log time.
inline long double reference_area(const EventModel& m) {
  const long double total = m.total();
  const long double outage_part = total * m.outage_end() / 2.0L;  // integral of n_c - O(t)
  long double restore_part = total * m.restore_start();         // integral of n_c - R(t) before r_a
  if (const auto* r = std::get_if<ConstantRestore>(&m.restore())) {
    restore_part += total * simpson([&](long double t) { return reference_restore_survival(*r, t); },
                                    r->restore_start, r->restore_end, 2000);
  } else if (const auto* r = std::get_if<LognormalRestore>(&m.restore())) {
    const long double lo = r->mu - 14.0L * r->sigma;
    const long double hi = r->mu + r->sigma * r->sigma + 14.0L * r->sigma;
    restore_part += total * simpson(
                                [&](long double u) {
                                  return reference_normal_sf((u - r->mu) / r->sigma) * std::exp(u);
                                },
                                lo, hi, 200000) +
                   total * std::exp(lo);  // survival is 1 below lo
  } else {
    const auto& e = std::get<ExponentialRestore>(m.restore());
    restore_part += total * simpson([&](long double s) { return std::exp(-s / e.tau); }, 0.0L, 60.0L * e.tau,
                                    200000);
  }
  return restore_part - outage_part;
}

/// Brute-force grid minimum of the reference performance curve on [lo, hi].
struct BruteMinimum {
  double time;
  double value;
};
inline BruteMinimum brute_minimum(const EventModel& m, double lo, double hi, std::size_t points) {
  BruteMinimum best{lo, static_cast<double>(reference_performance(m, lo))};
  for (std::size_t i = 1; i < points; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = static_cast<double>(reference_performance(m, t));
    if (v < best.value) {
      best = {t, v};
    }
  }
  return best;
}

/// The typical transmission event: n = 14, o_b = 2.69 h, lognormal restores
/// from r_a = 0.52 h with mu = 1.64, sigma = 1.56.
inline EventModel typical_event() {
  return EventModel(14.0, OutageModel{2.69}, LognormalRestore{0.52, 1.64, 1.56});
}

enum class Variant { Constant, Lognormal, Exponential };

/// Random valid models spanning both r_a < o_b and r_a >= o_b.
class ModelGenerator {
public:
  explicit ModelGenerator(std::uint64_t seed, bool integer_total = false)
      : rng_(seed), integer_total_(integer_total) {}

  EventModel next(Variant v) {
    const double total = integer_total_ ? std::floor(uniform(1.0, 60.0)) : std::exp(uniform(0.0, std::log(1000.0)));
    const double outage_end = uniform(0.1, 20.0);
    const double restore_start = uniform(0.0, 1.0) < 0.1 ? 0.0 : uniform(0.0, 1.5) * outage_end;
    switch (v) {
      case Variant::Constant:
        return EventModel(total, OutageModel{outage_end},
                          ConstantRestore{restore_start, restore_start + uniform(0.05, 30.0)});
      case Variant::Lognormal:
        return EventModel(total, OutageModel{outage_end},
                          LognormalRestore{restore_start, uniform(-1.0, 3.0), uniform(0.1, 2.5)});
      case Variant::Exponential:
        return EventModel(total, OutageModel{outage_end},
                          ExponentialRestore{restore_start, std::exp(uniform(std::log(0.05), std::log(50.0)))});
    }
    return typical_event();
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

private:
  std::mt19937_64 rng_;
  bool integer_total_;
};

inline constexpr Variant all_variants[] = {Variant::Constant, Variant::Lognormal, Variant::Exponential};

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Constant: return "constant";
    case Variant::Lognormal: return "lognormal";
    case Variant::Exponential: return "exponential";
  }
  return "?";
}

}  // namespace resil::testing

#pragma once

#include <functional>
#include <span>

#include "resil/errors.hpp"

namespace resil::numerics {

/// Accuracy request for the adaptive integrator. The integrator stops once its
/// estimated absolute error is at most max(abs_tol, rel_tol * |result|).
struct Tolerance {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;

  /// Throws DomainError unless every field is positive and finite.
  void validate() const;
};

using Integrand = std::function<double(double)>;

/// Standard normal CDF. Throws DomainError for non-finite x.
double std_normal_cdf(double x);

/// Upper tail 1 - Phi(x), without cancellation for large x.
double std_normal_sf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

/// Inverse of std_normal_cdf on the open interval (0, 1).
double std_normal_quantile(double p);

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b].
///
/// Subintervals are refined in order of largest estimated error until the
/// total error estimate meets `tol`. Throws ConvergenceError (carrying the best
/// estimate and its error bound) when `tol.max_subdivisions` is exhausted.
double integrate(const Integrand& f, double a, double b, const Tolerance& tol = {});

/// Same as integrate(), but seeded with the sorted partition `points`
/// (at least two entries). Use it to put kinks and scale changes of the
/// integrand on subinterval boundaries.
double integrate_partitioned(const Integrand& f, std::span<const double> points,
                             const Tolerance& tol = {});

/// Integral over [a, infinity) truncated at `tail_bound`. The caller
/// guarantees that the integrand's mass beyond `tail_bound` is negligible.
double improper_integrate(const Integrand& f, double a, double tail_bound,
                          const Tolerance& tol = {});

}  // namespace resil::numerics

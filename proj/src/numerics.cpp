#include "resil/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace resil {

namespace {

std::string convergence_message(double estimate, double bound) {
  std::ostringstream os;
  os.precision(17);
  os << "adaptive quadrature did not converge: best estimate " << estimate
     << ", error bound " << bound;
  return os.str();
}

}  // namespace

ConvergenceError::ConvergenceError(double best_estimate, double error_bound)
    : std::runtime_error(convergence_message(best_estimate, error_bound)),
      best_estimate_(best_estimate),
      error_bound_(error_bound) {}

namespace numerics {

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
    throw DomainError("tolerance: abs_tol must be positive and finite");
  }
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) {
    throw DomainError("tolerance: rel_tol must be positive and finite");
  }
  if (max_subdivisions < 1) {
    throw DomainError("tolerance: max_subdivisions must be at least 1");
  }
}

double std_normal_cdf(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("std_normal_cdf: argument must be finite");
  }
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_sf(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("std_normal_sf: argument must be finite");
  }
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double std_normal_pdf(double x) {
  constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343819;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

namespace {

// Acklam's rational approximation for the lower half, p in (0, 0.5].
// Relative error about 1.15e-9; refined by Halley steps below.
double lower_quantile_guess(double p) {
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double lower_quantile(double p) {
  double x = lower_quantile_guess(p);
  for (int step = 0; step < 2; ++step) {
    const double pdf = std_normal_pdf(x);
    if (pdf == 0.0) {
      break;
    }
    const double u = (std_normal_cdf(x) - p) / pdf;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: probability must lie in (0, 1)");
  }
  if (p <= 0.5) {
    return lower_quantile(p);
  }
  // 1 - p is exact for p in [0.5, 1).
  return -lower_quantile(1.0 - p);
}

namespace {

// Kronrod 15-point nodes (non-negative half) with Kronrod and embedded
// Gauss 7-point weights.
constexpr std::array<double, 8> kronrod_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f_center = f(center);
  double kronrod = f_center * kronrod_weights[7];
  double gauss = f_center * gauss_weights[3];

  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kronrod_nodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kronrod_weights[j] * sum;
    // Odd Kronrod indices coincide with the Gauss nodes.
    if (j % 2 == 1) {
      gauss += gauss_weights[j / 2] * sum;
    }
  }
  kronrod *= half;
  gauss *= half;
  return Panel{a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

double integrate_partitioned(const Integrand& f, std::span<const double> points,
                             const Tolerance& tol) {
  tol.validate();
  if (points.size() < 2) {
    throw DomainError("integrate: partition needs at least two points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) {
      throw DomainError("integrate: limits must be finite");
    }
    if (i > 0 && points[i] < points[i - 1]) {
      throw DomainError("integrate: limits must be nondecreasing");
    }
  }

  std::priority_queue<Panel> panels;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] == points[i - 1]) {
      continue;
    }
    Panel p = gauss_kronrod(f, points[i - 1], points[i]);
    total += p.value;
    total_error += p.error;
    panels.push(p);
  }
  if (panels.empty()) {
    return 0.0;
  }

  int subdivisions = static_cast<int>(panels.size());
  while (total_error > std::max(tol.abs_tol, tol.rel_tol * std::abs(total))) {
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (subdivisions >= tol.max_subdivisions || mid <= worst.a || mid >= worst.b) {
      throw ConvergenceError(total, total_error);
    }
    panels.pop();
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    panels.push(left);
    panels.push(right);
    ++subdivisions;

    // Re-sum from the queue now and then so that drift from incremental
    // updates cannot stall convergence.
    if (subdivisions % 64 == 0) {
      auto copy = panels;
      total = 0.0;
      total_error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        copy.pop();
      }
    } else {
      total += left.value + right.value - worst.value;
      total_error += left.error + right.error - worst.error;
    }
  }
  return total;
}

double integrate(const Integrand& f, double a, double b, const Tolerance& tol) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate: limits must be finite");
  }
  if (a > b) {
    throw DomainError("integrate: lower limit exceeds upper limit");
  }
  const std::array<double, 2> points{a, b};
  return integrate_partitioned(f, points, tol);
}

double improper_integrate(const Integrand& f, double a, double tail_bound, const Tolerance& tol) {
  return integrate(f, a, tail_bound, tol);
}

}  // namespace numerics
}  // namespace resil

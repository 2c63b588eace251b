#include "sparsegof/core_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sparsegof {

namespace {

void check_pair(const ProbVector& null_p, const ProbVector& observed, std::int64_t n) {
  if (null_p.size() != observed.size()) {
    throw error("null and observed vectors differ in length");
  }
  if (!null_p.strictly_positive()) {
    throw error("null vector has a zero entry (structural zero); remove the cell upstream");
  }
  if (n < 1) {
    throw error("sample size must be at least 1");
  }
}

// Regularized lower incomplete gamma P(a, x) by series expansion; valid for
// x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 1000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
// fraction; valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

} // namespace

double pearson_q(const ProbVector& null_p, const ProbVector& observed, std::int64_t n) {
  check_pair(null_p, observed, n);
  long double sum = 0.0L;
  for (std::size_t r = 0; r < null_p.size(); ++r) {
    const long double diff = static_cast<long double>(observed[r]) - null_p[r];
    sum += diff * diff / null_p[r];
  }
  return static_cast<double>(n * sum);
}

double kullback_g(const ProbVector& null_p, const ProbVector& observed, std::int64_t n) {
  check_pair(null_p, observed, n);
  long double sum = 0.0L;
  for (std::size_t r = 0; r < null_p.size(); ++r) {
    const double o = observed[r];
    if (o > 0.0) {
      sum += static_cast<long double>(o) * std::log(o / null_p[r]);
    }
  }
  return static_cast<double>(2.0L * n * sum);
}

double power_divergence(double lambda, const ProbVector& null_p,
                        const ProbVector& observed, std::int64_t n) {
  if (lambda == -1.0) {
    throw error("power divergence is not defined for lambda = -1");
  }
  if (lambda == 0.0) {
    return kullback_g(null_p, observed, n);
  }
  check_pair(null_p, observed, n);
  long double sum = 0.0L;
  for (std::size_t r = 0; r < null_p.size(); ++r) {
    const double o = observed[r];
    if (o > 0.0) {
      sum += static_cast<long double>(o) *
             (std::pow(o / null_p[r], lambda) - 1.0);
    }
    // zero cells contribute 0 for lambda > -1
  }
  return static_cast<double>(2.0L * n / (lambda * (lambda + 1.0)) * sum);
}

double ku_corrected_g(const ProbVector& null_p, const ProbVector& observed,
                      std::int64_t n, std::int64_t c) {
  return kullback_g(null_p, observed, n) - static_cast<double>(c);
}

double chi_square_cdf(double x, int df) {
  if (df < 1) {
    throw error("degrees of freedom must be at least 1");
  }
  if (x < 0.0 || !std::isfinite(x)) {
    throw error("chi-square CDF argument must be finite and nonnegative");
  }
  return gamma_p(df / 2.0, x / 2.0);
}

double chi_square_quantile(double prob, int df) {
  if (df < 1) {
    throw error("degrees of freedom must be at least 1");
  }
  if (!(prob > 0.0 && prob < 1.0)) {
    throw error("quantile order must lie strictly between 0 and 1");
  }
  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(df));
  while (chi_square_cdf(hi, df) < prob) {
    hi *= 2.0;
    if (hi > 1e308) throw error("chi-square quantile bracket overflow");
  }
  // Bisection to the 1e-10 CDF tolerance with a Newton polish.
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    const double f = chi_square_cdf(mid, df);
    if (std::fabs(f - prob) <= 1e-14) break;
    (f < prob ? lo : hi) = mid;
    if (hi - lo <= mid * 1e-15) break;
  }
  const double a = df / 2.0;
  const double density = std::exp((a - 1.0) * std::log(mid / 2.0) - mid / 2.0 -
                                  std::lgamma(a)) / 2.0;
  if (density > 0.0 && std::isfinite(density)) {
    const double step = (chi_square_cdf(mid, df) - prob) / density;
    if (std::fabs(step) < mid) mid -= step;
  }
  return mid;
}

} // namespace sparsegof

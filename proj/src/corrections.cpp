#include "sparsegof/corrections.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "sparsegof/core_stats.hpp"

namespace sparsegof {

namespace {

void check_null(const ProbVector& null_p, const CountVector& counts) {
  if (null_p.size() != counts.size()) {
    throw error("null vector and counts differ in length");
  }
  if (!null_p.strictly_positive()) {
    throw error("null vector has a zero entry (structural zero); remove the cell upstream");
  }
}

struct Derived {
  long double nb;   // n^b
  long double n1b;  // n^(1-b)
  long double u;    // ac + n^(1-b) - 1
  long double d;    // u / (R - c)
};

Derived derive(const CountVector& counts, const CorrectionParams& params) {
  const long double ln_n = std::log(static_cast<long double>(counts.n()));
  Derived v;
  v.nb = std::exp(params.b * ln_n);
  v.n1b = std::exp((1.0L - params.b) * ln_n);
  v.u = static_cast<long double>(params.a) * counts.zero_count() +
        std::expm1((1.0L - params.b) * ln_n);
  v.d = v.u / static_cast<long double>(counts.nonzero_indices().size());
  return v;
}

} // namespace

BBounds b_bounds(const CountVector& counts, const SparsityStats& stats) {
  if (stats.uniform_flag) {
    throw error("b_min is undefined for uniform nonzero counts");
  }
  if (counts.zero_count() == 0) {
    throw error("b_min requires at least one zero cell");
  }
  if (counts.n() < 2) {
    throw error("b_min requires n >= 2");
  }
  const double ln_n = std::log(static_cast<double>(counts.n()));
  const double R = static_cast<double>(counts.size());
  const double t1 = std::log(static_cast<double>(stats.n_hihi) / (R - 1.0)) / ln_n;
  const double t2 = std::log(static_cast<double>(stats.n_lolo)) / ln_n;
  const double t3 = std::log(static_cast<double>(stats.n_hi - stats.n_lo)) / ln_n;
  return BBounds{std::max({0.0, t1, t2, t3}), 1.0};
}

ABounds a_bounds(double b, const CountVector& counts, const SparsityStats& stats) {
  if (counts.zero_count() == 0) {
    throw error("a bounds require at least one zero cell");
  }
  if (!(b > 0.0 && b <= 1.0)) {
    throw error("exponent b must lie in (0, 1]");
  }
  const double n = static_cast<double>(counts.n());
  const double c = static_cast<double>(counts.zero_count());
  const double rc = static_cast<double>(counts.nonzero_indices().size());
  const double nb = std::exp(b * std::log(n));
  ABounds out;
  out.a_min = std::max(0.0, ((static_cast<double>(stats.n_hi) - nb) * rc + nb) / (c * nb));
  const double margin = nb - static_cast<double>(stats.n_lolo);
  out.a_max = std::min({1.0, margin / (c * nb), margin / (nb * (n * rc + c))});
  return out;
}

CorrectionParams choose_ab(const CountVector& counts, double h, EpsPolicy eps_policy) {
  CorrectionParams params;
  params.h = h;
  const SparsityStats stats = sparsity_stats(counts);
  if (counts.zero_count() == 0 || stats.uniform_flag) {
    return params; // fallback (0, 1)
  }
  const BBounds bb = b_bounds(counts, stats);
  params.b_min = bb.b_min;
  params.b_max = bb.b_max;
  const double b = h * bb.b_max + (1.0 - h) * bb.b_min;
  const ABounds ab = a_bounds(b, counts, stats);
  params.a_min = ab.a_min;
  params.a_max = ab.a_max;
  if (ab.empty()) {
    return params; // fallback: the admissible interval for a is empty
  }
  params.b = b;
  params.eps = eps_policy.relative_fraction * (ab.a_max - ab.a_min);
  params.a = ab.a_max - params.eps;
  params.fallback = false;
  return params;
}

std::vector<double> corrected_estimator_values(const CountVector& counts,
                                               const CorrectionParams& params) {
  std::vector<double> values(counts.size());
  if (params.fallback) {
    for (std::size_t r = 0; r < counts.size(); ++r) {
      values[r] = static_cast<double>(counts[r]) / static_cast<double>(counts.n());
    }
    return values;
  }
  const Derived v = derive(counts, params);
  for (std::size_t i : counts.zero_indices()) {
    values[i] = params.a;
  }
  for (std::size_t j : counts.nonzero_indices()) {
    values[j] = static_cast<double>(static_cast<long double>(counts[j]) / v.nb - v.d);
  }
  return values;
}

ProbVector corrected_estimator(const CountVector& counts, const CorrectionParams& params) {
  std::vector<double> values = corrected_estimator_values(counts, params);
  if (!params.fallback) {
    for (double p : values) {
      if (!(p > 0.0 && p < 1.0)) {
        throw error("corrected estimator entry outside (0,1); parameters are not admissible");
      }
    }
  }
  return ProbVector(std::move(values));
}

bool cond2_check(const ProbVector& p, const CountVector& counts) {
  if (p.size() != counts.size()) {
    throw error("probability vector and counts differ in length");
  }
  const double n = static_cast<double>(counts.n());
  double zero_max = -1.0;
  for (std::size_t i : counts.zero_indices()) {
    zero_max = std::max(zero_max, p[i]);
  }
  if (zero_max < 0.0) return true; // no zero cells
  for (std::size_t j : counts.nonzero_indices()) {
    if (zero_max > p[j] / n) return false;
  }
  return true;
}

namespace {

long double log_pmf(const std::vector<std::int64_t>& v, const ProbVector& p,
                    long double log_n_factorial) {
  long double s = log_n_factorial;
  for (std::size_t r = 0; r < v.size(); ++r) {
    s -= std::lgamma(static_cast<long double>(v[r]) + 1.0L);
    if (v[r] > 0) {
      if (p[r] == 0.0) return -std::numeric_limits<long double>::infinity();
      s += static_cast<long double>(v[r]) * std::log(static_cast<long double>(p[r]));
    }
  }
  return s;
}

// Distributes `remaining` over the zero cells starting at `zi`, then compares.
bool alternatives_dominated(std::vector<std::int64_t>& alt, const CountVector& counts,
                            const ProbVector& p, std::size_t zi, std::int64_t remaining,
                            long double base, long double log_n_factorial) {
  const auto& zeros = counts.zero_indices();
  if (zi == zeros.size()) {
    if (remaining != 0) return true; // infeasible split, nothing to check
    const long double alt_log = log_pmf(alt, p, log_n_factorial);
    return alt_log <= base + 1e-12L;
  }
  for (std::int64_t give = 0; give <= remaining; ++give) {
    alt[zeros[zi]] = give;
    if (!alternatives_dominated(alt, counts, p, zi + 1, remaining - give, base,
                                log_n_factorial)) {
      return false;
    }
  }
  alt[zeros[zi]] = 0;
  return true;
}

// Chooses reduced occupancies for the nonzero cells starting at `ji`.
bool nonzero_assignments_dominated(std::vector<std::int64_t>& alt, const CountVector& counts,
                                   const ProbVector& p, std::size_t ji, std::int64_t moved,
                                   long double base, long double log_n_factorial) {
  const auto& nonzeros = counts.nonzero_indices();
  if (ji == nonzeros.size()) {
    if (moved == 0) return true; // identical to the observed vector
    return alternatives_dominated(alt, counts, p, 0, moved, base, log_n_factorial);
  }
  const std::size_t j = nonzeros[ji];
  for (std::int64_t keep = counts[j]; keep >= 0; --keep) {
    alt[j] = keep;
    if (!nonzero_assignments_dominated(alt, counts, p, ji + 1,
                                       moved + (counts[j] - keep), base,
                                       log_n_factorial)) {
      return false;
    }
  }
  alt[j] = counts[j];
  return true;
}

} // namespace

bool likelihood_inequality_oracle(const ProbVector& p, const CountVector& counts) {
  if (p.size() != counts.size()) {
    throw error("probability vector and counts differ in length");
  }
  if (counts.n() > 12 || counts.size() > 5) {
    throw error("likelihood oracle instance too large for enumeration (n <= 12, R <= 5)");
  }
  const long double log_n_factorial =
      std::lgamma(static_cast<long double>(counts.n()) + 1.0L);
  const long double base = log_pmf(counts.counts(), p, log_n_factorial);
  std::vector<std::int64_t> alt = counts.counts();
  return nonzero_assignments_dominated(alt, counts, p, 0, 0, base, log_n_factorial);
}

double corrected_q(const ProbVector& null_p, const CountVector& counts,
                   const CorrectionParams& params) {
  check_null(null_p, counts);
  if (params.fallback) {
    return pearson_q(null_p, counts.mle(), counts.n());
  }
  const Derived v = derive(counts, params);
  const long double n = static_cast<long double>(counts.n());
  const long double a = params.a;

  long double q_sum = 0.0L; // Q / n on the MLE
  for (std::size_t r = 0; r < counts.size(); ++r) {
    const long double diff = static_cast<long double>(counts[r]) / n - null_p[r];
    q_sum += diff * diff / null_p[r];
  }
  long double s_ratio = 0.0L; // sum_j n_j / (n p0_j)
  long double s_nz = 0.0L;    // sum_j 1 / p0_j
  for (std::size_t j : counts.nonzero_indices()) {
    s_ratio += static_cast<long double>(counts[j]) / (n * null_p[j]);
    s_nz += 1.0L / null_p[j];
  }
  long double s_zero = 0.0L; // sum_i 1 / p0_i
  for (std::size_t i : counts.zero_indices()) {
    s_zero += 1.0L / null_p[i];
  }
  const long double n21b = v.n1b * v.n1b;
  const long double f = n * (1.0L - n21b + 2.0L * v.n1b * v.d * s_ratio -
                             a * a * s_zero - v.d * v.d * s_nz);
  return static_cast<double>(n21b * (n * q_sum) - f);
}

double corrected_g(const ProbVector& null_p, const CountVector& counts,
                   const CorrectionParams& params) {
  check_null(null_p, counts);
  if (params.fallback) {
    return kullback_g(null_p, counts.mle(), counts.n());
  }
  if (!(params.a > 0.0)) {
    throw error("corrected G requires a > 0");
  }
  const Derived v = derive(counts, params);
  const long double n = static_cast<long double>(counts.n());
  const long double rc = static_cast<long double>(counts.nonzero_indices().size());
  const long double a = params.a;

  long double g_sum = 0.0L; // G / (2n) on the MLE
  long double s_hat = 0.0L; // sum_j ln(T_j / (p0_j n^b (R-c)))
  long double s_obs = 0.0L; // sum_j (n_j/n) ln(T_j / (n_j n^(b-1) (R-c)))
  for (std::size_t j : counts.nonzero_indices()) {
    const long double nj = static_cast<long double>(counts[j]);
    const long double t = nj * rc - v.nb * v.u;
    if (!(t > 0.0L)) {
      throw error("corrected estimator entry nonpositive; parameters are not admissible");
    }
    g_sum += (nj / n) * std::log(nj / (n * null_p[j]));
    s_hat += std::log(t / (null_p[j] * v.nb * rc));
    s_obs += (nj / n) * std::log(t * v.n1b / (nj * rc));
  }
  long double s_zero = 0.0L; // sum_i ln(a / p0_i)
  for (std::size_t i : counts.zero_indices()) {
    s_zero += std::log(a / null_p[i]);
  }
  const long double g = 2.0L * n * (v.d * s_hat - a * s_zero - v.n1b * s_obs);
  return static_cast<double>(v.n1b * (2.0L * n * g_sum) - g);
}

} // namespace sparsegof

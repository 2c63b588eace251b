#pragma once

#include <cstdint>

#include "sparsegof/prob_vector.hpp"

namespace sparsegof {

// Pearson's chi-square statistic Q_null(observed) = n * sum (o_r - p_r)^2 / p_r.
double pearson_q(const ProbVector& null_p, const ProbVector& observed, std::int64_t n);

// Kullback's statistic G_null(observed) = 2n * sum o_r * ln(o_r / p_r), with
// 0 * ln 0 = 0.
double kullback_g(const ProbVector& null_p, const ProbVector& observed, std::int64_t n);

// Power divergence family; lambda = 1 matches pearson_q, lambda = 0 dispatches
// to kullback_g, lambda = -1 is rejected.
double power_divergence(double lambda, const ProbVector& null_p,
                        const ProbVector& observed, std::int64_t n);

// G minus one per zero cell.
double ku_corrected_g(const ProbVector& null_p, const ProbVector& observed,
                      std::int64_t n, std::int64_t c);

// Regularized lower incomplete gamma P(df/2, x/2).
double chi_square_cdf(double x, int df);

// Inverse of chi_square_cdf in x, to 1e-10 on the CDF value.
double chi_square_quantile(double prob, int df);

} // namespace sparsegof

#pragma once

#include <optional>
#include <vector>

#include "sparsegof/count_vector.hpp"
#include "sparsegof/prob_vector.hpp"

namespace sparsegof {

struct BBounds {
  double b_min = 0.0;
  double b_max = 1.0;
};

struct ABounds {
  double a_min = 0.0;
  double a_max = 0.0;
  bool empty() const { return a_min >= a_max; }
};

// Offset below a_max as a fraction of the admissible interval width.
struct EpsPolicy {
  double relative_fraction = 1e-3;
};

struct CorrectionParams {
  double a = 0.0;
  double b = 1.0;
  double h = 0.1;
  double eps = 0.0;
  std::optional<double> b_min;
  std::optional<double> b_max;
  std::optional<double> a_min;
  std::optional<double> a_max;
  bool fallback = true; // correction degenerates to the uncorrected statistics
};

// Lower bound on the exponent b; requires a non-uniform vector with c >= 1 and
// n >= 2.
BBounds b_bounds(const CountVector& counts, const SparsityStats& stats);

// Admissible interval for the zero-cell mass a at a given b. An empty interval
// is a reportable condition, not an exception.
ABounds a_bounds(double b, const CountVector& counts, const SparsityStats& stats);

// The selection rule b = h + (1-h) b_min, a = a_max(b) - eps. Degenerate cases
// (c = 0, uniform nonzero counts, empty a-interval) yield fallback = (0, 1).
CorrectionParams choose_ab(const CountVector& counts, double h = 0.1,
                           EpsPolicy eps_policy = {});

// Raw estimator values: a on zero cells, n_j / n^b - d on nonzero cells with
// d = (ac + n^(1-b) - 1) / (R - c). Sums to 1 by construction; entries may
// leave (0,1) if the params are not admissible.
std::vector<double> corrected_estimator_values(const CountVector& counts,
                                               const CorrectionParams& params);

// Validated estimator; throws if the correction is active and any entry is
// outside (0,1).
ProbVector corrected_estimator(const CountVector& counts, const CorrectionParams& params);

// True iff p_i <= p_j / n for every zero cell i and nonzero cell j.
bool cond2_check(const ProbVector& p, const CountVector& counts);

// Exhaustively checks that the observed vector is at least as likely under p
// as every alternative obtained by moving mass from nonzero cells into zero
// cells. Enumeration limits: n <= 12, R <= 5.
bool likelihood_inequality_oracle(const ProbVector& p, const CountVector& counts);

// Closed forms Q^ab = n^(2(1-b)) Q - f(a,b) and G^ab = n^(1-b) G - g(a,b);
// each must agree with the direct evaluation on corrected_estimator.
double corrected_q(const ProbVector& null_p, const CountVector& counts,
                   const CorrectionParams& params);
double corrected_g(const ProbVector& null_p, const CountVector& counts,
                   const CorrectionParams& params);

} // namespace sparsegof

#include "sparsegof/models.hpp"

#include <cmath>
#include <utility>

#include "sparsegof/common.hpp"
#include "sparsegof/core_stats.hpp"

namespace sparsegof {

FittedNull fit_null(const SimpleNull& model, const CountVector& counts) {
  if (model.p0.size() != counts.size()) {
    throw error("null vector and counts differ in length");
  }
  if (!model.p0.strictly_positive()) {
    throw error("null vector has a zero entry (structural zero); remove the cell upstream");
  }
  if (counts.size() < 2) {
    throw error("test needs at least two categories");
  }
  FittedNull fitted{model.p0, 0, static_cast<int>(counts.size()) - 1};
  return fitted;
}

FittedNull fit_null(Independence2D, const ContingencyTable& table) {
  const std::size_t I = table.rows;
  const std::size_t J = table.cols;
  if (I < 2 || J < 2) {
    throw error("independence model needs at least a 2x2 table");
  }
  const double n = static_cast<double>(table.total());
  if (n < 1.0) {
    throw error("table has no observations");
  }
  std::vector<double> row_p(I), col_p(J);
  for (std::size_t i = 0; i < I; ++i) {
    const std::int64_t s = table.row_sum(i);
    if (s == 0) {
      throw error("empty row '" +
                  (table.row_labels.empty() ? std::to_string(i + 1) : table.row_labels[i]) +
                  "'; remove empty margins first");
    }
    row_p[i] = static_cast<double>(s) / n;
  }
  for (std::size_t j = 0; j < J; ++j) {
    const std::int64_t s = table.col_sum(j);
    if (s == 0) {
      throw error("empty column '" +
                  (table.col_labels.empty() ? std::to_string(j + 1) : table.col_labels[j]) +
                  "'; remove empty margins first");
    }
    col_p[j] = static_cast<double>(s) / n;
  }
  std::vector<double> p(I * J);
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      p[i * J + j] = row_p[i] * col_p[j];
    }
  }
  return FittedNull{ProbVector(std::move(p)), static_cast<int>(I - 1 + J - 1),
                    static_cast<int>((I - 1) * (J - 1))};
}

TestReport run_test(const CountVector& counts, const FittedNull& null,
                    double alpha, const CorrectionConfig& config) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw error("alpha must lie in (0, 1)");
  }
  if (null.p_star0.size() != counts.size()) {
    throw error("null vector and counts differ in length");
  }
  if (null.df < 1) {
    throw error("degrees of freedom must be >= 1");
  }

  TestReport report;
  report.n = counts.n();
  report.R = static_cast<int>(counts.size());
  report.c = static_cast<int>(counts.zero_count());
  report.s = null.s;
  report.df = null.df;
  report.alpha = alpha;
  report.threshold = chi_square_quantile(1.0 - alpha, null.df);

  const ProbVector mle = counts.mle();
  report.q = pearson_q(null.p_star0, mle, counts.n());
  report.g = kullback_g(null.p_star0, mle, counts.n());
  report.rc23 = power_divergence(2.0 / 3.0, null.p_star0, mle, counts.n());
  report.g_ku = ku_corrected_g(null.p_star0, mle, counts.n(), counts.zero_count());

  report.correction = choose_ab(counts, config.h, config.eps_policy);
  report.q_ab = corrected_q(null.p_star0, counts, report.correction);
  report.g_ab = corrected_g(null.p_star0, counts, report.correction);

  if (report.correction.fallback) {
    if (counts.zero_count() == 0) {
      report.warnings.push_back("correction inactive: no zero cells");
    } else if (sparsity_stats(counts).uniform_flag) {
      report.warnings.push_back("correction inactive: nonzero counts are uniform");
    } else {
      report.warnings.push_back("correction inactive: admissible interval for a is empty");
    }
  }

  report.reject_q = report.q > report.threshold;
  report.reject_g = report.g > report.threshold;
  report.reject_rc23 = report.rc23 > report.threshold;
  report.reject_q_ab = report.q_ab > report.threshold;
  report.reject_g_ab = report.g_ab > report.threshold;
  report.reject_g_ku = report.g_ku > report.threshold;
  report.combined_reject = report.reject_q_ab || report.reject_g_ab;
  return report;
}

TestReport run_test(const CountVector& counts, const SimpleNull& model,
                    double alpha, const CorrectionConfig& config) {
  return run_test(counts, fit_null(model, counts), alpha, config);
}

TestReport run_test(const ContingencyTable& table, Independence2D model,
                    double alpha, const CorrectionConfig& config) {
  return run_test(flatten(table), fit_null(model, table), alpha, config);
}

} // namespace sparsegof

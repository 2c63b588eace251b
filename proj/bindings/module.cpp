#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

#include "sparsegof/common.hpp"
#include "sparsegof/core_stats.hpp"
#include "sparsegof/corrections.hpp"
#include "sparsegof/datasets.hpp"
#include "sparsegof/models.hpp"
#include "sparsegof/montecarlo.hpp"
#include "sparsegof/tables.hpp"

namespace py = pybind11;
using namespace sparsegof;

namespace {

CorrectionParams resolve_params(const CountVector& counts, std::optional<double> a,
                                std::optional<double> b, double h, double eps_frac) {
  if (a.has_value() != b.has_value()) {
    throw error("pass both a and b, or neither");
  }
  if (a) {
    CorrectionParams params;
    params.a = *a;
    params.b = *b;
    params.h = h;
    params.fallback = false;
    return params;
  }
  return choose_ab(counts, h, EpsPolicy{eps_frac});
}

py::dict correction_dict(const CorrectionParams& p) {
  py::dict d;
  d["a"] = p.a;
  d["b"] = p.b;
  d["h"] = p.h;
  d["eps"] = p.eps;
  d["b_min"] = p.b_min ? py::object(py::float_(*p.b_min)) : py::object(py::none());
  d["a_min"] = p.a_min ? py::object(py::float_(*p.a_min)) : py::object(py::none());
  d["a_max"] = p.a_max ? py::object(py::float_(*p.a_max)) : py::object(py::none());
  d["fallback"] = p.fallback;
  return d;
}

py::dict report_dict(const TestReport& r) {
  py::dict d;
  d["n"] = r.n;
  d["R"] = r.R;
  d["c"] = r.c;
  d["s"] = r.s;
  d["df"] = r.df;
  d["alpha"] = r.alpha;
  d["threshold"] = r.threshold;
  py::dict stats, reject;
  stats["Q"] = r.q;
  stats["Qab"] = r.q_ab;
  stats["G"] = r.g;
  stats["Gab"] = r.g_ab;
  stats["RC23"] = r.rc23;
  stats["GKu"] = r.g_ku;
  reject["Q"] = r.reject_q;
  reject["Qab"] = r.reject_q_ab;
  reject["G"] = r.reject_g;
  reject["Gab"] = r.reject_g_ab;
  reject["RC23"] = r.reject_rc23;
  reject["GKu"] = r.reject_g_ku;
  d["statistics"] = stats;
  d["reject"] = reject;
  d["combined_reject"] = r.combined_reject;
  d["correction"] = correction_dict(r.correction);
  d["warnings"] = r.warnings;
  return d;
}

py::dict summary_dict(const SimulationSummary& s) {
  py::dict d;
  d["seed"] = s.seed;
  d["replicates"] = s.replicates;
  d["n"] = s.n;
  d["R"] = s.R;
  d["alpha_levels"] = s.alpha_levels;
  d["thresholds"] = s.thresholds;
  d["mode_c"] = s.mode_c;
  d["fallback_count"] = s.fallback_count;
  d["rng"] = s.rng_algorithm;
  auto rates_list = [](const std::vector<std::array<double, kSimStatCount>>& rows) {
    py::list out;
    for (const auto& row : rows) {
      py::list r;
      for (double v : row) r.append(v);
      out.append(r);
    }
    return out;
  };
  d["rejection_rates"] = rates_list(s.rejection_rates);
  d["rejection_rates_at_mode"] = rates_list(s.rejection_rates_at_mode);
  py::dict per_c;
  for (const auto& [c, bucket] : s.per_c) {
    py::dict b;
    b["count"] = bucket.count;
    py::list q95;
    for (double v : bucket.q95) q95.append(v);
    b["q95"] = q95;
    py::list rc;
    for (const auto& row : bucket.reject_counts) {
      py::list r;
      for (int v : row) r.append(v);
      rc.append(r);
    }
    b["reject_counts"] = rc;
    per_c[py::int_(c)] = b;
  }
  d["per_c"] = per_c;
  return d;
}

ContingencyTable table_from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty() || rows[0].empty()) {
    throw error("table must have at least one row and one column");
  }
  ContingencyTable t;
  t.rows = rows.size();
  t.cols = rows[0].size();
  for (const auto& row : rows) {
    if (row.size() != t.cols) throw error("ragged table rows");
    t.cells.insert(t.cells.end(), row.begin(), row.end());
  }
  return t;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Goodness-of-fit and independence tests for sparse multinomial data";
  m.attr("__version__") = kVersion;
  m.attr("STAT_NAMES") = std::vector<std::string>{"Q", "Qab", "G", "Gab", "RC23"};

  py::register_exception<error>(m, "Error", PyExc_ValueError);

  m.def(
      "pearson_q",
      [](const std::vector<double>& null_p, const std::vector<double>& observed,
         std::int64_t n) {
        return pearson_q(ProbVector(null_p), ProbVector(observed), n);
      },
      py::arg("null_p"), py::arg("observed"), py::arg("n"));
  m.def(
      "kullback_g",
      [](const std::vector<double>& null_p, const std::vector<double>& observed,
         std::int64_t n) {
        return kullback_g(ProbVector(null_p), ProbVector(observed), n);
      },
      py::arg("null_p"), py::arg("observed"), py::arg("n"));
  m.def(
      "power_divergence",
      [](double lambda, const std::vector<double>& null_p,
         const std::vector<double>& observed, std::int64_t n) {
        return power_divergence(lambda, ProbVector(null_p), ProbVector(observed), n);
      },
      py::arg("lambda_"), py::arg("null_p"), py::arg("observed"), py::arg("n"));
  m.def("chi_square_cdf", &chi_square_cdf, py::arg("x"), py::arg("df"));
  m.def("chi_square_quantile", &chi_square_quantile, py::arg("prob"), py::arg("df"));

  m.def(
      "choose_ab",
      [](const std::vector<std::int64_t>& counts, double h, double eps_frac) {
        return correction_dict(choose_ab(CountVector(counts), h, EpsPolicy{eps_frac}));
      },
      py::arg("counts"), py::arg("h") = 0.1, py::arg("eps_frac") = 1e-3);
  m.def(
      "corrected_estimator",
      [](const std::vector<std::int64_t>& counts, std::optional<double> a,
         std::optional<double> b, double h, double eps_frac) {
        const CountVector cv(counts);
        return corrected_estimator(cv, resolve_params(cv, a, b, h, eps_frac)).entries();
      },
      py::arg("counts"), py::arg("a") = py::none(), py::arg("b") = py::none(),
      py::arg("h") = 0.1, py::arg("eps_frac") = 1e-3);
  m.def(
      "corrected_q",
      [](const std::vector<double>& null_p, const std::vector<std::int64_t>& counts,
         std::optional<double> a, std::optional<double> b, double h, double eps_frac) {
        const CountVector cv(counts);
        return corrected_q(ProbVector(null_p), cv, resolve_params(cv, a, b, h, eps_frac));
      },
      py::arg("null_p"), py::arg("counts"), py::arg("a") = py::none(),
      py::arg("b") = py::none(), py::arg("h") = 0.1, py::arg("eps_frac") = 1e-3);
  m.def(
      "corrected_g",
      [](const std::vector<double>& null_p, const std::vector<std::int64_t>& counts,
         std::optional<double> a, std::optional<double> b, double h, double eps_frac) {
        const CountVector cv(counts);
        return corrected_g(ProbVector(null_p), cv, resolve_params(cv, a, b, h, eps_frac));
      },
      py::arg("null_p"), py::arg("counts"), py::arg("a") = py::none(),
      py::arg("b") = py::none(), py::arg("h") = 0.1, py::arg("eps_frac") = 1e-3);
  m.def(
      "cond2_check",
      [](const std::vector<double>& p, const std::vector<std::int64_t>& counts) {
        return cond2_check(ProbVector(p), CountVector(counts));
      },
      py::arg("p"), py::arg("counts"));

  m.def(
      "run_test",
      [](const std::vector<std::int64_t>& counts, const std::vector<double>& null_p,
         double alpha, double h, double eps_frac) {
        const CorrectionConfig config{h, EpsPolicy{eps_frac}};
        return report_dict(
            run_test(CountVector(counts), SimpleNull{ProbVector(null_p)}, alpha, config));
      },
      py::arg("counts"), py::arg("null_p"), py::arg("alpha") = 0.05,
      py::arg("h") = 0.1, py::arg("eps_frac") = 1e-3);
  m.def(
      "run_test_independence",
      [](const std::vector<std::vector<std::int64_t>>& rows, double alpha, double h,
         double eps_frac) {
        const CorrectionConfig config{h, EpsPolicy{eps_frac}};
        RemovalLog log;
        const ContingencyTable table = remove_empty_margins(table_from_rows(rows), &log);
        return report_dict(run_test(table, Independence2D{}, alpha, config));
      },
      py::arg("rows"), py::arg("alpha") = 0.05, py::arg("h") = 0.1,
      py::arg("eps_frac") = 1e-3);

  m.def(
      "builtin_table",
      [](const std::string& name) {
        const ContingencyTable t = builtin_table(name);
        py::dict d;
        d["rows"] = t.rows;
        d["cols"] = t.cols;
        d["cells"] = t.cells;
        d["row_labels"] = t.row_labels;
        d["col_labels"] = t.col_labels;
        return d;
      },
      py::arg("name"));
  m.def(
      "builtin_distribution",
      [](const std::string& name) { return builtin_distribution(name).entries(); },
      py::arg("name"));
  m.def(
      "perturb_distribution",
      [](const std::vector<double>& f) {
        return perturb_distribution(ProbVector(f)).entries();
      },
      py::arg("f"));

  m.def(
      "run_simulation",
      [](const std::vector<double>& sampling, const std::vector<double>& null_p,
         std::int64_t n, int replicates, const std::vector<double>& alphas,
         std::uint64_t seed) {
        const SimulationSpec spec{ProbVector(sampling), ProbVector(null_p), n,
                                  replicates, alphas, seed};
        return summary_dict(run_simulation(spec));
      },
      py::arg("sampling"), py::arg("null_p"), py::arg("n"), py::arg("replicates"),
      py::arg("alphas"), py::arg("seed"));
  m.def(
      "zero_count_decay",
      [](const std::vector<double>& p, const std::vector<std::int64_t>& n_grid,
         int replicates, std::uint64_t seed) {
        std::vector<std::pair<std::int64_t, double>> out;
        for (const DecayPoint& pt : zero_count_decay(ProbVector(p), n_grid, replicates, seed)) {
          out.emplace_back(pt.n, pt.p_any_zero);
        }
        return out;
      },
      py::arg("p"), py::arg("n_grid"), py::arg("replicates"), py::arg("seed"));
}

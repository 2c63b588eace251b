#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sparsegof/common.hpp"
#include "sparsegof/core_stats.hpp"
#include "sparsegof/datasets.hpp"
#include "sparsegof/models.hpp"
#include "sparsegof/montecarlo.hpp"
#include "sparsegof/tables.hpp"

using json = nlohmann::ordered_json;
using namespace sparsegof;

namespace {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 14695981039346656037ULL) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw error("cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SPARSEGOF_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw error("SPARSEGOF_SEED is not a valid unsigned integer");
    }
  }
  return 12345;
}

json metadata_json(std::uint64_t seed, double h, double eps_fraction,
                   const std::string& digest, bool with_timestamp) {
  json meta;
  meta["version"] = kVersion;
  meta["seed"] = seed;
  meta["h"] = h;
  meta["eps_fraction"] = eps_fraction;
  if (with_timestamp) meta["timestamp"] = utc_timestamp();
  meta["input_digest"] = digest;
  return meta;
}

std::vector<std::int64_t> parse_count_list(const std::string& text) {
  std::string cleaned = text;
  for (char& ch : cleaned) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(cleaned);
  std::vector<std::int64_t> values;
  std::int64_t v;
  while (in >> v) values.push_back(v);
  if (!in.eof()) {
    throw error("counts input contains a non-integer token");
  }
  if (values.empty()) {
    throw error("counts input is empty");
  }
  return values;
}

// Weight list; normalized to sum 1 so integer weights are accepted.
ProbVector parse_weight_list(const std::string& text) {
  std::string cleaned = text;
  for (char& ch : cleaned) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(cleaned);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (!in.eof()) {
    throw error("weight input contains a non-numeric token");
  }
  if (values.empty()) {
    throw error("weight input is empty");
  }
  long double sum = 0.0L;
  for (double w : values) {
    if (w < 0.0) throw error("weights must be nonnegative");
    sum += w;
  }
  if (!(sum > 0.0L)) throw error("weights sum to zero");
  for (double& w : values) w = static_cast<double>(w / sum);
  return ProbVector(std::move(values));
}

json correction_json(const CorrectionParams& p) {
  json out;
  out["a"] = p.a;
  out["b"] = p.b;
  out["h"] = p.h;
  out["eps"] = p.eps;
  out["b_min"] = p.b_min ? json(*p.b_min) : json(nullptr);
  out["a_min"] = p.a_min ? json(*p.a_min) : json(nullptr);
  out["a_max"] = p.a_max ? json(*p.a_max) : json(nullptr);
  out["fallback"] = p.fallback;
  return out;
}

json report_json(const TestReport& r) {
  json out;
  out["n"] = r.n;
  out["R"] = r.R;
  out["c"] = r.c;
  out["s"] = r.s;
  out["df"] = r.df;
  out["alpha"] = r.alpha;
  out["threshold"] = r.threshold;
  out["statistics"] = {{"Q", r.q},       {"Qab", r.q_ab}, {"G", r.g},
                       {"Gab", r.g_ab},  {"RC23", r.rc23}, {"GKu", r.g_ku}};
  out["reject"] = {{"Q", r.reject_q},       {"Qab", r.reject_q_ab}, {"G", r.reject_g},
                   {"Gab", r.reject_g_ab},  {"RC23", r.reject_rc23}, {"GKu", r.reject_g_ku}};
  out["combined_reject"] = r.combined_reject;
  out["correction"] = correction_json(r.correction);
  out["warnings"] = r.warnings;
  return out;
}

void print_report(const TestReport& r, std::ostream& out) {
  char line[160];
  std::snprintf(line, sizeof line,
                "n=%lld  R=%d  c=%d  s=%d  df=%d  threshold(%.4g)=%.4f",
                static_cast<long long>(r.n), r.R, r.c, r.s, r.df, 1.0 - r.alpha,
                r.threshold);
  out << line << "\n\n";
  out << "statistic    value        decision\n";
  const struct {
    const char* name;
    double value;
    bool reject;
  } rows[] = {{"Q", r.q, r.reject_q},          {"Q^ab", r.q_ab, r.reject_q_ab},
              {"G", r.g, r.reject_g},          {"G^ab", r.g_ab, r.reject_g_ab},
              {"RC^2/3", r.rc23, r.reject_rc23}, {"G_Ku", r.g_ku, r.reject_g_ku}};
  for (const auto& row : rows) {
    std::snprintf(line, sizeof line, "%-12s %-12.4f %s", row.name, row.value,
                  row.reject ? "reject" : "accept");
    out << line << '\n';
  }
  if (r.correction.fallback) {
    out << "\ncorrection: fallback (a=0, b=1)\n";
  } else {
    std::snprintf(line, sizeof line, "\ncorrection: a=%.6g  b=%.6g  (b_min=%.6g, eps=%.6g)",
                  r.correction.a, r.correction.b, *r.correction.b_min, r.correction.eps);
    out << line << '\n';
  }
  for (const auto& w : r.warnings) {
    out << "warning: " << w << '\n';
  }
  out << "combined decision: " << (r.combined_reject ? "reject" : "accept") << '\n';
}

struct TestArgs {
  std::string table_path;
  std::string counts_path;
  std::string builtin_name;
  std::string null_path;
  std::string model = "auto";
  bool labeled = false;
  bool print_fixture = false;
  double alpha = 0.05;
  double h = 0.1;
  double eps_frac = 1e-3;
  std::string json_path;
  bool no_timestamp = false;
};

int cmd_test(const TestArgs& args) {
  const int sources = !args.table_path.empty() + !args.counts_path.empty() +
                      !args.builtin_name.empty();
  if (sources != 1) {
    throw error("exactly one of --table, --counts, --builtin is required");
  }

  if (args.print_fixture) {
    if (args.builtin_name.empty()) {
      throw error("--print requires --builtin");
    }
    serialize_table(builtin_table(args.builtin_name), std::cout, TableFormat{true});
    return 0;
  }

  CorrectionConfig config{args.h, EpsPolicy{args.eps_frac}};
  TestReport report;
  json input_info;
  std::uint64_t digest = 0;

  std::string model = args.model;
  if (model == "auto") {
    model = args.counts_path.empty() ? "independence" : "simple";
  }
  if (model != "independence" && model != "simple") {
    throw error("unknown model: " + model);
  }

  if (!args.counts_path.empty()) {
    if (model != "simple") {
      throw error("--counts input requires the simple model");
    }
    if (args.null_path.empty()) {
      throw error("the simple model requires --null");
    }
    const std::string counts_text = read_file(args.counts_path);
    const std::string null_text = read_file(args.null_path);
    digest = fnv1a(null_text, fnv1a(counts_text));
    const CountVector counts(parse_count_list(counts_text));
    const SimpleNull null{parse_weight_list(null_text)};
    report = run_test(counts, null, args.alpha, config);
    input_info["kind"] = "counts";
    input_info["source"] = args.counts_path;
    input_info["null_source"] = args.null_path;
  } else {
    ContingencyTable table;
    if (!args.builtin_name.empty()) {
      table = builtin_table(args.builtin_name);
      std::ostringstream canon;
      serialize_table(table, canon, TableFormat{true});
      digest = fnv1a(canon.str());
      input_info["kind"] = "builtin";
      input_info["source"] = args.builtin_name;
    } else {
      const std::string text = read_file(args.table_path);
      digest = fnv1a(text);
      std::istringstream in(text);
      table = parse_table(in, TableFormat{args.labeled});
      input_info["kind"] = "table";
      input_info["source"] = args.table_path;
    }
    if (model == "simple") {
      if (args.null_path.empty()) {
        throw error("the simple model requires --null");
      }
      const std::string null_text = read_file(args.null_path);
      digest = fnv1a(null_text, digest);
      const SimpleNull null{parse_weight_list(null_text)};
      report = run_test(flatten(table), null, args.alpha, config);
      input_info["null_source"] = args.null_path;
    } else {
      RemovalLog log;
      table = remove_empty_margins(table, &log);
      if (!log.empty()) {
        input_info["removed_rows"] = log.removed_rows;
        input_info["removed_cols"] = log.removed_cols;
      }
      report = run_test(table, Independence2D{}, args.alpha, config);
      input_info["rows"] = table.rows;
      input_info["cols"] = table.cols;
    }
  }

  print_report(report, std::cout);

  if (!args.json_path.empty()) {
    json doc;
    doc["metadata"] = metadata_json(0, args.h, args.eps_frac, hex64(digest),
                                    !args.no_timestamp);
    doc["input"] = input_info;
    doc["report"] = report_json(report);
    std::ofstream out(args.json_path);
    if (!out) {
      throw error("cannot write JSON report: " + args.json_path);
    }
    out << doc.dump(2) << '\n';
  }
  return report.combined_reject ? 1 : 0;
}

struct SimArgs {
  std::string dist;
  std::string null_source;
  bool null_perturbed = false;
  std::int64_t n = 400;
  int reps = 1000;
  std::vector<double> alphas;
  std::optional<std::uint64_t> seed;
  std::string out_prefix = "simulation";
  bool no_timestamp = false;
};

ProbVector resolve_distribution(const std::string& source, std::string& digest_text) {
  if (is_builtin_distribution(source)) {
    digest_text = "builtin:" + source;
    return builtin_distribution(source);
  }
  digest_text = read_file(source);
  return parse_weight_list(digest_text);
}

int cmd_simulate(const SimArgs& args) {
  if (args.dist.empty()) {
    throw error("--dist is required");
  }
  if (args.null_perturbed && !args.null_source.empty()) {
    throw error("--null and --null-perturbed are mutually exclusive");
  }

  std::string dist_text, null_text;
  const ProbVector sampling = resolve_distribution(args.dist, dist_text);
  ProbVector null_dist = sampling;
  if (args.null_perturbed) {
    null_dist = perturb_distribution(sampling);
    null_text = "perturbed";
  } else if (!args.null_source.empty()) {
    null_dist = resolve_distribution(args.null_source, null_text);
  } else {
    null_text = "sampling";
  }
  const std::uint64_t digest = fnv1a(null_text, fnv1a(dist_text));

  SimulationSpec spec{sampling, null_dist, args.n, args.reps,
                      args.alphas.empty() ? std::vector<double>{0.05} : args.alphas,
                      args.seed ? *args.seed : default_seed()};
  const SimulationSummary summary = run_simulation(spec);

  const std::string quantiles_path = args.out_prefix + "_quantiles.csv";
  const std::string rates_path = args.out_prefix + "_rates.csv";
  const std::string json_path = args.out_prefix + "_summary.json";

  std::ofstream qout(quantiles_path);
  if (!qout) throw error("cannot write " + quantiles_path);
  write_quantiles_csv(summary, qout);

  std::ofstream rout(rates_path);
  if (!rout) throw error("cannot write " + rates_path);
  write_rates_csv(summary, rout);

  json doc;
  doc["metadata"] = metadata_json(summary.seed, 0.1, 1e-3, hex64(digest),
                                  !args.no_timestamp);
  doc["spec"] = {{"dist", args.dist},
                 {"null", args.null_perturbed ? "perturbed" : (args.null_source.empty() ? args.dist : args.null_source)},
                 {"n", summary.n},
                 {"replicates", summary.replicates},
                 {"R", summary.R},
                 {"alpha_levels", summary.alpha_levels},
                 {"rng", summary.rng_algorithm}};
  doc["thresholds"] = summary.thresholds;
  doc["mode_c"] = summary.mode_c;
  doc["fallback_count"] = summary.fallback_count;
  json rates = json::array();
  json mode_rates = json::array();
  for (std::size_t ai = 0; ai < summary.alpha_levels.size(); ++ai) {
    json row, mrow;
    for (int s = 0; s < kSimStatCount; ++s) {
      row[sim_stat_name(s)] = summary.rejection_rates[ai][s];
      mrow[sim_stat_name(s)] = summary.rejection_rates_at_mode[ai][s];
    }
    rates.push_back(row);
    mode_rates.push_back(mrow);
  }
  doc["rejection_rates"] = rates;
  doc["rejection_rates_at_mode"] = mode_rates;
  json per_c = json::array();
  for (const auto& [c, bucket] : summary.per_c) {
    json entry;
    entry["c"] = c;
    entry["count"] = bucket.count;
    json q95;
    for (int s = 0; s < kSimStatCount; ++s) q95[sim_stat_name(s)] = bucket.q95[s];
    entry["q95"] = q95;
    per_c.push_back(entry);
  }
  doc["per_c"] = per_c;

  std::ofstream jout(json_path);
  if (!jout) throw error("cannot write " + json_path);
  jout << doc.dump(2) << '\n';

  char line[160];
  std::snprintf(line, sizeof line, "replicates=%d  mode(c)=%d  fallbacks=%d",
                summary.replicates, summary.mode_c, summary.fallback_count);
  std::cout << line << '\n';
  for (std::size_t ai = 0; ai < summary.alpha_levels.size(); ++ai) {
    std::snprintf(line, sizeof line, "alpha=%g:", summary.alpha_levels[ai]);
    std::cout << line;
    for (int s = 0; s < kSimStatCount; ++s) {
      std::snprintf(line, sizeof line, "  %s=%.3f", sim_stat_name(s),
                    summary.rejection_rates[ai][s]);
      std::cout << line;
    }
    std::cout << '\n';
  }
  std::cout << "wrote " << quantiles_path << ", " << rates_path << ", " << json_path
            << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goodness-of-fit and independence tests for sparse multinomial data"};
  app.require_subcommand(1);

  TestArgs test_args;
  CLI::App* test = app.add_subcommand("test", "Run a goodness-of-fit or independence test");
  test->set_help_flag("--help", "Print this help message and exit");
  test->add_option("--table", test_args.table_path, "Contingency table CSV file");
  test->add_option("--counts", test_args.counts_path, "Count vector file");
  test->add_option("--builtin", test_args.builtin_name, "Bundled dataset: rivers | sclerosis");
  test->add_option("--null", test_args.null_path, "Null weights file (normalized to sum 1)");
  test->add_option("--model", test_args.model, "independence | simple (default: by input kind)");
  test->add_flag("--labeled", test_args.labeled, "Table file has label row/column");
  test->add_flag("--print", test_args.print_fixture, "Print the builtin dataset as CSV and exit");
  test->add_option("--alpha", test_args.alpha, "Significance level")->check(CLI::Range(1e-9, 1.0 - 1e-9));
  test->add_option("--h", test_args.h, "Interpolation weight for b");
  test->add_option("--eps-frac", test_args.eps_frac, "eps as a fraction of the a-interval width");
  test->add_option("--json", test_args.json_path, "Write the JSON report to this file");
  test->add_flag("--no-timestamp", test_args.no_timestamp, "Omit the timestamp from JSON output");

  SimArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "Run a seeded Monte Carlo study");
  sim->add_option("--dist", sim_args.dist, "Sampling distribution: f1..f4 or weights file")->required();
  sim->add_option("--null", sim_args.null_source, "Null distribution: f1..f4 or weights file");
  sim->add_flag("--null-perturbed", sim_args.null_perturbed, "Test against the perturbed sampling distribution");
  sim->add_option("--n", sim_args.n, "Sample size per replicate");
  sim->add_option("--reps", sim_args.reps, "Number of replicates");
  sim->add_option("--alpha", sim_args.alphas, "Significance levels (repeatable)");
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt = sim->add_option("--seed", seed_value, "RNG seed (default: SPARSEGOF_SEED or 12345)");
  sim->add_option("--out-prefix", sim_args.out_prefix, "Prefix for the three output files");
  sim->add_flag("--no-timestamp", sim_args.no_timestamp, "Omit the timestamp from JSON output");

  double q_prob = 0.0;
  int q_df = 0;
  CLI::App* quant = app.add_subcommand("quantile", "Print a chi-square quantile");
  quant->add_option("prob", q_prob, "Probability level in (0,1)")->required();
  quant->add_option("df", q_df, "Degrees of freedom")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (test->parsed()) {
      return cmd_test(test_args);
    }
    if (sim->parsed()) {
      if (seed_opt->count() > 0) sim_args.seed = seed_value;
      return cmd_simulate(sim_args);
    }
    if (quant->parsed()) {
      if (!(q_prob > 0.0 && q_prob < 1.0) || q_df < 1) {
        throw error("quantile needs 0 < prob < 1 and df >= 1");
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", chi_square_quantile(q_prob, q_df));
      std::cout << buf << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

#include "sparsegof/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sparsegof/common.hpp"
#include "sparsegof/core_stats.hpp"
#include "sparsegof/corrections.hpp"

namespace sparsegof {

namespace {

constexpr const char* kStatNames[kSimStatCount] = {"Q", "Qab", "G", "Gab", "RC23"};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// 1-based order-statistic index ceil(0.95 k), in exact integer arithmetic.
std::size_t q95_index(std::size_t k) {
  return (19 * k + 19) / 20;
}

} // namespace

const char* sim_stat_name(int index) {
  if (index < 0 || index >= kSimStatCount) {
    throw error("statistic index out of range");
  }
  return kStatNames[index];
}

std::mt19937_64 replicate_rng(std::uint64_t seed, std::uint64_t replicate_index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(replicate_index)));
}

CountVector sample_multinomial(const ProbVector& p, std::int64_t n, std::mt19937_64& rng) {
  if (n < 1) {
    throw error("sample size must be >= 1");
  }
  std::vector<double> cum(p.size());
  double acc = 0.0;
  for (std::size_t r = 0; r < p.size(); ++r) {
    acc += p[r];
    cum[r] = acc;
  }
  std::vector<std::int64_t> counts(p.size(), 0);
  for (std::int64_t draw = 0; draw < n; ++draw) {
    const double u = uniform53(rng) * acc;
    std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (idx == cum.size()) --idx;
    ++counts[idx];
  }
  return CountVector(std::move(counts));
}

ProbVector builtin_distribution(const std::string& name) {
  std::size_t sparse_cells = 0;
  double bulk = 0.0;
  if (name == "f1") {
    sparse_cells = 20;
    bulk = 0.01245;
  } else if (name == "f2") {
    sparse_cells = 50;
    bulk = 0.0198;
  } else if (name == "f3") {
    sparse_cells = 70;
    bulk = 0.986 / 30.0;
  } else if (name == "f4") {
    sparse_cells = 90;
    bulk = 0.0982;
  } else {
    throw error("unknown builtin distribution: " + name);
  }
  std::vector<double> p(100, 0.0002);
  std::fill(p.begin() + sparse_cells, p.end(), bulk);
  return ProbVector(std::move(p));
}

bool is_builtin_distribution(const std::string& name) {
  return name == "f1" || name == "f2" || name == "f3" || name == "f4";
}

ProbVector perturb_distribution(const ProbVector& f) {
  if (f.size() != 100) {
    throw error("perturbation is defined for length-100 vectors");
  }
  const double shift = 1.0 / 300.0;
  std::vector<double> p(100);
  for (std::size_t i = 0; i < 100; ++i) {
    p[i] = f[i];
    if (i < 10) p[i] += shift;
    if (i >= 90) p[i] -= shift;
    if (p[i] <= 0.0) {
      throw error("perturbation drives entry " + std::to_string(i + 1) +
                  " below zero");
    }
  }
  return ProbVector(std::move(p));
}

SimulationSummary run_simulation(const SimulationSpec& spec) {
  if (spec.sampling_dist.size() != spec.null_dist.size()) {
    throw error("sampling and null vectors differ in length");
  }
  if (spec.sampling_dist.size() < 2) {
    throw error("simulation needs at least two categories");
  }
  if (!spec.null_dist.strictly_positive()) {
    throw error("null vector has a zero entry (structural zero); remove the cell upstream");
  }
  if (spec.n < 1) {
    throw error("sample size must be >= 1");
  }
  if (spec.replicates < 1) {
    throw error("replicate count must be >= 1");
  }
  if (spec.alpha_levels.empty()) {
    throw error("at least one alpha level is required");
  }
  for (double alpha : spec.alpha_levels) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw error("alpha must lie in (0, 1)");
    }
  }

  SimulationSummary out;
  out.seed = spec.seed;
  out.replicates = spec.replicates;
  out.n = spec.n;
  out.R = static_cast<int>(spec.sampling_dist.size());
  out.alpha_levels = spec.alpha_levels;
  out.rng_algorithm = "splitmix64+mt19937_64";
  const int df = out.R - 1;
  for (double alpha : spec.alpha_levels) {
    out.thresholds.push_back(chi_square_quantile(1.0 - alpha, df));
  }
  const std::size_t n_alpha = spec.alpha_levels.size();

  std::map<int, std::array<std::vector<double>, kSimStatCount>> values_by_c;
  std::map<int, std::vector<std::array<int, kSimStatCount>>> rejects_by_c;
  std::vector<std::array<int, kSimStatCount>> total_rejects(
      n_alpha, std::array<int, kSimStatCount>{});

  for (int rep = 0; rep < spec.replicates; ++rep) {
    std::mt19937_64 rng = replicate_rng(spec.seed, static_cast<std::uint64_t>(rep));
    const CountVector counts = sample_multinomial(spec.sampling_dist, spec.n, rng);
    const ProbVector mle = counts.mle();

    double stats[kSimStatCount];
    stats[0] = pearson_q(spec.null_dist, mle, spec.n);
    stats[2] = kullback_g(spec.null_dist, mle, spec.n);
    stats[4] = power_divergence(2.0 / 3.0, spec.null_dist, mle, spec.n);
    const CorrectionParams params = choose_ab(counts);
    if (params.fallback) ++out.fallback_count;
    stats[1] = corrected_q(spec.null_dist, counts, params);
    stats[3] = corrected_g(spec.null_dist, counts, params);

    const int c = static_cast<int>(counts.zero_count());
    auto& values = values_by_c[c];
    auto& rejects = rejects_by_c[c];
    if (rejects.empty()) {
      rejects.assign(n_alpha, std::array<int, kSimStatCount>{});
    }
    for (int s = 0; s < kSimStatCount; ++s) {
      values[s].push_back(stats[s]);
    }
    for (std::size_t ai = 0; ai < n_alpha; ++ai) {
      for (int s = 0; s < kSimStatCount; ++s) {
        if (stats[s] > out.thresholds[ai]) {
          ++rejects[ai][s];
          ++total_rejects[ai][s];
        }
      }
    }
  }

  int best_count = 0;
  for (auto& [c, values] : values_by_c) {
    CBucket bucket;
    bucket.count = static_cast<int>(values[0].size());
    for (int s = 0; s < kSimStatCount; ++s) {
      std::sort(values[s].begin(), values[s].end());
      bucket.q95[s] = values[s][q95_index(values[s].size()) - 1];
    }
    bucket.reject_counts = std::move(rejects_by_c[c]);
    if (bucket.count > best_count) {
      best_count = bucket.count;
      out.mode_c = c;
    }
    out.per_c.emplace(c, std::move(bucket));
  }

  out.rejection_rates.assign(n_alpha, std::array<double, kSimStatCount>{});
  for (std::size_t ai = 0; ai < n_alpha; ++ai) {
    for (int s = 0; s < kSimStatCount; ++s) {
      out.rejection_rates[ai][s] =
          static_cast<double>(total_rejects[ai][s]) / spec.replicates;
    }
  }
  out.rejection_rates_at_mode = out.rates_at(out.mode_c);
  return out;
}

std::vector<std::array<double, kSimStatCount>> SimulationSummary::rates_at(int c) const {
  const auto it = per_c.find(c);
  if (it == per_c.end()) {
    throw error("no replicates produced c = " + std::to_string(c));
  }
  const CBucket& bucket = it->second;
  std::vector<std::array<double, kSimStatCount>> rates(
      bucket.reject_counts.size(), std::array<double, kSimStatCount>{});
  for (std::size_t ai = 0; ai < bucket.reject_counts.size(); ++ai) {
    for (int s = 0; s < kSimStatCount; ++s) {
      rates[ai][s] = static_cast<double>(bucket.reject_counts[ai][s]) / bucket.count;
    }
  }
  return rates;
}

std::vector<DecayPoint> zero_count_decay(const ProbVector& p,
                                         const std::vector<std::int64_t>& n_grid,
                                         int replicates, std::uint64_t seed) {
  if (!p.strictly_positive()) {
    throw error("decay analysis requires a strictly positive vector");
  }
  if (replicates < 1) {
    throw error("replicate count must be >= 1");
  }
  std::vector<DecayPoint> points;
  points.reserve(n_grid.size());
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::int64_t n = n_grid[gi];
    int hits = 0;
    for (int rep = 0; rep < replicates; ++rep) {
      const std::uint64_t stream =
          static_cast<std::uint64_t>(gi) * static_cast<std::uint64_t>(replicates) +
          static_cast<std::uint64_t>(rep);
      std::mt19937_64 rng = replicate_rng(seed, stream);
      const CountVector counts = sample_multinomial(p, n, rng);
      if (counts.zero_count() > 0) ++hits;
    }
    points.push_back({n, static_cast<double>(hits) / replicates});
  }
  return points;
}

void write_quantiles_csv(const SimulationSummary& summary, std::ostream& out) {
  out << "c,bucket_count";
  for (int s = 0; s < kSimStatCount; ++s) out << ",q_" << kStatNames[s];
  out << '\n';
  char buf[64];
  for (const auto& [c, bucket] : summary.per_c) {
    out << c << ',' << bucket.count;
    for (int s = 0; s < kSimStatCount; ++s) {
      std::snprintf(buf, sizeof buf, "%.6f", bucket.q95[s]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

void write_rates_csv(const SimulationSummary& summary, std::ostream& out) {
  out << "alpha";
  for (int s = 0; s < kSimStatCount; ++s) out << ",rate_" << kStatNames[s];
  out << ",mode_c";
  for (int s = 0; s < kSimStatCount; ++s) out << ",mode_rate_" << kStatNames[s];
  out << '\n';
  char buf[64];
  for (std::size_t ai = 0; ai < summary.alpha_levels.size(); ++ai) {
    std::snprintf(buf, sizeof buf, "%g", summary.alpha_levels[ai]);
    out << buf;
    for (int s = 0; s < kSimStatCount; ++s) {
      std::snprintf(buf, sizeof buf, "%.6f", summary.rejection_rates[ai][s]);
      out << ',' << buf;
    }
    out << ',' << summary.mode_c;
    for (int s = 0; s < kSimStatCount; ++s) {
      std::snprintf(buf, sizeof buf, "%.6f", summary.rejection_rates_at_mode[ai][s]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

} // namespace sparsegof

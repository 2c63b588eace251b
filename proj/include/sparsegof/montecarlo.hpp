#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "sparsegof/count_vector.hpp"
#include "sparsegof/prob_vector.hpp"

namespace sparsegof {

// Names of the five statistics tracked by the simulation engine, in the fixed
// column order used by all outputs.
inline constexpr int kSimStatCount = 5;
const char* sim_stat_name(int index); // Q, Qab, G, Gab, RC23

struct SimulationSpec {
  ProbVector sampling_dist;
  ProbVector null_dist;
  std::int64_t n = 0;
  int replicates = 0;
  std::vector<double> alpha_levels;
  std::uint64_t seed = 0;
};

struct CBucket {
  int count = 0;
  double q95[kSimStatCount] = {};           // type-1 empirical 0.95-quantile
  std::vector<std::array<int, kSimStatCount>> reject_counts; // per alpha
};

struct SimulationSummary {
  std::uint64_t seed = 0;
  int replicates = 0;
  std::int64_t n = 0;
  int R = 0;
  std::vector<double> alpha_levels;
  std::vector<double> thresholds; // chi-square quantile at 1 - alpha, df = R-1
  std::map<int, CBucket> per_c;
  int mode_c = 0;                 // smallest c with the largest bucket
  int fallback_count = 0;
  std::string rng_algorithm;

  // rates[alpha_index][stat] over all replicates, and restricted to c buckets.
  std::vector<std::array<double, kSimStatCount>> rejection_rates;
  std::vector<std::array<double, kSimStatCount>> rejection_rates_at_mode;
  std::vector<std::array<double, kSimStatCount>> rates_at(int c) const;
};

// One categorical sample of size n by inverse CDF over the cumulative vector.
CountVector sample_multinomial(const ProbVector& p, std::int64_t n, std::mt19937_64& rng);

// Deterministic per-replicate generator stream derived from (seed, index).
std::mt19937_64 replicate_rng(std::uint64_t seed, std::uint64_t replicate_index);

// The four sparse null vectors of the simulation study (R = 100).
ProbVector builtin_distribution(const std::string& name);
bool is_builtin_distribution(const std::string& name);

// +1/300 on cells 1..10, -1/300 on cells 91..100 (1-based), length 100.
ProbVector perturb_distribution(const ProbVector& f);

SimulationSummary run_simulation(const SimulationSpec& spec);

struct DecayPoint {
  std::int64_t n = 0;
  double p_any_zero = 0.0; // empirical P(C_n >= 1)
};
std::vector<DecayPoint> zero_count_decay(const ProbVector& p,
                                         const std::vector<std::int64_t>& n_grid,
                                         int replicates, std::uint64_t seed);

void write_quantiles_csv(const SimulationSummary& summary, std::ostream& out);
void write_rates_csv(const SimulationSummary& summary, std::ostream& out);

} // namespace sparsegof

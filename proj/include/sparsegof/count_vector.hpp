#pragma once

#include <cstdint>
#include <vector>

#include "sparsegof/common.hpp"
#include "sparsegof/prob_vector.hpp"

namespace sparsegof {

// Observed frequencies n_1..n_R with zero-cell bookkeeping. Requires at least
// one nonzero cell (c <= R-1).
class CountVector {
public:
  explicit CountVector(std::vector<std::int64_t> counts);

  std::size_t size() const { return counts_.size(); }
  std::int64_t operator[](std::size_t r) const { return counts_[r]; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  std::int64_t n() const { return n_; }
  std::size_t zero_count() const { return zero_indices_.size(); }
  const std::vector<std::size_t>& zero_indices() const { return zero_indices_; }
  const std::vector<std::size_t>& nonzero_indices() const { return nonzero_indices_; }

  // Maximum likelihood estimate p*_r = n_r / n.
  ProbVector mle() const;

private:
  std::vector<std::int64_t> counts_;
  std::int64_t n_ = 0;
  std::vector<std::size_t> zero_indices_;
  std::vector<std::size_t> nonzero_indices_;
};

// Extremes of the nonzero counts and the derived positivity margins.
struct SparsityStats {
  std::int64_t n_lo = 0;    // smallest nonzero count
  std::int64_t n_hi = 0;    // largest nonzero count
  std::int64_t n_lolo = 0;  // n - n_lo * (R - c)
  std::int64_t n_hihi = 0;  // n_hi * (R - c) - n
  bool uniform_flag = false;
};

SparsityStats sparsity_stats(const CountVector& counts);

} // namespace sparsegof

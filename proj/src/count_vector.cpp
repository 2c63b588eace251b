#include "sparsegof/count_vector.hpp"

#include <algorithm>

namespace sparsegof {

CountVector::CountVector(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) {
    throw error("count vector must not be empty");
  }
  for (std::size_t r = 0; r < counts_.size(); ++r) {
    if (counts_[r] < 0) {
      throw error("counts must be nonnegative");
    }
    n_ += counts_[r];
    (counts_[r] == 0 ? zero_indices_ : nonzero_indices_).push_back(r);
  }
  if (nonzero_indices_.empty()) {
    throw error("count vector needs at least one nonzero cell");
  }
}

ProbVector CountVector::mle() const {
  std::vector<double> p(counts_.size());
  for (std::size_t r = 0; r < counts_.size(); ++r) {
    p[r] = static_cast<double>(counts_[r]) / static_cast<double>(n_);
  }
  return ProbVector(std::move(p));
}

SparsityStats sparsity_stats(const CountVector& counts) {
  SparsityStats s;
  s.n_lo = s.n_hi = counts[counts.nonzero_indices().front()];
  for (std::size_t j : counts.nonzero_indices()) {
    s.n_lo = std::min(s.n_lo, counts[j]);
    s.n_hi = std::max(s.n_hi, counts[j]);
  }
  const auto nonzero_cells = static_cast<std::int64_t>(counts.nonzero_indices().size());
  s.n_lolo = counts.n() - s.n_lo * nonzero_cells;
  s.n_hihi = s.n_hi * nonzero_cells - counts.n();
  s.uniform_flag = (s.n_lo == s.n_hi);
  return s;
}

} // namespace sparsegof

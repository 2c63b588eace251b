#include "sparsegof/prob_vector.hpp"

#include <algorithm>
#include <cmath>

namespace sparsegof {

ProbVector::ProbVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2) {
    throw error("probability vector needs at least two categories");
  }
  long double sum = 0.0L;
  for (double p : entries_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw error("probability entries must be finite and nonnegative");
    }
    sum += p;
  }
  if (std::fabs(static_cast<double>(sum) - 1.0) > kSumTolerance) {
    throw error("probability entries must sum to 1 within 1e-10, got " +
                std::to_string(static_cast<double>(sum)));
  }
}

bool ProbVector::strictly_positive() const {
  return std::all_of(entries_.begin(), entries_.end(), [](double p) { return p > 0.0; });
}

double ProbVector::min_entry() const {
  return *std::min_element(entries_.begin(), entries_.end());
}

} // namespace sparsegof

#pragma once

#include <cstddef>
#include <vector>

#include "sparsegof/common.hpp"

namespace sparsegof {

// Probability vector over R >= 2 categories: entries nonnegative, summing to 1
// within 1e-10.
class ProbVector {
public:
  explicit ProbVector(std::vector<double> entries);

  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t r) const { return entries_[r]; }
  const std::vector<double>& entries() const { return entries_; }

  bool strictly_positive() const;
  double min_entry() const;

  static constexpr double kSumTolerance = 1e-10;

private:
  std::vector<double> entries_;
};

} // namespace sparsegof

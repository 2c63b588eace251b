#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparsegof/count_vector.hpp"

namespace sparsegof {

struct ContingencyTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> cells; // row-major, rows * cols entries
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  std::int64_t& at(std::size_t i, std::size_t j) { return cells[i * cols + j]; }
  std::int64_t at(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
  std::int64_t total() const;
  std::int64_t row_sum(std::size_t i) const;
  std::int64_t col_sum(std::size_t j) const;
};

struct TableFormat {
  // When labeled, the first row holds column labels (its leading field names
  // the row-label column) and the first column holds row labels.
  bool labeled = false;
};

ContingencyTable parse_table(std::istream& in, TableFormat format = {});
ContingencyTable parse_table_file(const std::string& path, TableFormat format = {});
void serialize_table(const ContingencyTable& table, std::ostream& out,
                     TableFormat format = {});

struct RemovalLog {
  std::vector<std::string> removed_rows;
  std::vector<std::string> removed_cols;
  bool empty() const { return removed_rows.empty() && removed_cols.empty(); }
};

// Drops all-zero rows and columns until none remain; errors if fewer than two
// rows or columns survive.
ContingencyTable remove_empty_margins(const ContingencyTable& table, RemovalLog* log = nullptr);

// Row-major flattening to a count vector of length rows * cols.
CountVector flatten(const ContingencyTable& table);

} // namespace sparsegof

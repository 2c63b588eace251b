#include "sparsegof/tables.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "sparsegof/common.hpp"

namespace sparsegof {

namespace {

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::int64_t parse_cell(const std::string& field, std::size_t row) {
  std::int64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw error("row " + std::to_string(row + 1) + ": cell '" + field +
                "' is not an integer");
  }
  if (value < 0) {
    throw error("row " + std::to_string(row + 1) + ": negative cell " + field);
  }
  return value;
}

std::vector<std::string> default_labels(char prefix, std::size_t count) {
  std::vector<std::string> labels(count);
  for (std::size_t k = 0; k < count; ++k) {
    labels[k] = prefix + std::to_string(k + 1);
  }
  return labels;
}

} // namespace

std::int64_t ContingencyTable::total() const {
  std::int64_t s = 0;
  for (std::int64_t v : cells) s += v;
  return s;
}

std::int64_t ContingencyTable::row_sum(std::size_t i) const {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < cols; ++j) s += at(i, j);
  return s;
}

std::int64_t ContingencyTable::col_sum(std::size_t j) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < rows; ++i) s += at(i, j);
  return s;
}

ContingencyTable parse_table(std::istream& in, TableFormat format) {
  std::vector<std::vector<std::string>> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    if (trim(raw).empty()) continue;
    lines.push_back(split_fields(raw));
  }
  if (lines.empty()) {
    throw error("empty table input");
  }

  ContingencyTable table;
  std::size_t first_data = 0;
  if (format.labeled) {
    if (lines[0].size() < 2) {
      throw error("labeled header needs a leading field plus column labels");
    }
    table.col_labels.assign(lines[0].begin() + 1, lines[0].end());
    table.cols = table.col_labels.size();
    first_data = 1;
    if (lines.size() == 1) {
      throw error("labeled table has no data rows");
    }
  } else {
    table.cols = lines[0].size();
  }

  for (std::size_t k = first_data; k < lines.size(); ++k) {
    const auto& fields = lines[k];
    const std::size_t expected = table.cols + (format.labeled ? 1 : 0);
    if (fields.size() != expected) {
      throw error("row " + std::to_string(k + 1) + ": expected " +
                  std::to_string(expected) + " fields, got " +
                  std::to_string(fields.size()));
    }
    std::size_t first_cell = 0;
    if (format.labeled) {
      table.row_labels.push_back(fields[0]);
      first_cell = 1;
    }
    for (std::size_t f = first_cell; f < fields.size(); ++f) {
      table.cells.push_back(parse_cell(fields[f], k));
    }
    ++table.rows;
  }

  if (!format.labeled) {
    table.row_labels = default_labels('r', table.rows);
    table.col_labels = default_labels('c', table.cols);
  }
  return table;
}

ContingencyTable parse_table_file(const std::string& path, TableFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw error("cannot open table file: " + path);
  }
  return parse_table(in, format);
}

void serialize_table(const ContingencyTable& table, std::ostream& out,
                     TableFormat format) {
  if (format.labeled) {
    out << "row";
    for (const auto& label : table.col_labels) out << ',' << label;
    out << '\n';
  }
  for (std::size_t i = 0; i < table.rows; ++i) {
    if (format.labeled) out << table.row_labels[i] << ',';
    for (std::size_t j = 0; j < table.cols; ++j) {
      if (j > 0) out << ',';
      out << table.at(i, j);
    }
    out << '\n';
  }
}

ContingencyTable remove_empty_margins(const ContingencyTable& table, RemovalLog* log) {
  std::vector<std::size_t> keep_rows(table.rows);
  std::vector<std::size_t> keep_cols(table.cols);
  for (std::size_t i = 0; i < table.rows; ++i) keep_rows[i] = i;
  for (std::size_t j = 0; j < table.cols; ++j) keep_cols[j] = j;

  RemovalLog local;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = keep_rows.begin(); it != keep_rows.end();) {
      std::int64_t s = 0;
      for (std::size_t j : keep_cols) s += table.at(*it, j);
      if (s == 0) {
        local.removed_rows.push_back(table.row_labels.empty()
                                         ? "r" + std::to_string(*it + 1)
                                         : table.row_labels[*it]);
        it = keep_rows.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
    for (auto it = keep_cols.begin(); it != keep_cols.end();) {
      std::int64_t s = 0;
      for (std::size_t i : keep_rows) s += table.at(i, *it);
      if (s == 0) {
        local.removed_cols.push_back(table.col_labels.empty()
                                         ? "c" + std::to_string(*it + 1)
                                         : table.col_labels[*it]);
        it = keep_cols.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }

  if (keep_rows.size() < 2 || keep_cols.size() < 2) {
    throw error("table degenerates below 2x2 after removing empty margins");
  }

  ContingencyTable cleaned;
  cleaned.rows = keep_rows.size();
  cleaned.cols = keep_cols.size();
  cleaned.cells.reserve(cleaned.rows * cleaned.cols);
  for (std::size_t i : keep_rows) {
    for (std::size_t j : keep_cols) {
      cleaned.cells.push_back(table.at(i, j));
    }
    if (!table.row_labels.empty()) cleaned.row_labels.push_back(table.row_labels[i]);
  }
  if (!table.col_labels.empty()) {
    for (std::size_t j : keep_cols) cleaned.col_labels.push_back(table.col_labels[j]);
  }
  if (log) *log = std::move(local);
  return cleaned;
}

CountVector flatten(const ContingencyTable& table) {
  return CountVector(table.cells);
}

} // namespace sparsegof

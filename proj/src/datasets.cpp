#include "sparsegof/datasets.hpp"

#include "sparsegof/common.hpp"

namespace sparsegof {

namespace {

ContingencyTable rivers_table() {
  ContingencyTable t;
  t.rows = 3;
  t.cols = 6;
  t.row_labels = {"Oligotrophic", "Mesotrophic", "Eutrophic"};
  t.col_labels = {"000", "100", "010", "001", "110", "011"};
  t.cells = {
      0, 0, 3, 0, 3, 2, //
      2, 1, 0, 2, 1, 0, //
      2, 0, 3, 1, 1, 0, //
  };
  return t;
}

ContingencyTable sclerosis_table() {
  ContingencyTable t;
  t.rows = 2;
  t.cols = 16;
  t.row_labels = {"Sound", "Affected"};
  t.col_labels = {"H1/H1", "H1/H2", "H1/H3", "H1/H4", "H1/H5", "H1/H6",
                  "H2/H3", "H2/H5", "H2/H6", "H3/H3", "H3/H4", "H3/H5",
                  "H3/H6", "H4/H5", "H5/H5", "H5/H6"};
  t.cells = {
      98, 7, 116, 2, 71, 3,  4, 2, 0, 34, 1, 42, 2, 1, 13, 1, //
      91, 9, 104, 3, 70, 12, 5, 4, 1, 30, 2, 40, 7, 1, 13, 5, //
  };
  return t;
}

} // namespace

bool is_builtin_table(const std::string& name) {
  return name == "rivers" || name == "sclerosis";
}

ContingencyTable builtin_table(const std::string& name) {
  if (name == "rivers") return rivers_table();
  if (name == "sclerosis") return sclerosis_table();
  throw error("unknown builtin table: " + name);
}

} // namespace sparsegof

#pragma once

#include <string>

#include "sparsegof/tables.hpp"

namespace sparsegof {

// Bundled example tables: "rivers" (3x6 invertebrate families by trophic
// level, n = 21) and "sclerosis" (2x16 diplotype by health status, n = 794).
ContingencyTable builtin_table(const std::string& name);
bool is_builtin_table(const std::string& name);

} // namespace sparsegof

#pragma once

#include <stdexcept>
#include <string>

namespace sparsegof {

inline constexpr const char* kVersion = "0.1.0";

class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sparsegof

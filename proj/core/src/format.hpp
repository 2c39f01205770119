#pragma once

#include <charconv>
#include <string>

namespace sobolab::detail {

/// Shortest decimal that reads back as the same double.
inline std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace sobolab::detail

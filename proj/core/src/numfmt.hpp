#pragma once

#include <charconv>
#include <string>

namespace rdexact::detail {

// Shortest round-trip decimal form.
inline std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace rdexact::detail

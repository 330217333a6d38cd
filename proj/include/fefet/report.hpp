#pragma once

#include <charconv>
#include <string>

namespace fefet {

// Shortest decimal string that round-trips to the same double. Output is
// locale-independent, which keeps CSV reports byte-stable.
inline std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace fefet

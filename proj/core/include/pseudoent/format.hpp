#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace pseudoent {

/// Canonical float formatting: shortest decimal string that round-trips
/// to the same double (up to 17 significant digits). Keeps emitted CSV
/// and JSON byte-stable across runs of the same build.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace pseudoent

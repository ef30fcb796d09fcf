#ifndef MHD1D_IO_HPP
#define MHD1D_IO_HPP

#include <mhd1d/types.hpp>

#include <charconv>
#include <string>

namespace mhd1d {

/// Shortest round-trip decimal representation.
inline std::string format_number(Scalar x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace mhd1d

#endif

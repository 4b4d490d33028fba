#ifndef AGG_IO_HPP
#define AGG_IO_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace agg {

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace agg

#endif

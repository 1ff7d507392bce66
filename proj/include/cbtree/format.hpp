#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace cbtree {

/// Shortest decimal string that round-trips the double exactly. Locale-free,
/// so config files and CSV output look the same everywhere.
inline std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

} // namespace cbtree

#pragma once

#include <charconv>
#include <fstream>
#include <string>

#include "hocf/errors.hpp"

namespace hocf::detail {

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot open output file: " + path);
    return out;
}

}  // namespace hocf::detail

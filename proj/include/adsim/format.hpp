#pragma once

#include <charconv>
#include <span>
#include <string>

#include "adsim/vec.hpp"

namespace adsim {

// Shortest round-trip decimal formatting, so equal doubles always print the
// same bytes and traces diff cleanly.
inline std::string fmt(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string fmt(long x) { return std::to_string(x); }

inline std::string fmt(const Vec& v, char sep = ' ') {
    std::string out;
    for (int i = 0; i < v.dim; ++i) {
        if (i) out.push_back(sep);
        out += fmt(v[i]);
    }
    return out;
}

inline std::string fmt(std::span<const double> xs, char sep = ' ') {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out.push_back(sep);
        out += fmt(xs[i]);
    }
    return out;
}

}  // namespace adsim

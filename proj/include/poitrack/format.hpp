#pragma once

#include <charconv>
#include <string>

namespace poitrack {

// Shortest decimal form that round-trips the exact double; keeps every
// persisted file byte-stable across runs and platforms.
inline void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

inline std::string format_double(double v) {
    std::string s;
    append_double(s, v);
    return s;
}

}  // namespace poitrack

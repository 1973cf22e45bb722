#pragma once

#include <charconv>
#include <string>
#include <vector>

#include "poitrack/errors.hpp"

namespace poitrack::csv {

inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    for (std::string& f : fields) {
        const auto a = f.find_first_not_of(" \t");
        const auto b = f.find_last_not_of(" \t");
        f = a == std::string::npos ? std::string() : f.substr(a, b - a + 1);
    }
    return fields;
}

inline bool to_int(const std::string& s, int& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    const auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e;
}

inline bool to_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

[[noreturn]] inline void fail(const std::string& path, int line, const std::string& what) {
    throw DataError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace poitrack::csv

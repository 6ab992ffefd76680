#pragma once

#include <charconv>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ricker/box2.hpp"
#include "ricker/errors.hpp"

// Canonical JSON plumbing. nlohmann::json with the default (ordered-map)
// object type keeps keys sorted, and dump() prints doubles in shortest
// round-trip form, so serializing the same data always yields the same bytes.
// That is what makes rerun-and-diff auditing of certificates possible.

namespace ricker {

using Json = nlohmann::json;

inline Json to_json(const Interval& a) { return Json::array({a.lo, a.hi}); }

inline Json to_json(const Box2& b) {
    return Json::array({to_json(b.x), to_json(b.y)});
}

inline std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings as-is
    if (!out) throw RickerError("cannot open file for writing: " + path);
    out << text;
    out.flush();
    if (!out) throw RickerError("write failed: " + path);
}

// Shortest round-trip decimal form, used for embedding numbers in file names.
inline std::string format_double(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

}  // namespace ricker

#pragma once

#include <utility>

#include "ricker/interval.hpp"

namespace ricker {

// Axis-aligned closed box in the plane.
struct Box2 {
    Interval x;
    Interval y;

    Box2() = default;
    Box2(Interval x_, Interval y_) : x(x_), y(y_) {}
};

inline bool operator==(const Box2& a, const Box2& b) {
    return a.x == b.x && a.y == b.y;
}
inline bool operator!=(const Box2& a, const Box2& b) { return !(a == b); }

inline bool intersects(const Box2& a, const Box2& b) {
    return intersects(a.x, b.x) && intersects(a.y, b.y);
}

inline bool is_subset(const Box2& inner, const Box2& outer) {
    return is_subset(inner.x, outer.x) && is_subset(inner.y, outer.y);
}

inline bool contains(const Box2& b, double px, double py) {
    return b.x.contains(px) && b.y.contains(py);
}

inline Box2 hull(const Box2& a, const Box2& b) {
    return Box2(hull(a.x, b.x), hull(a.y, b.y));
}

inline std::pair<double, double> midpoint(const Box2& b) {
    return {midpoint(b.x), midpoint(b.y)};
}

// Certified upper bound on the Euclidean diameter.
inline double diameter_up(const Box2& b) {
    const Interval wx(0.0, width_up(b.x));
    const Interval wy(0.0, width_up(b.y));
    return sqrt(powi(wx, 2) + powi(wy, 2)).hi;
}

}  // namespace ricker

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ricker/errors.hpp"

// Closed-interval arithmetic on IEEE-754 binary64 with outward rounding.
//
// Every operation is computed in the default round-to-nearest mode and each
// finite endpoint is then nudged one ulp outward. For the correctly rounded
// primitives (+, -, *, /, sqrt) the nearest result is within half an ulp of
// the exact endpoint, so one ulp of padding restores containment. std::exp
// is only guaranteed faithful by the C library we target (error below one
// ulp), and one ulp of padding covers that too. Exact operations (abs, hull,
// negation, min/max of endpoints) are not padded.
//
// Endpoints may be infinite (overflow saturates outward); they are never NaN.

namespace ricker {

inline double step_down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

inline double step_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

struct Interval {
    double lo;
    double hi;

    Interval() : lo(0.0), hi(0.0) {}
    explicit Interval(double point) : lo(point), hi(point) { validate(); }
    Interval(double l, double h) : lo(l), hi(h) { validate(); }

    void validate() const {
        if (std::isnan(lo) || std::isnan(hi))
            throw DomainError("interval endpoint is NaN");
        if (lo > hi)
            throw DomainError("interval endpoints out of order");
    }

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool is_point() const { return lo == hi; }
};

inline bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
}
inline bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }

// Upper bound on the true width hi - lo. The subtraction is carried out in
// long double (64-bit mantissa), which keeps exact differences exact, and the
// conversion back to double is corrected upward when it lost anything.
inline double width_up(const Interval& a) {
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi))
        return std::numeric_limits<double>::infinity();
    long double w = static_cast<long double>(a.hi) - static_cast<long double>(a.lo);
    double d = static_cast<double>(w);
    if (static_cast<long double>(d) < w) d = step_up(d);
    return d;
}

// A point of the interval near its middle. Not certified; used only for
// bisection and reporting, so it is merely clamped into the interval.
inline double midpoint(const Interval& a) {
    double m = 0.5 * (a.lo + a.hi);
    if (!std::isfinite(m)) m = 0.5 * a.lo + 0.5 * a.hi;
    return std::min(std::max(m, a.lo), a.hi);
}

inline Interval hull(const Interval& a, const Interval& b) {
    return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

inline bool intersects(const Interval& a, const Interval& b) {
    return a.lo <= b.hi && b.lo <= a.hi;
}

inline bool is_subset(const Interval& inner, const Interval& outer) {
    return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    double l = std::max(a.lo, b.lo);
    double h = std::min(a.hi, b.hi);
    if (l > h) return std::nullopt;
    return Interval(l, h);
}

// A sum that rounds to zero is exact (a float addition whose result is
// subnormal incurs no rounding error), so zero results need no padding.
inline double add_down(double x, double y) {
    double s = x + y;
    return s == 0.0 ? 0.0 : step_down(s);
}
inline double add_up(double x, double y) {
    double s = x + y;
    return s == 0.0 ? 0.0 : step_up(s);
}

inline Interval operator+(const Interval& a, const Interval& b) {
    return Interval(add_down(a.lo, b.lo), add_up(a.hi, b.hi));
}

inline Interval operator-(const Interval& a, const Interval& b) {
    return Interval(add_down(a.lo, -b.hi), add_up(a.hi, -b.lo));
}

inline Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

namespace detail {

// Endpoint product for multiplication. 0 * inf has the indeterminate-form NaN
// in IEEE arithmetic, but as a corner of a rectangle of products the exact
// contribution of a zero factor is zero, so that corner collapses to +0.
// Underflowed products keep their sign (-0.0 marks a negative true value).
inline double corner_mul(double x, double y) {
    if (x == 0.0 || y == 0.0) return 0.0;
    return x * y;
}

}  // namespace detail

inline Interval operator*(const Interval& a, const Interval& b) {
    const double p1 = detail::corner_mul(a.lo, b.lo);
    const double p2 = detail::corner_mul(a.lo, b.hi);
    const double p3 = detail::corner_mul(a.hi, b.lo);
    const double p4 = detail::corner_mul(a.hi, b.hi);
    double lo = std::min(std::min(p1, p2), std::min(p3, p4));
    double hi = std::max(std::max(p1, p2), std::max(p3, p4));
    // Zero corners are either exact (a zero factor) or an underflowed product.
    // An underflowed positive product is safely bounded below by 0; only when
    // the factor signs admit negative products must a zero minimum be padded.
    const bool neg_possible = (a.lo < 0.0 && b.hi > 0.0) || (a.hi > 0.0 && b.lo < 0.0);
    const bool pos_possible = (a.hi > 0.0 && b.hi > 0.0) || (a.lo < 0.0 && b.lo < 0.0);
    lo = (lo == 0.0) ? (neg_possible ? step_down(0.0) : 0.0) : step_down(lo);
    hi = (hi == 0.0) ? (pos_possible ? step_up(0.0) : 0.0) : step_up(hi);
    return Interval(lo, hi);
}

inline Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo <= 0.0 && 0.0 <= b.hi)
        throw DivisionByZeroInterval("interval divisor contains zero");
    const double q1 = a.lo == 0.0 ? 0.0 : a.lo / b.lo;
    const double q2 = a.lo == 0.0 ? 0.0 : a.lo / b.hi;
    const double q3 = a.hi == 0.0 ? 0.0 : a.hi / b.lo;
    const double q4 = a.hi == 0.0 ? 0.0 : a.hi / b.hi;
    double lo = std::min(std::min(q1, q2), std::min(q3, q4));
    double hi = std::max(std::max(q1, q2), std::max(q3, q4));
    const bool neg_possible = (a.lo < 0.0 && b.lo > 0.0) || (a.hi > 0.0 && b.hi < 0.0);
    const bool pos_possible = (a.hi > 0.0 && b.lo > 0.0) || (a.lo < 0.0 && b.hi < 0.0);
    lo = (lo == 0.0) ? (neg_possible ? step_down(0.0) : 0.0) : step_down(lo);
    hi = (hi == 0.0) ? (pos_possible ? step_up(0.0) : 0.0) : step_up(hi);
    return Interval(lo, hi);
}

// Mixed scalar/interval forms so formulas read close to their algebraic
// shape. Scalars become degenerate intervals first (integer literals and the
// small rationals used by the coefficient tables are exact in binary64).
inline Interval operator+(const Interval& a, double b) { return a + Interval(b); }
inline Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
inline Interval operator-(const Interval& a, double b) { return a - Interval(b); }
inline Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
inline Interval operator*(const Interval& a, double b) { return a * Interval(b); }
inline Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
inline Interval operator/(const Interval& a, double b) { return a / Interval(b); }
inline Interval operator/(double a, const Interval& b) { return Interval(a) / b; }

inline Interval abs(const Interval& a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return Interval(-a.hi, -a.lo);
    return Interval(0.0, std::max(-a.lo, a.hi));
}

inline Interval sqrt(const Interval& a) {
    if (a.lo < 0.0)
        throw DomainError("sqrt of interval with negative lower endpoint");
    double lo = a.lo == 0.0 ? 0.0 : step_down(std::sqrt(a.lo));
    if (lo < 0.0) lo = 0.0;
    double hi = a.hi == 0.0 ? 0.0 : step_up(std::sqrt(a.hi));
    return Interval(lo, hi);
}

inline Interval exp(const Interval& a) {
    double lo = step_down(std::exp(a.lo));
    if (lo < 0.0) lo = 0.0;  // exp is positive; padding may not cross zero
    double hi = step_up(std::exp(a.hi));
    return Interval(lo, hi);
}

// a^n for integer n >= 0, tighter than repeated multiplication would give on
// intervals straddling zero: even powers there have exact lower endpoint 0.
inline Interval powi(const Interval& a, int n) {
    if (n < 0) throw DomainError("powi exponent must be nonnegative");
    if (n == 0) return Interval(1.0);
    if (n == 1) return a;
    // Powers of a degenerate endpoint, by binary exponentiation on intervals.
    const auto point_pow = [](double x, int k) {
        Interval acc(1.0);
        Interval base(x);
        while (k > 0) {
            if (k & 1) acc = acc * base;
            k >>= 1;
            if (k > 0) base = base * base;
        }
        return acc;
    };
    if (n % 2 == 0 && a.lo < 0.0 && a.hi > 0.0) {
        const double m = std::max(-a.lo, a.hi);
        return Interval(0.0, point_pow(m, n).hi);
    }
    return hull(point_pow(a.lo, n), point_pow(a.hi, n));
}

inline Interval min(const Interval& a, const Interval& b) {
    return Interval(std::min(a.lo, b.lo), std::min(a.hi, b.hi));
}

inline Interval max(const Interval& a, const Interval& b) {
    return Interval(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

// Upper bound on |a - b| for scalars, used by stopping rules.
inline double dist_up(double a, double b) {
    double d = std::fabs(a - b);
    return d == 0.0 ? 0.0 : step_up(d);
}

// Upper bound on the Hausdorff distance between two intervals.
inline double hausdorff_up(const Interval& a, const Interval& b) {
    return std::max(dist_up(a.lo, b.lo), dist_up(a.hi, b.hi));
}

}  // namespace ricker

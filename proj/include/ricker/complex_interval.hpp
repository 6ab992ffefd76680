#pragma once

#include "ricker/interval.hpp"

// Rectangular complex intervals: independent real and imaginary parts. The
// rectangle returned by an operation contains every value the operation can
// take on the operands, which is all the certification code needs; no attempt
// is made to stay optimal (rectangles are not closed under multiplication).

namespace ricker {

struct ComplexInterval {
    Interval re;
    Interval im;

    ComplexInterval() = default;
    ComplexInterval(Interval r, Interval i) : re(r), im(i) {}
    explicit ComplexInterval(const Interval& r) : re(r), im(Interval(0.0)) {}
    explicit ComplexInterval(double r) : re(Interval(r)), im(Interval(0.0)) {}
};

inline ComplexInterval imaginary_unit() {
    return ComplexInterval(Interval(0.0), Interval(1.0));
}

inline ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
    return ComplexInterval(a.re + b.re, a.im + b.im);
}

inline ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
    return ComplexInterval(a.re - b.re, a.im - b.im);
}

inline ComplexInterval operator-(const ComplexInterval& a) {
    return ComplexInterval(-a.re, -a.im);
}

inline ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
    return ComplexInterval(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

inline ComplexInterval conj(const ComplexInterval& a) {
    return ComplexInterval(a.re, -a.im);
}

// |z|^2 as a real interval; lower endpoint stays exactly 0 for rectangles
// containing the origin (even powers and the zero-preserving addition).
inline Interval norm_sq(const ComplexInterval& a) {
    return powi(a.re, 2) + powi(a.im, 2);
}

inline Interval cabs(const ComplexInterval& a) {
    return sqrt(norm_sq(a));
}

inline ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b) {
    const Interval d = norm_sq(b);
    if (d.lo <= 0.0)
        throw DivisionByZeroInterval("complex divisor rectangle contains zero");
    const ComplexInterval n = a * conj(b);
    return ComplexInterval(n.re / d, n.im / d);
}

// Mixed-mode conveniences so the coefficient formulas read close to their
// algebraic shape (integer literals become degenerate real rectangles).
inline ComplexInterval operator+(double a, const ComplexInterval& b) {
    return ComplexInterval(a) + b;
}
inline ComplexInterval operator+(const ComplexInterval& a, double b) {
    return a + ComplexInterval(b);
}
inline ComplexInterval operator-(double a, const ComplexInterval& b) {
    return ComplexInterval(a) - b;
}
inline ComplexInterval operator-(const ComplexInterval& a, double b) {
    return a - ComplexInterval(b);
}
inline ComplexInterval operator*(double a, const ComplexInterval& b) {
    return ComplexInterval(a) * b;
}
inline ComplexInterval operator*(const ComplexInterval& a, double b) {
    return b * a;
}
inline ComplexInterval operator/(const ComplexInterval& a, double b) {
    return a / ComplexInterval(b);
}
inline ComplexInterval operator*(const Interval& a, const ComplexInterval& b) {
    return ComplexInterval(a) * b;
}
inline ComplexInterval operator*(const ComplexInterval& a, const Interval& b) {
    return b * a;
}
inline ComplexInterval operator/(const ComplexInterval& a, const Interval& b) {
    return a / ComplexInterval(b);
}

}  // namespace ricker

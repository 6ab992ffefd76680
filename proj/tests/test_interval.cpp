#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "ricker/box2.hpp"
#include "ricker/complex_interval.hpp"
#include "ricker/errors.hpp"
#include "ricker/interval.hpp"

using namespace ricker;

namespace {

// Deterministic across platforms: raw mt19937_64 bits scaled by hand. The
// standard distribution objects are implementation-defined and would make
// the fuzz corpus differ between standard libraries.
struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Signed magnitudes spread over many binades, with occasional zeros and
    // near-denormal values so sign and underflow corner cases get exercised.
    double value() {
        const std::uint64_t pick = gen() % 16;
        if (pick == 0) return 0.0;
        if (pick == 1) return uniform(-1e-300, 1e-300);
        const double mag = std::exp(uniform(-30.0, 30.0));
        return (gen() & 1) ? mag : -mag;
    }

    Interval interval() {
        double a = value(), b = value();
        if (a > b) std::swap(a, b);
        if (gen() % 8 == 0) b = a;
        Interval v(a, b);
        if (gen() % 4 == 0) v = hull(v, Interval(0.0));
        return v;
    }

    Interval nonzero_interval() {
        for (;;) {
            const Interval v = interval();
            if (v.lo > 0.0 || v.hi < 0.0) return v;
        }
    }

    double inside(const Interval& v) {
        const double t = unit();
        double p = v.lo + t * (v.hi - v.lo);
        if (p < v.lo) p = v.lo;
        if (p > v.hi) p = v.hi;
        return p;
    }
};

bool contains_ld(const Interval& v, long double x) {
    return static_cast<long double>(v.lo) <= x && x <= static_cast<long double>(v.hi);
}

long double ld_pow(long double x, int n) {
    long double r = 1.0L;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

constexpr int kFuzzSamples = 100000;
constexpr int kNestedPairs = 10000;
constexpr int kComplexSamples = 1000;

}  // namespace

TEST_CASE("interval construction validates endpoints") {
    CHECK(Interval().lo == 0.0);
    CHECK(Interval().hi == 0.0);
    CHECK(Interval(2.0).lo == 2.0);
    CHECK_THROWS_AS(Interval(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(Interval(std::nan(""), 1.0), DomainError);
    CHECK_THROWS_AS(Interval(0.0, std::nan("")), DomainError);
}

TEST_CASE("addition and subtraction enclose every point result") {
    Rng rng(20240801);
    int bad = 0;
    for (int i = 0; i < kFuzzSamples; ++i) {
        const Interval a = rng.interval(), b = rng.interval();
        const long double x = rng.inside(a), y = rng.inside(b);
        if (!contains_ld(a + b, x + y)) ++bad;
        if (!contains_ld(a - b, x - y)) ++bad;
        if (!contains_ld(-a, -x)) ++bad;
    }
    REQUIRE(bad == 0);
}

TEST_CASE("multiplication encloses every point product") {
    Rng rng(20240802);
    int bad = 0;
    for (int i = 0; i < kFuzzSamples; ++i) {
        const Interval a = rng.interval(), b = rng.interval();
        const long double x = rng.inside(a), y = rng.inside(b);
        if (!contains_ld(a * b, x * y)) {
            ++bad;
            CAPTURE(a.lo, a.hi, b.lo, b.hi, x, y);
            CHECK(false);
        }
    }
    REQUIRE(bad == 0);
}

TEST_CASE("division encloses every point quotient") {
    Rng rng(20240803);
    int bad = 0;
    for (int i = 0; i < kFuzzSamples; ++i) {
        const Interval a = rng.interval(), b = rng.nonzero_interval();
        const long double x = rng.inside(a), y = rng.inside(b);
        if (y == 0.0L) continue;
        if (!contains_ld(a / b, x / y)) {
            ++bad;
            CAPTURE(a.lo, a.hi, b.lo, b.hi, x, y);
            CHECK(false);
        }
    }
    REQUIRE(bad == 0);
}

TEST_CASE("absolute value encloses every point magnitude") {
    Rng rng(20240804);
    int bad = 0;
    for (int i = 0; i < kFuzzSamples; ++i) {
        const Interval a = rng.interval();
        const long double x = rng.inside(a);
        if (!contains_ld(abs(a), x < 0.0L ? -x : x)) ++bad;
    }
    REQUIRE(bad == 0);
}

TEST_CASE("square root encloses every point root") {
    Rng rng(20240805);
    int bad = 0;
    for (int i = 0; i < kFuzzSamples; ++i) {
        Interval a = rng.interval();
        a = Interval(a.lo < 0.0 ? 0.0 : a.lo, a.hi < 0.0 ? 0.0 : a.hi);
        const long double x = rng.inside(a);
        if (!contains_ld(sqrt(a), sqrtl(x))) ++bad;
    }
    REQUIRE(bad == 0);
}

TEST_CASE("exponential encloses every point value") {
    Rng rng(20240806);
    int bad = 0;
    for (int i = 0; i < kFuzzSamples; ++i) {
        const double lo = rng.uniform(-700.0, 700.0);
        const Interval a(lo, lo + rng.uniform(0.0, 5.0));
        const long double x = rng.inside(a);
        if (!contains_ld(exp(a), expl(x))) ++bad;
    }
    REQUIRE(bad == 0);
}

TEST_CASE("integer powers enclose every point power") {
    Rng rng(20240807);
    int bad = 0;
    for (int i = 0; i < kFuzzSamples; ++i) {
        const Interval a = rng.interval();
        const int n = static_cast<int>(rng.gen() % 9);
        const long double x = rng.inside(a);
        if (!contains_ld(powi(a, n), ld_pow(x, n))) {
            ++bad;
            CAPTURE(a.lo, a.hi, n, x);
            CHECK(false);
        }
    }
    REQUIRE(bad == 0);
}

TEST_CASE("endpoint min and max enclose point min and max") {
    Rng rng(20240808);
    int bad = 0;
    for (int i = 0; i < kFuzzSamples; ++i) {
        const Interval a = rng.interval(), b = rng.interval();
        const long double x = rng.inside(a), y = rng.inside(b);
        if (!contains_ld(min(a, b), x < y ? x : y)) ++bad;
        if (!contains_ld(max(a, b), x < y ? y : x)) ++bad;
    }
    REQUIRE(bad == 0);
}

TEST_CASE("mixed double operands agree with degenerate intervals") {
    Rng rng(20240809);
    for (int i = 0; i < 1000; ++i) {
        const Interval a = rng.interval();
        const double c = rng.value();
        CHECK(a + c == a + Interval(c));
        CHECK(c + a == Interval(c) + a);
        CHECK(a - c == a - Interval(c));
        CHECK(c - a == Interval(c) - a);
        CHECK(a * c == a * Interval(c));
        CHECK(c * a == Interval(c) * a);
        if (c != 0.0) CHECK(a / c == a / Interval(c));
        if (a.lo > 0.0 || a.hi < 0.0) CHECK(c / a == Interval(c) / a);
    }
}

TEST_CASE("inclusion monotonicity on nested inputs") {
    Rng rng(20240810);
    int bad = 0;
    for (int i = 0; i < kNestedPairs; ++i) {
        const Interval outer = rng.interval();
        const double w = outer.hi - outer.lo;
        const Interval inner(outer.lo + 0.3 * rng.unit() * w,
                             outer.hi - 0.3 * rng.unit() * w);
        const Interval other = rng.interval();
        if (!is_subset(inner, outer)) continue;

        if (!is_subset(inner + other, outer + other)) ++bad;
        if (!is_subset(inner - other, outer - other)) ++bad;
        if (!is_subset(inner * other, outer * other)) ++bad;
        if (!is_subset(abs(inner), abs(outer))) ++bad;
        if (!is_subset(powi(inner, 3), powi(outer, 3))) ++bad;
        if (outer.lo > 0.0 || outer.hi < 0.0)
            if (!is_subset(other / inner, other / outer)) ++bad;
        if (outer.lo >= 0.0)
            if (!is_subset(sqrt(inner), sqrt(outer))) ++bad;
        if (outer.lo > -700.0 && outer.hi < 700.0)
            if (!is_subset(exp(inner), exp(outer))) ++bad;
    }
    REQUIRE(bad == 0);
}

TEST_CASE("domain violations throw") {
    CHECK_THROWS_AS(sqrt(Interval(-1.0, 4.0)), DomainError);
    CHECK_THROWS_AS(powi(Interval(1.0, 2.0), -1), DomainError);
    CHECK_THROWS_AS(Interval(1.0) / Interval(-1.0, 1.0), DivisionByZeroInterval);
    CHECK_THROWS_AS(Interval(1.0) / Interval(0.0, 0.0), DivisionByZeroInterval);
    CHECK_THROWS_AS(Interval(1.0) / 0.0, DivisionByZeroInterval);
}

TEST_CASE("exact zero endpoints survive where the result is exactly zero") {
    // Sums that cancel exactly produce an exact zero, not a padded one.
    const Interval z = Interval(5e-324) + Interval(-5e-324);
    CHECK(z.lo == 0.0);
    CHECK(z.hi == 0.0);

    // A zero corner of a product stays exact when no sign of the true
    // product can cross it.
    const Interval pp = Interval(0.0, 2.0) * Interval(0.0, 3.0);
    CHECK(pp.lo == 0.0);
    CHECK(!std::signbit(pp.lo));
    CHECK(pp.hi >= 6.0);

    const Interval np = Interval(-2.0, 0.0) * Interval(0.0, 3.0);
    CHECK(np.hi == 0.0);
    CHECK(np.lo <= -6.0);

    // Square root and even powers keep the reachable zero exact.
    CHECK(sqrt(Interval(0.0, 4.0)).lo == 0.0);
    CHECK(powi(Interval(-2.0, 3.0), 2).lo == 0.0);
}

TEST_CASE("underflowing products are padded on the reachable side") {
    // 1e-200 * 1e-200 underflows to zero; the upper end must still cover the
    // true positive product.
    const Interval tiny(1e-200, 1e-200);
    const Interval up = tiny * tiny;
    CHECK(up.lo == 0.0);
    CHECK(up.hi > 0.0);

    // The negated product underflows to -0.0; the lower end must cover it
    // and the upper end is an exact zero with canonical sign.
    const Interval down = tiny * Interval(-1e-200, -1e-200);
    CHECK(down.lo < 0.0);
    CHECK(down.hi == 0.0);
    CHECK(!std::signbit(down.hi));
}

TEST_CASE("exponential clamps its certified lower bound at zero") {
    const Interval r = exp(Interval(-800.0, -750.0));
    CHECK(r.lo == 0.0);
    CHECK(r.hi > 0.0);
    CHECK(contains_ld(exp(Interval(0.0)), 1.0L));
    CHECK(exp(Interval(0.0)).lo <= 1.0);
    CHECK(exp(Interval(0.0)).hi >= 1.0);
}

TEST_CASE("even powers of straddling intervals start at zero") {
    const Interval r = powi(Interval(-2.0, 3.0), 2);
    CHECK(r.lo == 0.0);
    CHECK(r.hi >= 9.0);
    const Interval c = powi(Interval(-2.0, 3.0), 3);
    CHECK(c.lo <= -8.0);
    CHECK(c.hi >= 27.0);
    const Interval one = powi(Interval(-2.0, 3.0), 0);
    CHECK(contains_ld(one, 1.0L));
}

TEST_CASE("width and distance helpers are certified upper bounds") {
    Rng rng(20240811);
    int bad = 0;
    for (int i = 0; i < kNestedPairs; ++i) {
        const Interval a = rng.interval(), b = rng.interval();
        const long double w = static_cast<long double>(a.hi) - a.lo;
        if (static_cast<long double>(width_up(a)) < w) ++bad;
        const long double d1 = fabsl(static_cast<long double>(a.lo) - b.lo);
        const long double d2 = fabsl(static_cast<long double>(a.hi) - b.hi);
        if (static_cast<long double>(hausdorff_up(a, b)) < (d1 > d2 ? d1 : d2)) ++bad;
    }
    REQUIRE(bad == 0);
}

TEST_CASE("midpoint stays inside the interval") {
    Rng rng(20240812);
    for (int i = 0; i < 1000; ++i) {
        const Interval a = rng.interval();
        const double m = midpoint(a);
        CHECK(a.lo <= m);
        CHECK(m <= a.hi);
    }
}

TEST_CASE("set operations are consistent") {
    Rng rng(20240813);
    for (int i = 0; i < 1000; ++i) {
        const Interval a = rng.interval(), b = rng.interval();
        CHECK(is_subset(a, hull(a, b)));
        CHECK(is_subset(b, hull(a, b)));
        const auto meet = intersect(a, b);
        CHECK(meet.has_value() == intersects(a, b));
        if (meet) {
            CHECK(is_subset(*meet, a));
            CHECK(is_subset(*meet, b));
        }
    }
    CHECK(intersects(Interval(0.0, 1.0), Interval(1.0, 2.0)));  // shared endpoint
    CHECK(!intersects(Interval(0.0, 1.0), Interval(1.5, 2.0)));
}

TEST_CASE("rounding step helpers move strictly outward") {
    CHECK(step_down(0.0) < 0.0);
    CHECK(step_up(0.0) > 0.0);
    CHECK(step_down(1.0) < 1.0);
    CHECK(step_up(1.0) > 1.0);
    CHECK(step_up(step_down(1.0)) == 1.0);
}

TEST_CASE("complex operations enclose every point result") {
    Rng rng(20240814);
    int bad = 0;
    for (int i = 0; i < kComplexSamples; ++i) {
        const ComplexInterval a{rng.interval(), rng.interval()};
        const ComplexInterval b{rng.interval(), rng.interval()};
        const std::complex<long double> x(rng.inside(a.re), rng.inside(a.im));
        const std::complex<long double> y(rng.inside(b.re), rng.inside(b.im));

        const auto holds = [&](const ComplexInterval& r, std::complex<long double> v) {
            return contains_ld(r.re, v.real()) && contains_ld(r.im, v.imag());
        };
        if (!holds(a + b, x + y)) ++bad;
        if (!holds(a - b, x - y)) ++bad;
        if (!holds(a * b, x * y)) {
            ++bad;
            CAPTURE(a.re.lo, a.re.hi, a.im.lo, a.im.hi, b.re.lo, b.re.hi, b.im.lo, b.im.hi);
            CHECK(false);
        }
        if (!holds(conj(a), std::conj(x))) ++bad;
        if (!contains_ld(norm_sq(a), x.real() * x.real() + x.imag() * x.imag())) ++bad;
        if (!contains_ld(cabs(a), sqrtl(x.real() * x.real() + x.imag() * x.imag()))) ++bad;
        if (norm_sq(b).lo > 0.0 && !holds(a / b, x / y)) {
            ++bad;
            CHECK(false);
        }
    }
    REQUIRE(bad == 0);
}

TEST_CASE("complex boxes containing the origin have exact zero magnitude floor") {
    const ComplexInterval z{Interval(-1.0, 1.0), Interval(-1.0, 1.0)};
    CHECK(norm_sq(z).lo == 0.0);
    CHECK(cabs(z).lo == 0.0);
    const ComplexInterval one{Interval(1.0), Interval(0.0)};
    CHECK_THROWS_AS(one / z, DivisionByZeroInterval);

    const ComplexInterval i = imaginary_unit();
    CHECK(i.re.lo == 0.0);
    CHECK(i.im.lo == 1.0);
    const ComplexInterval sq = i * i;  // lands on -1 with outward padding
    CHECK(contains_ld(sq.re, -1.0L));
    CHECK(contains_ld(sq.im, 0.0L));
}

TEST_CASE("complex mixed operands agree with promoted forms") {
    Rng rng(20240815);
    for (int i = 0; i < 200; ++i) {
        const ComplexInterval a{rng.interval(), rng.interval()};
        const double c = rng.value();
        const Interval ci(c);
        const ComplexInterval cc{ci, Interval(0.0)};
        CHECK((a + c).re == (a + cc).re);
        CHECK((a * c).im == (a * cc).im);
        CHECK((c * a).re == (cc * a).re);
        CHECK((a * ci).re == (a * cc).re);
        CHECK((ci * a).im == (cc * a).im);
    }
}

TEST_CASE("planar boxes compose interval behavior") {
    const Box2 b(Interval(0.0, 1.0), Interval(2.0, 4.0));
    CHECK(contains(b, 0.5, 3.0));
    CHECK(!contains(b, 1.5, 3.0));
    CHECK(is_subset(b, hull(b, Box2(Interval(5.0, 6.0), Interval(0.0, 1.0)))));
    CHECK(intersects(b, Box2(Interval(1.0, 2.0), Interval(4.0, 5.0))));  // corner touch
    CHECK(!intersects(b, Box2(Interval(1.1, 2.0), Interval(4.0, 5.0))));

    // Certified diameter: at least the true diagonal sqrt(1 + 4).
    CHECK(diameter_up(b) >= std::sqrt(5.0));
    const auto [mx, my] = midpoint(b);
    CHECK(contains(b, mx, my));
}

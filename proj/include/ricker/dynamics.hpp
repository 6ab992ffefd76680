#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ricker/box2.hpp"
#include "ricker/errors.hpp"

// The delayed Ricker map F(x, y) = (y, y * exp(alpha - x)) on the closed
// positive quadrant, together with the trapping-square construction used to
// confine its dynamics: iterating t -> tau(t) = alpha * exp(2 alpha - 2 t)
// from 0 produces nested lower/upper slices whose limits bound an invariant
// region for the second iterate.

namespace ricker {

// Validated parameter interval. The dynamics are studied for alpha in (0, 1];
// parameter slices are always much narrower than the full range.
struct RickerParams {
    Interval alpha;

    explicit RickerParams(Interval a) : alpha(a) {
        if (!(a.lo > 0.0) || a.hi > 1.0)
            throw RegimeError("alpha interval must be contained in (0, 1]");
        if (!(width_up(a) < 1.0))
            throw RegimeError("alpha interval too wide");
    }
};

inline std::pair<double, double> ricker_point(double alpha, double x, double y) {
    return {y, y * std::exp(alpha - x)};
}

// One application of F to a box, with a flag recording whether the exponential
// overflowed (the enclosure is still valid, just saturated at infinity).
struct BoxImage {
    Box2 box;
    bool overflow_widened = false;
};

inline BoxImage ricker_box(const RickerParams& p, const Box2& b) {
    const Interval e = exp(p.alpha - b.x);
    const Interval ynew = b.y * e;
    return {Box2(b.y, ynew), !std::isfinite(e.hi) || !std::isfinite(ynew.hi)};
}

// F^k for k in {1, 2, 3} in composed closed form:
//   F^2(x, y) = (y e^(a-x), y e^(2a-x-y))
//   F^3(x, y) = (y e^(2a-x-y), y e^(3a-x-y-y e^(a-x)))
// Because the first component of F is just y, chaining ricker_box loses no
// extra dependency and yields the same widths up to rounding noise; the
// closed forms are kept because each exponent is evaluated as a single sum
// (one outward rounding per factor) and they make the enclosure expressions
// explicit.
inline BoxImage ricker_iterate_box(const RickerParams& p, const Box2& b, int k) {
    const Interval& a = p.alpha;
    switch (k) {
        case 1:
            return ricker_box(p, b);
        case 2: {
            const Interval x2 = b.y * exp(a - b.x);
            const Interval y2 = b.y * exp(a + a - b.x - b.y);
            return {Box2(x2, y2), !std::isfinite(x2.hi) || !std::isfinite(y2.hi)};
        }
        case 3: {
            const Interval ye1 = b.y * exp(a - b.x);
            const Interval x3 = b.y * exp(a + a - b.x - b.y);
            const Interval y3 = b.y * exp(a + a + a - b.x - b.y - ye1);
            return {Box2(x3, y3), !std::isfinite(x3.hi) || !std::isfinite(y3.hi)};
        }
        default:
            throw DomainError("ricker_iterate_box supports k in {1, 2, 3}");
    }
}

inline Interval tau(const RickerParams& p, const Interval& t) {
    return p.alpha * exp(p.alpha + p.alpha - t - t);
}

struct TrappingState {
    Interval h;  // lower slice h_i
    Interval g;  // upper slice g_i
    std::int64_t index = 0;
};

// Iteration of tau stalled: the paired slices kept moving by more than tol
// for max_iter steps. Carries the last state for diagnostics.
struct ConvergenceFailure : RickerError {
    TrappingState last;

    explicit ConvergenceFailure(TrappingState s)
        : RickerError("trapping sequences did not settle within the iteration budget"),
          last(s) {}
};

// Runs h_0 = [0,0], g_i = tau(h_i), h_{i+1} = tau(g_i) until consecutive
// states agree to within tol. Interval iterates of tau do not shrink to
// points (the slices keep a width comparable to the parameter width), so the
// stopping rule compares endpoints of consecutive states, certified upward:
//   max Hausdorff movement of h plus that of g below tol.
// Returns the first state i0 >= 1 whose successor is that close.
inline TrappingState trapping_sequences(const RickerParams& p,
                                        double tol = 1e-9,
                                        std::int64_t max_iter = 1000000,
                                        std::vector<TrappingState>* trace = nullptr) {
    TrappingState cur;
    cur.h = Interval(0.0);
    cur.g = tau(p, cur.h);
    cur.index = 0;
    if (trace) trace->push_back(cur);

    // Advance to state 1 so the comparison below starts at i0 = 1.
    auto advance = [&](const TrappingState& s) {
        TrappingState n;
        n.h = tau(p, s.g);
        n.g = tau(p, n.h);
        n.index = s.index + 1;
        return n;
    };
    cur = advance(cur);
    if (trace) trace->push_back(cur);

    for (std::int64_t i = 1; i < max_iter; ++i) {
        const TrappingState nxt = advance(cur);
        if (trace) trace->push_back(nxt);
        const double move = add_up(hausdorff_up(cur.h, nxt.h), hausdorff_up(cur.g, nxt.g));
        if (move < tol) return cur;
        cur = nxt;
    }
    throw ConvergenceFailure(cur);
}

struct RegionResult {
    Box2 region;           // the square [h.lo, g.hi]^2
    TrappingState limits;  // settled slices and their index i0
};

// The candidate trapping square S = [h_i0.lo, g_i0.hi]^2.
inline RegionResult construct_region(const RickerParams& p,
                                     double tol = 1e-9,
                                     std::int64_t max_iter = 1000000,
                                     std::vector<TrappingState>* trace = nullptr) {
    const TrappingState s = trapping_sequences(p, tol, max_iter, trace);
    const Interval side(s.h.lo, s.g.hi);
    return {Box2(side, side), s};
}

// Checks F(S) subset of S by covering S with an n x n grid of subboxes and
// testing each image enclosure for containment. Returns false as soon as one
// subbox certifiably-or-possibly escapes; true means one-step invariance of
// the square is certified.
inline bool verify_forward_invariance(const RickerParams& p, const Box2& s, int grid_n) {
    if (grid_n < 1) throw DomainError("grid_n must be positive");
    std::vector<double> ex(grid_n + 1), ey(grid_n + 1);
    for (int i = 0; i <= grid_n; ++i) {
        ex[i] = s.x.lo + (static_cast<double>(i) * (s.x.hi - s.x.lo)) / grid_n;
        ey[i] = s.y.lo + (static_cast<double>(i) * (s.y.hi - s.y.lo)) / grid_n;
    }
    ex[0] = s.x.lo;
    ex[grid_n] = s.x.hi;
    ey[0] = s.y.lo;
    ey[grid_n] = s.y.hi;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const Box2 cell(Interval(ex[i], ex[i + 1]), Interval(ey[j], ey[j + 1]));
            const BoxImage img = ricker_box(p, cell);
            if (!is_subset(img.box, s)) return false;
        }
    }
    return true;
}

}  // namespace ricker

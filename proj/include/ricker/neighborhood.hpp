#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "ricker/complex_interval.hpp"
#include "ricker/dynamics.hpp"

// Certified neighborhood of attraction around the positive fixed point, and
// rigorous re-verification of the bifurcation-coefficient inequalities that
// back the uniform radii. The fixed point of F at parameter alpha is (alpha,
// alpha); a radius eps0 valid pointwise yields the cube around the parameter
// interval (shrunk by the slice width) that is absorbed for every parameter
// in the slice.
//
// The coefficient tables below (g_kl, h_kl, the inverse-transform moduli
// h_inv^kl, the remainder moduli r_2^kl, c_1, mu, a) are transcriptions of
// closed-form expressions in alpha and sqrt(4 alpha - 1). Transcription is
// the dominant risk here, so every entry is cross-checked in the tests
// against an independent high-precision point oracle and, where possible,
// against a second route through a different formula.

namespace ricker {

enum class EpsilonSource { Formula, Uniform37, Uniform22 };

struct NeighborhoodResult {
    double epsilon0 = 0.0;       // radius valid for a single parameter value
    double epsilon = 0.0;        // epsilon0 minus the slice width
    EpsilonSource source = EpsilonSource::Formula;
    Box2 center;                 // cube around the fixed-point interval
};

namespace detail {

// The coefficient formulas live on parameters with a complex multiplier pair,
// which requires 4 alpha - 1 > 0; everything here is used at alpha >= 0.5.
inline void require_complex_regime(const Interval& a) {
    if (!(a.lo > 0.25) || a.hi > 1.0)
        throw RegimeError("alpha must lie in (1/4, 1] for coefficient evaluation");
}

inline Interval sqrt_disc(const Interval& a) { return sqrt(4.0 * a - 1.0); }

// Horner evaluation, coefficients given highest degree first. All
// coefficients in this module are integers well below 2^53, hence exact.
inline Interval poly(const Interval& x, std::initializer_list<double> coeffs) {
    auto it = coeffs.begin();
    Interval acc(*it);
    for (++it; it != coeffs.end(); ++it) acc = acc * x + Interval(*it);
    return acc;
}

inline ComplexInterval cpowi(const ComplexInterval& z, int n) {
    ComplexInterval acc(1.0);
    for (int i = 0; i < n; ++i) acc = acc * z;
    return acc;
}

// The coefficient tables are indexed by single digits; reject anything else
// before the switch keys below could alias (for example (0,20) against (2,0)).
inline void require_small_index(int k, int l) {
    if (k < 0 || k > 9 || l < 0 || l > 9)
        throw IndexError("coefficient index out of table range");
}

}  // namespace detail

// Quadratic-and-higher coefficients of the map in eigenbasis coordinates.
inline ComplexInterval eval_gkl(const Interval& alpha, int k, int l) {
    detail::require_small_index(k, l);
    detail::require_complex_regime(alpha);
    const Interval a = alpha;
    const Interval s = detail::sqrt_disc(a);
    const ComplexInterval i = imaginary_unit();
    const ComplexInterval S(s);
    const ComplexInterval A(a);
    using detail::cpowi;
    switch (10 * k + l) {
        case 20: return ComplexInterval(Interval(-0.5)) + 3.0 * i / (2.0 * S);
        case 11: return 2.0 * (A - 1.0) / (-1.0 + 4.0 * A + i * S);
        case 2:  return i * A * (3.0 * i + S) / (S * (i - 2.0 * i * A + S));
        case 30: return -(i * (1.0 + A - i * S)) / (A * S);
        case 21: return (-3.0 * i + 2.0 * i * A + S) / (2.0 * A * S);
        case 12: return 2.0 * (3.0 * i - 2.0 * i * A + S) / (S * cpowi(i + S, 2));
        case 3:  return 4.0 * i * A * (5.0 * i + S) / (S * cpowi(i + S, 3));
        case 40: return 8.0 * (-2.0 + A - 2.0 * i * S) / (S * cpowi(-i + S, 3));
        case 31: return -2.0 * (-2.0 * i + i * A + S) / (A * (-i + 4.0 * i * A + S));
        case 22: return 2.0 * (-2.0 + A) / (A * (-1.0 + 4.0 * A + i * S));
        case 13: return 8.0 * (2.0 - A - i * S) / (S * cpowi(i + S, 3));
        case 4:  return 8.0 * A * (7.0 * i + S) / (S * cpowi(i + S, 4));
        default: throw IndexError("eval_gkl: undefined index pair");
    }
}

// Coefficients of the normalizing coordinate change z -> z + sum h_kl z^k zbar^l.
inline ComplexInterval eval_hkl(const Interval& alpha, int k, int l) {
    detail::require_small_index(k, l);
    detail::require_complex_regime(alpha);
    const Interval a = alpha;
    const Interval s = detail::sqrt_disc(a);
    const ComplexInterval i = imaginary_unit();
    const ComplexInterval S(s);
    const ComplexInterval A(a);
    using detail::cpowi;
    switch (10 * k + l) {
        case 20:
            return 2.0 * (1.0 + i * S - A) / (A * (1.0 - 4.0 * A + i * S));
        case 11:
            return 2.0 * (-1.0 + A) / (A * (-1.0 + 4.0 * A - i * S));
        case 2:
            return 2.0 * A * (3.0 * i + S) / (cpowi(i + S, 2) * (-i + 4.0 * i * A + A * S));
        case 30: {
            const ComplexInterval num =
                16.0 * (-12.0 - 12.0 * i * S +
                        A * (45.0 + 21.0 * i * S + A * (-27.0 + 2.0 * A - 5.0 * i * S)));
            const ComplexInterval den =
                cpowi(1.0 + i * S, 4) * S * (i + S + A * (-2.0 * i + A * (-5.0 * i + S)));
            return num / den;
        }
        case 12: {
            const ComplexInterval num =
                4.0 * i + A * (-4.0 * (5.0 * i + 3.0 * S) +
                               A * (28.0 * i + 18.0 * S +
                                    A * (-31.0 * i - 9.0 * S + A * (9.0 * i + S))));
            const ComplexInterval den =
                ComplexInterval(powi(a, 3)) *
                (-i + S + A * (6.0 * i + A * (-13.0 * i - 15.0 * S + 2.0 * A * (10.0 * i + S))));
            return num / den;
        }
        case 3: {
            const ComplexInterval num =
                2.0 * (5.0 * i + 7.0 * S +
                       A * (-29.0 * i - 14.0 * S + A * (17.0 * i - i * A + 3.0 * S)));
            const ComplexInterval den =
                i + S +
                A * (-2.0 * (7.0 * i + 6.0 * S) +
                     A * (70.0 * i + 46.0 * S +
                          A * (-6.0 * (23.0 * i + 10.0 * S) + A * (73.0 * i - 4.0 * i * A + 13.0 * S))));
            return num / den;
        }
        default:
            throw IndexError("eval_hkl: undefined index pair");
    }
}

// Cubic normal-form coefficient of the map written as w -> mu w + c1 w^2 wbar + ...
inline ComplexInterval eval_c1(const Interval& alpha) {
    detail::require_complex_regime(alpha);
    const Interval a = alpha;
    const Interval s = detail::sqrt_disc(a);
    const ComplexInterval i = imaginary_unit();
    const ComplexInterval S(s);
    const ComplexInterval A(a);
    const ComplexInterval num =
        2.0 * i - 2.0 * S +
        A * (2.0 * (-7.0 * i + 5.0 * S) +
             A * (25.0 * i - 13.0 * S + A * (-25.0 * i + 7.0 * S - A * (-7.0 * i + S))));
    const ComplexInterval den =
        2.0 * ComplexInterval(powi(a, 3)) * S * (-i + S) * (i * A + S);
    return num / den;
}

// The multiplier mu(alpha) = (1 + i sqrt(4 alpha - 1))/2, of modulus sqrt(alpha).
inline ComplexInterval eval_mu(const Interval& alpha) {
    detail::require_complex_regime(alpha);
    return ComplexInterval(Interval(0.5), 0.5 * detail::sqrt_disc(alpha));
}

namespace detail {

// Real closed form of the first Lyapunov quantity a(alpha) = Re(conj(mu)/|mu| c1).
inline Interval eval_a_real(const Interval& alpha) {
    require_complex_regime(alpha);
    const Interval a = alpha;
    const Interval num = poly(a, {1, 1, -10, 4});
    const Interval den = 4.0 * sqrt(powi(a, 3)) * poly(a, {1, 4, -1});
    return num / den;
}

// Closed forms of the summed coefficient moduli used by the radius estimates.
// Each is a quotient of integer polynomials under square roots.
inline Interval g2nd_expr(const Interval& a) {
    return (1.0 - a + sqrt(a * (2.0 + a))) / sqrt(a * (-1.0 + 4.0 * a));
}

inline Interval g3rd_expr(const Interval& a) {
    const Interval d = 4.0 * a - 1.0;
    return sqrt((6.0 + a) / (9.0 * a * d)) + sqrt(poly(a, {1, -2, 2}) / (powi(a, 2) * d));
}

inline Interval g4th_expr(const Interval& a) {
    const Interval num = 4758.0 - 1995.0 * a + 665.0 * sqrt(a * (12.0 + a)) +
                         2660.0 * sqrt(3.0 + powi(a, 2));
    return num / (7980.0 * sqrt(powi(a, 3) * (-1.0 + 4.0 * a)));
}

inline Interval hinv2_expr(const Interval& a) {
    const Interval num = -2.0 * (-1.0 + a) * a + sqrt(powi(a, 3) * (2.0 + a)) +
                         sqrt(powi(a, 5) * (2.0 + a) / poly(a, {1, 4, -1}));
    return num / (2.0 * sqrt(powi(a, 5) * (-1.0 + 4.0 * a)));
}

inline Interval hinv3_expr(const Interval& a) {
    const Interval t1 =
        sqrt(poly(a, {4, -12, 15, 36}) / (powi(a, 5) * poly(a, {4, 7, -2}))) / 6.0;
    const Interval t2 =
        sqrt(poly(a, {4, 4, -21, 0, 75, -40, 6}) /
             (poly(a, {4, 23, 22, -15, 2}) * 4.0 * powi(a, 6)));
    const Interval t3 =
        sqrt(poly(a, {4, 4, -13, 66, -54, 12}) /
             (powi(a, 3) * poly(a, {4, 7, -18, 88, -57, 13, -1}))) / 6.0;
    const Interval t4 =
        sqrt(poly(a, {9, 54, 15, -198, 124, 13, -16, 2}) /
             (powi(a, 6) * (-1.0 + 4.0 * a) * powi(poly(a, {1, 4, -1}), 2))) / 2.0;
    return t1 + t2 + t3 + t4;
}

inline Interval hinv40_expr(const Interval& a) {
    const Interval num = poly(a, {256, 1489, -2238, -13766, 30869, 1356, -211261, 423177,
                                  -143073, -12660, 10874, -1140});
    const Interval den = powi(poly(a, {-4, 1}), 2) * powi(a, 6) *
                         powi(poly(a, {1, 4, -1}), 3) * poly(a, {1, -2, 5, -1});
    return sqrt(num / den) / 24.0;
}

inline Interval hinv31_expr(const Interval& a) {
    const Interval num = poly(a, {361, 2452, 1925, -329, 34528, -12543, -47122, 127014,
                                  -182342, 24851, 155248, -133548, 49026, -9354, 912, -36});
    return sqrt(num / poly(a, {1, -2, 5, -1})) /
           (6.0 * powi(a, 5) * poly(a, {4, 23, 22, -15, 2}));
}

inline Interval hinv22_expr(const Interval& a) {
    const Interval num = poly(a, {361, 2132, 241, -8236, 19871, 12815, -147591, 81080,
                                  259610, -309731, 91297, 19782, -14868, 2240, 4, -16});
    return sqrt(num / poly(a, {1, -2, 5, -1})) /
           (4.0 * powi(a, 5) * poly(a, {4, 23, 22, -15, 2}));
}

inline Interval hinv13_expr(const Interval& a) {
    const Interval num = poly(a, {64, 529, 922, -397, 5142, 10489, -22836, 15361, 39017,
                                  -96139, 84157, -35454, 7728, -840, 36});
    const Interval den = powi(a, 9) * powi(poly(a, {1, 4, -1}), 3) *
                         poly(a, {4, -1, 4, 35, -17, 2});
    return sqrt(num / den) / 6.0;
}

inline Interval hinv04_expr(const Interval& a) {
    const Interval num = poly(a, {25, 100, -145, 441, 318, -1422, 1350, -396, 36});
    const Interval den = powi(a, 6) * powi(poly(a, {1, 4, -1}), 2) *
                         poly(a, {4, -9, 22, -9, 1});
    return sqrt(num / den) / 24.0;
}

inline Interval r2_40_expr(const Interval& a) {
    const Interval num =
        poly(a, {1, -6, 27, 7, -210, 930, -2584, 4692, -5016, 2808, -432});
    const Interval den = powi(a, 4) * powi(poly(a, {1, 4, -1}), 2) *
                         poly(a, {4, -9, 22, -9, 1});
    return sqrt(num / den) / 24.0;
}

inline Interval r2_31_expr(const Interval& a) {
    const Interval num = poly(a, {1, 36, -102, 87, 24, -320, -108, -659, 4056, -3462,
                                  1485, 1635, -810, 90});
    const Interval den = powi(a, 7) * poly(a, {1, 4, 0, 13, 33, -17, 2}) *
                         powi(poly(a, {-4, 1}), 2);
    return sqrt(num / den) / 6.0;
}

inline Interval r2_22_expr(const Interval& a) {
    const Interval num = poly(a, {1, 14, 34, -136, -355, 742, 1184, -2008, -688, 1948,
                                  -1692, 728, 1348, -608, 64});
    const Interval den = powi(a, 9) * (-1.0 + 4.0 * a) * powi(poly(a, {1, 6, 7, -2}), 2);
    return sqrt(num / den) / 4.0;
}

inline Interval r2_13_expr(const Interval& a) {
    const Interval num = poly(a, {1, 16, 59, -48, -156, 1327, -3551, 3246, 2506, -15643,
                                  32742, -32250, 18921, -5973, 918, -54});
    const Interval den = powi(a, 7) * poly(a, {1, 0, 1, 9, -2}) *
                         powi(poly(a, {4, 90, -48, 6}), 2);
    return sqrt(num / den) / 6.0;
}

}  // namespace detail

// Moduli of the inverse coordinate-change coefficients. The second and third
// order values come from the polynomial expressions in h_kl; fourth order has
// dedicated closed forms.
inline ComplexInterval eval_hinv_kl(const Interval& alpha, int k, int l) {
    detail::require_small_index(k, l);
    detail::require_complex_regime(alpha);
    const auto h = [&](int kk, int ll) { return eval_hkl(alpha, kk, ll); };
    const auto as_real = [](const Interval& v) {
        return ComplexInterval(v, Interval(0.0));
    };
    switch (10 * k + l) {
        case 20: return as_real(cabs(h(2, 0)) / 2.0);
        case 11: return as_real(cabs(h(1, 1)));
        case 2:  return as_real(cabs(h(0, 2)) / 2.0);
        case 30: {
            const ComplexInterval v =
                (3.0 * detail::cpowi(h(2, 0), 2) - h(3, 0) + 3.0 * h(1, 1) * conj(h(0, 2))) / 6.0;
            return as_real(cabs(v));
        }
        case 21: {
            const ComplexInterval v = (3.0 * h(1, 1) * h(2, 0) + h(0, 2) * conj(h(0, 2)) +
                                       2.0 * h(1, 1) * conj(h(1, 1))) / 2.0;
            return as_real(cabs(v));
        }
        case 12: {
            const ComplexInterval v =
                (2.0 * detail::cpowi(h(1, 1), 2) - h(1, 2) + h(0, 2) * h(2, 0) +
                 2.0 * h(0, 2) * conj(h(1, 1)) + h(1, 1) * conj(h(2, 0))) / 2.0;
            return as_real(cabs(v));
        }
        case 3: {
            const ComplexInterval v =
                (-h(0, 3) + 3.0 * h(0, 2) * h(1, 1) + 3.0 * h(0, 2) * conj(h(2, 0))) / 6.0;
            return as_real(cabs(v));
        }
        case 40: return as_real(detail::hinv40_expr(alpha));
        case 31: return as_real(detail::hinv31_expr(alpha));
        case 22: return as_real(detail::hinv22_expr(alpha));
        case 13: return as_real(detail::hinv13_expr(alpha));
        case 4:  return as_real(detail::hinv04_expr(alpha));
        default: throw IndexError("eval_hinv_kl: undefined index pair");
    }
}

// Moduli of the fourth-order normal-form remainder coefficients. The source
// table lists the (0,4) entry with the same expression as (4,0).
inline ComplexInterval eval_r2_kl(const Interval& alpha, int k, int l) {
    detail::require_small_index(k, l);
    detail::require_complex_regime(alpha);
    const auto as_real = [](const Interval& v) {
        return ComplexInterval(v, Interval(0.0));
    };
    switch (10 * k + l) {
        case 40: return as_real(detail::r2_40_expr(alpha));
        case 31: return as_real(detail::r2_31_expr(alpha));
        case 22: return as_real(detail::r2_22_expr(alpha));
        case 13: return as_real(detail::r2_13_expr(alpha));
        case 4:  return as_real(detail::r2_40_expr(alpha));
        default: throw IndexError("eval_r2_kl: undefined index pair");
    }
}

inline ComplexInterval eval_a(const Interval& alpha) {
    return ComplexInterval(detail::eval_a_real(alpha), Interval(0.0));
}

// Radius formula valid on [0.5, 1): the minimum of two branches, the second
// of which vanishes as alpha -> 1 (hence the strict upper end).
inline double epsilon_formula(const RickerParams& p) {
    const Interval a = p.alpha;
    if (!(a.lo >= 0.5) || !(a.hi < 1.0))
        throw RegimeError("radius formula requires alpha in [0.5, 1)");
    const Interval d = 4.0 * a - 1.0;
    const Interval b1 = sqrt(d / (2.0 + a)) / 20.0;
    const Interval b2 = 9.0 * d * (1.0 - sqrt(a)) /
                        (20.0 * (1.0 + 2.0 * sqrt(a)) * sqrt(2.0 + a));
    return min(b1, b2).lo;
}

// Largest certified radius applicable to the slice, corrected by the slice
// width so the resulting cube is absorbed for every parameter in the slice.
inline NeighborhoodResult find_attraction_domain(const RickerParams& p) {
    const Interval a = p.alpha;
    if (!(a.lo >= 0.5))
        throw RegimeError("attraction domain construction requires alpha >= 0.5");
    double eps0 = -std::numeric_limits<double>::infinity();
    EpsilonSource source = EpsilonSource::Formula;
    bool found = false;
    if (a.hi < 1.0) {
        eps0 = epsilon_formula(p);
        source = EpsilonSource::Formula;
        found = true;
    }
    if (a.lo >= 0.875 && a.hi <= 1.0) {
        const double cand = step_down(1.0 / 37.0);
        if (!found || cand > eps0) {
            eps0 = cand;
            source = EpsilonSource::Uniform37;
            found = true;
        }
    }
    if (a.lo >= 0.999 && a.hi <= 1.0) {
        const double cand = step_down(1.0 / 22.0);
        if (!found || cand > eps0) {
            eps0 = cand;
            source = EpsilonSource::Uniform22;
            found = true;
        }
    }
    if (!found)
        throw RegimeError("no radius estimate applies to this slice");
    const double eps = step_down(eps0 - width_up(a));
    if (!(eps > 0.0))
        throw SliceTooWideError("slice width reaches the certified radius");
    // Shrink the cube inward so it stays within distance eps0 of the fixed
    // point (alpha, alpha) for every alpha in the slice.
    const double lo = step_up(a.lo - eps);
    const double hi = step_down(a.hi + eps);
    const Interval side(lo, hi);
    NeighborhoodResult r;
    r.epsilon0 = eps0;
    r.epsilon = eps;
    r.source = source;
    r.center = Box2(side, side);
    return r;
}

// Local asymptotic stability of the fixed point. The multiplier modulus is
// sqrt(alpha), and sqrt(alpha) < 1 exactly when alpha < 1, so the comparison
// is done on alpha directly (no rounding involved). At alpha = 1 stability
// still holds by the normal-form argument; the flag reports that case.
inline bool local_stability_check(const Interval& alpha, bool* endpoint_case = nullptr) {
    if (alpha.hi > 1.0)
        throw RegimeError("stability check requires alpha <= 1");
    if (!(alpha.lo > 0.0))
        throw RegimeError("stability check requires alpha > 0");
    if (endpoint_case) *endpoint_case = (alpha.hi == 1.0);
    return true;
}

// ---------------------------------------------------------------------------
// Certification of the named numeric inequalities by adaptive bisection.

enum class CertifyStatus { AllCertified, Failed, Inconclusive };

struct ConstantCheck {
    std::string name;
    double claimed_bound = 0.0;
    Interval certified_enclosure;
    bool verdict = false;   // claim certified on the whole range
    bool refuted = false;   // claim certifiably violated somewhere
};

struct ConstantsCertificate {
    Interval alpha_range;
    std::vector<ConstantCheck> checks;
    std::int64_t subdivision_count = 0;
    CertifyStatus status = CertifyStatus::Inconclusive;
};

namespace detail {

// One inequality to certify over the parameter range. kind selects the
// comparison direction; the a_upper entry has a dedicated certification path.
struct CheckDef {
    std::string name;
    double bound;
    enum Kind { UpperStrict, LowerStrict, UpperNonStrictA } kind;
    std::function<Interval(const Interval&)> expr;
};

inline std::vector<CheckDef> constant_check_table() {
    using K = CheckDef::Kind;
    const auto habs = [](int k, int l) {
        return [k, l](const Interval& a) { return cabs(eval_hkl(a, k, l)); };
    };
    std::vector<CheckDef> defs;
    defs.push_back({"g2nd", 1.01, K::UpperStrict, g2nd_expr});
    defs.push_back({"g3rd", 1.09, K::UpperStrict, g3rd_expr});
    defs.push_back({"g4th", 0.76, K::UpperStrict, g4th_expr});
    defs.push_back({"h2nd", 0.76, K::UpperStrict, [](const Interval& a) {
                        return cabs(eval_hkl(a, 2, 0)) / 2.0 + cabs(eval_hkl(a, 1, 1)) +
                               cabs(eval_hkl(a, 0, 2)) / 2.0;
                    }});
    defs.push_back({"h3rd", 0.52, K::UpperStrict, [](const Interval& a) {
                        return cabs(eval_hkl(a, 3, 0)) / 6.0 + cabs(eval_hkl(a, 1, 2)) / 2.0 +
                               cabs(eval_hkl(a, 0, 3)) / 6.0;
                    }});
    defs.push_back({"hinv2", 0.76, K::UpperStrict, hinv2_expr});
    defs.push_back({"hinv3", 1.06, K::UpperStrict, hinv3_expr});
    defs.push_back({"hinv4", 1.39, K::UpperStrict, [](const Interval& a) {
                        return hinv40_expr(a) + hinv31_expr(a) + hinv22_expr(a) +
                               hinv13_expr(a) + hinv04_expr(a);
                    }});
    defs.push_back({"h20", 1.01, K::UpperStrict, habs(2, 0)});
    defs.push_back({"h11", 0.001, K::UpperStrict, habs(1, 1)});
    defs.push_back({"h02", 0.51, K::UpperStrict, habs(0, 2)});
    defs.push_back({"h30", 0.89, K::UpperStrict, habs(3, 0)});
    defs.push_back({"h12", 0.45, K::UpperStrict, habs(1, 2)});
    defs.push_back({"h03", 0.89, K::UpperStrict, habs(0, 3)});
    // The (0,4) remainder entry repeats the (4,0) expression, as in the
    // source table, so the sum counts it twice.
    defs.push_back({"r2_4th", 1.02, K::UpperStrict, [](const Interval& a) {
                        return r2_40_expr(a) + r2_31_expr(a) + r2_22_expr(a) +
                               r2_13_expr(a) + r2_40_expr(a);
                    }});
    defs.push_back({"a_lower", -1.0, K::LowerStrict, eval_a_real});
    defs.push_back({"a_upper", -0.25, K::UpperNonStrictA, eval_a_real});
    return defs;
}

// a(alpha) + 1/4 factors as (s - 1) Q(s) / D(alpha) with s = sqrt(alpha),
//   Q(s) = s^6 + 2 s^5 + 6 s^4 + 7 s^3 + 6 s^2 - 4 s - 4,
//   D(alpha) = 4 alpha^(3/2) (alpha^2 + 4 alpha - 1).
// For alpha <= 1 the first factor is <= 0, so a <= -1/4 holds wherever Q and
// D are certifiably positive. This avoids the degeneracy of the direct test
// at alpha = 1, where a(1) = -1/4 exactly and no strict enclosure can decide.
inline bool certify_a_upper_quarter(const Interval& a) {
    if (a.hi > 1.0) return false;
    const Interval s = sqrt(a);
    const Interval q = poly(s, {1, 2, 6, 7, 6, -4, -4});
    const Interval d = 4.0 * sqrt(powi(a, 3)) * poly(a, {1, 4, -1});
    return q.lo > 0.0 && d.lo > 0.0;
}

}  // namespace detail

// Verifies every inequality in the table over alpha_range, bisecting
// adaptively where single-shot interval evaluation is too coarse. The range
// must lie within [0.875, 1]; the tightest bounds are stated for [0.999, 1]
// and are expected to fail (refute or stay undecided) on wider ranges.
// Overrides replace the claimed bound of the named checks.
inline ConstantsCertificate certify_constants(
        const Interval& alpha_range, std::int64_t max_subdiv,
        const std::vector<std::pair<std::string, double>>& overrides = {}) {
    if (!(alpha_range.lo >= 0.875) || alpha_range.hi > 1.0)
        throw RegimeError("constant certification accepts ranges within [0.875, 1]");
    if (max_subdiv < 0)
        throw DomainError("max_subdiv must be nonnegative");

    std::vector<detail::CheckDef> defs = detail::constant_check_table();
    for (const auto& o : overrides) {
        bool matched = false;
        for (auto& d : defs) {
            if (d.name == o.first) {
                d.bound = o.second;
                // A changed a_upper claim loses the factored shortcut, which
                // is tied to the exact value -1/4.
                if (d.kind == detail::CheckDef::UpperNonStrictA && o.second != -0.25)
                    d.kind = detail::CheckDef::UpperStrict;
                matched = true;
            }
        }
        if (!matched)
            throw DomainError("unknown check name in override: " + o.first);
    }

    const std::size_t n = defs.size();
    std::vector<bool> refuted(n, false);
    std::vector<bool> unresolved(n, false);
    std::vector<bool> have_enc(n, false);
    std::vector<Interval> enc(n);

    struct Work {
        Interval sub;
        std::uint32_t mask;
        double key;  // widest undecided enclosure seen by the parent
    };
    struct WorkOrder {
        bool operator()(const Work& a, const Work& b) const {
            if (a.key != b.key) return a.key < b.key;  // widest first
            if (a.sub.lo != b.sub.lo) return a.sub.lo > b.sub.lo;
            return a.sub.hi > b.sub.hi;
        }
    };
    std::priority_queue<Work, std::vector<Work>, WorkOrder> queue;
    queue.push({alpha_range, (n >= 32 ? 0xffffffffu : ((1u << n) - 1u)),
                std::numeric_limits<double>::infinity()});

    std::int64_t subdivisions = 0;
    bool budget_exhausted = false;

    while (!queue.empty()) {
        Work w = queue.top();
        queue.pop();
        std::uint32_t undecided = 0;
        double widest = 0.0;
        std::array<bool, 32> have{};
        std::array<bool, 32> decided{};
        std::array<Interval, 32> eval;
        for (std::size_t c = 0; c < n; ++c) {
            if (!(w.mask & (1u << c)) || refuted[c]) continue;
            try {
                eval[c] = defs[c].expr(w.sub);
                have[c] = true;
            } catch (const RickerError&) {
                // Coarse subinterval drove an intermediate term out of its
                // domain (sqrt of a sign-uncertain enclosure, divisor
                // straddling zero); bisection resolves or exhausts the budget.
            }
            if (have[c]) {
                const Interval& e = eval[c];
                switch (defs[c].kind) {
                    case detail::CheckDef::UpperStrict:
                        if (e.hi < defs[c].bound) decided[c] = true;
                        else if (e.lo >= defs[c].bound) { refuted[c] = true; decided[c] = true; }
                        break;
                    case detail::CheckDef::LowerStrict:
                        if (e.lo > defs[c].bound) decided[c] = true;
                        else if (e.hi <= defs[c].bound) { refuted[c] = true; decided[c] = true; }
                        break;
                    case detail::CheckDef::UpperNonStrictA:
                        if (detail::certify_a_upper_quarter(w.sub)) decided[c] = true;
                        else if (e.lo > defs[c].bound) { refuted[c] = true; decided[c] = true; }
                        break;
                }
            } else if (defs[c].kind == detail::CheckDef::UpperNonStrictA &&
                       detail::certify_a_upper_quarter(w.sub)) {
                decided[c] = true;
            }
            if (!decided[c]) {
                undecided |= (1u << c);
                const double ew = have[c] ? width_up(eval[c]) : width_up(w.sub);
                if (ew > widest) widest = ew;
            }
        }
        const double sub_width = width_up(w.sub);
        const bool splittable = w.sub.lo < w.sub.hi &&
                                sub_width > 8.0 * std::numeric_limits<double>::epsilon();
        const bool will_split = undecided != 0 && splittable &&
                                !budget_exhausted && subdivisions < max_subdiv;
        // The reported enclosure is the hull over the final cover only: the
        // pieces where the check was decided plus dead-end pieces. Coarse
        // evaluations that get refined away would inflate it misleadingly.
        for (std::size_t c = 0; c < n; ++c) {
            if (!(w.mask & (1u << c)) || !have[c]) continue;
            if (decided[c] || !will_split) {
                enc[c] = have_enc[c] ? hull(enc[c], eval[c]) : eval[c];
                have_enc[c] = true;
            }
        }
        if (undecided == 0) continue;
        if (!will_split) {
            if (subdivisions >= max_subdiv) budget_exhausted = true;
            for (std::size_t c = 0; c < n; ++c)
                if (undecided & (1u << c)) unresolved[c] = true;
            continue;
        }
        const double m = midpoint(w.sub);
        ++subdivisions;
        queue.push({Interval(w.sub.lo, m), undecided, widest});
        queue.push({Interval(m, w.sub.hi), undecided, widest});
    }

    ConstantsCertificate cert;
    cert.alpha_range = alpha_range;
    cert.subdivision_count = subdivisions;
    bool any_refuted = false;
    bool any_unresolved = false;
    for (std::size_t c = 0; c < n; ++c) {
        ConstantCheck out;
        out.name = defs[c].name;
        out.claimed_bound = defs[c].bound;
        out.certified_enclosure = have_enc[c] ? enc[c] : Interval(0.0);
        out.refuted = refuted[c];
        out.verdict = !refuted[c] && !unresolved[c];
        any_refuted = any_refuted || refuted[c];
        any_unresolved = any_unresolved || (!refuted[c] && unresolved[c]);
        cert.checks.push_back(std::move(out));
    }
    cert.status = any_refuted ? CertifyStatus::Failed
                 : any_unresolved ? CertifyStatus::Inconclusive
                                  : CertifyStatus::AllCertified;
    return cert;
}

}  // namespace ricker

#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ricker/errors.hpp"
#include "ricker/neighborhood.hpp"

using namespace ricker;

namespace {

// Reference coefficient values at exactly representable parameters, frozen
// from a 40-digit decimal recomputation of the same closed forms. Column
// order: the six named coefficient sums (2nd/3rd/4th order of the forward
// change, 2nd/3rd of its Taylor remainder bound), the inverse-change sums of
// order 2/3/4, the six individual second/third order moduli, the remainder
// sum, the normal form coefficient a, then real/imaginary parts of g20, h02,
// c1 and the multiplier mu.
struct OracleRow {
    double alpha;
    std::array<double, 24> v;
};

const OracleRow kRows[] = {
    {0.5,
     {2.2882456112707372, 3.4379184026544528, 3.6217985217613279, 3.7024591736438322, 8.1346913260582963, 3.7024591736438322, 12.567619747700564, 48.375636388142663,
      3.1622776601683793, 1.4142135623730950, 1.4142135623730950, 10.983624174196785, 9.8792712281827752, 8.1867100976046674, 38.522360243283096, -0.35355339059327376,
      -0.50000000000000000, 1.5000000000000000, 0.20000000000000000, -1.4000000000000000, 2.5000000000000000, -3.0000000000000000, 0.50000000000000000, 0.50000000000000000}},
    {0.625,
     {1.7101739901530370, 2.2813367263138405, 2.1281610100440786, 2.1590235527398576, 3.0648751928425487, 2.1590235527398576, 5.3451677792531599, 12.674229835175172,
      2.1166010488516725, 0.61967733539318670, 0.96209138584166931, 4.6167353178852079, 3.3541849139378652, 3.7099610973564889, 10.799976386432164, -0.43226506197673549,
      -0.50000000000000000, 1.2247448713915890, 0.27107438016528926, -0.92311348984225555, 0.99874380165289256, -1.3735226946667502, 0.50000000000000000, 0.61237243569579452}},
    {0.75,
     {1.3767280851877889, 1.6789320969940976, 1.4104570978810485, 1.4201614239630951, 1.4702863842845668, 1.4201614239630951, 2.6578264307741033, 4.8964410482789916,
      1.5634719199411432, 0.27216552697590868, 0.73251987403322958, 2.3753130696178861, 1.4604957488934840, 2.0649179894090630, 3.9628915874776764, -0.37785932251841361,
      -0.50000000000000000, 1.0606601717798213, 0.27642276422764228, -0.67836260308953340, 0.45618789521228546, -0.78535482156175265, 0.50000000000000000, 0.70710678118654752}},
    {0.875,
     {1.1568959549492125, 1.3193681993699624, 1.0076431263310608, 1.0060903808726142, 0.82489930256054611, 1.0060903808726142, 1.4977201252399017, 2.3788173503208154,
      1.2255777479729838, 0.096589057683259037, 0.59342489840572656, 1.3856818447038522, 0.75567460730779030, 1.2966901487360535, 1.7249972223055186, -0.31000842619643485,
      -0.50000000000000000, 0.94868329805051380, 0.26520847573479152, -0.53086493051083661, 0.22902339336281334, -0.51165402865968746, 0.50000000000000000, 0.79056941504209483}},
    {0.9375,
     {1.0724537654719009, 1.1912789627490136, 0.86931805110759586, 0.86400715815175709, 0.64441304125422284, 0.86400715815175709, 1.2276042612345192, 1.7738548865386302,
      1.1024307394814131, 0.041519943688614558, 0.54254368944487196, 1.0953151432094998, 0.57019392152162089, 1.0605813397509746, 1.1938622322241399, -0.27869174744794047,
      -0.50000000000000000, 0.90453403373329087, 0.25776820954431288, -0.47739837149363305, 0.16742239763983575, -0.42640135115176696, 0.50000000000000000, 0.82915619758884996}},
    {0.96875,
     {1.0348987030281540, 1.1363577712885252, 0.81086571105112864, 0.80398792092395586, 0.57435923275899169, 0.80398792092395586, 1.1326058556254141, 1.5512128950044334,
      1.0489533479962070, 0.019329184161887438, 0.52036412552792986, 0.98073965257626376, 0.50003888470932936, 0.96529908984969828, 1.0033864122148243, -0.26400877253808549,
      -0.50000000000000000, 0.88465173692938280, 0.25390111932592623, -0.45421695778723290, 0.14427339315799343, -0.39159119845437314, 0.50000000000000000, 0.84779124789065852}},
    {0.998046875,
     {1.0021088460687596, 1.0895027037931311, 0.76140479215080641, 0.75321308752414339, 0.51793511936125550, 0.75321308752414339, 1.0561041820812178, 1.3764799500211786,
      1.0029374957061661, 0.0011324244253503026, 0.50122383049142004, 0.88768441249993396, 0.44436973102247811, 0.88681711060016470, 0.85744235993895858, -0.25085580389059569,
      -0.50000000000000000, 0.86715524823590899, 0.25024413945559937, -0.43428469800422200, 0.12610485680980628, -0.36265951296727338, 0.50000000000000000, 0.86489703144362798}},
    {1.0,
     {1.0000000000000000, 1.0865253464069413, 0.75827445056450167, 0.75000000000000000, 0.51445164381811484, 0.75000000000000000, 1.0513412182925616, 1.3658224516831347,
      1.0000000000000000, 0.0, 0.50000000000000000, 0.88191710368819686, 0.44095855184409843, 0.88191710368819686, 0.84866779847044570, -0.25000000000000000,
      -0.50000000000000000, 0.86602540378443865, 0.25000000000000000, -0.43301270189221932, 0.12500000000000000, -0.36084391824351610, 0.50000000000000000, 0.86602540378443865}},
};

// The enclosure must contain the reference value up to the rounding of its
// decimal literal, and must be tight: a point input leaves only outward
// rounding noise, many orders below the 1e-10 allowance used here.
void check_encloses(const Interval& v, double want, const char* what) {
    INFO(what << ": [" << v.lo << ", " << v.hi << "] vs " << want);
    const double slack = 4e-16 * std::max(1.0, std::fabs(want));
    CHECK(v.lo - slack <= want);
    CHECK(want <= v.hi + slack);
    CHECK(width_up(v) <= 1e-10 * std::max(1.0, std::fabs(want)));
}

Interval h2nd_sum(const Interval& a) {
    return cabs(eval_hkl(a, 2, 0)) / 2.0 + cabs(eval_hkl(a, 1, 1)) +
           cabs(eval_hkl(a, 0, 2)) / 2.0;
}

Interval h3rd_sum(const Interval& a) {
    return cabs(eval_hkl(a, 3, 0)) / 6.0 + cabs(eval_hkl(a, 1, 2)) / 2.0 +
           cabs(eval_hkl(a, 0, 3)) / 6.0;
}

Interval hinv4_sum(const Interval& a) {
    using namespace ricker::detail;
    return hinv40_expr(a) + hinv31_expr(a) + hinv22_expr(a) + hinv13_expr(a) +
           hinv04_expr(a);
}

Interval r2_sum(const Interval& a) {
    using namespace ricker::detail;
    return r2_40_expr(a) + r2_31_expr(a) + r2_22_expr(a) + r2_13_expr(a) +
           r2_40_expr(a);
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

const ConstantCheck& find_check(const ConstantsCertificate& c, const std::string& name) {
    for (const ConstantCheck& k : c.checks)
        if (k.name == name) return k;
    FAIL("check not found: " << name);
    return c.checks.front();
}

}  // namespace

TEST_CASE("coefficient evaluations match the frozen decimal recomputation") {
    for (const OracleRow& row : kRows) {
        CAPTURE(row.alpha);
        const Interval a(row.alpha);
        check_encloses(detail::g2nd_expr(a), row.v[0], "g2nd");
        check_encloses(detail::g3rd_expr(a), row.v[1], "g3rd");
        check_encloses(detail::g4th_expr(a), row.v[2], "g4th");
        check_encloses(h2nd_sum(a), row.v[3], "h2nd");
        check_encloses(h3rd_sum(a), row.v[4], "h3rd");
        check_encloses(detail::hinv2_expr(a), row.v[5], "hinv2");
        check_encloses(detail::hinv3_expr(a), row.v[6], "hinv3");
        check_encloses(hinv4_sum(a), row.v[7], "hinv4");
        check_encloses(cabs(eval_hkl(a, 2, 0)), row.v[8], "|h20|");
        check_encloses(cabs(eval_hkl(a, 1, 1)), row.v[9], "|h11|");
        check_encloses(cabs(eval_hkl(a, 0, 2)), row.v[10], "|h02|");
        check_encloses(cabs(eval_hkl(a, 3, 0)), row.v[11], "|h30|");
        check_encloses(cabs(eval_hkl(a, 1, 2)), row.v[12], "|h12|");
        check_encloses(cabs(eval_hkl(a, 0, 3)), row.v[13], "|h03|");
        check_encloses(r2_sum(a), row.v[14], "r2");
        check_encloses(detail::eval_a_real(a), row.v[15], "a");
        check_encloses(eval_gkl(a, 2, 0).re, row.v[16], "g20.re");
        check_encloses(eval_gkl(a, 2, 0).im, row.v[17], "g20.im");
        check_encloses(eval_hkl(a, 0, 2).re, row.v[18], "h02.re");
        check_encloses(eval_hkl(a, 0, 2).im, row.v[19], "h02.im");
        check_encloses(eval_c1(a).re, row.v[20], "c1.re");
        check_encloses(eval_c1(a).im, row.v[21], "c1.im");
        check_encloses(eval_mu(a).re, row.v[22], "mu.re");
        check_encloses(eval_mu(a).im, row.v[23], "mu.im");
    }
}

TEST_CASE("public complex wrappers agree with the real routes") {
    const Interval a(0.9375);
    check_encloses(eval_a(a).re, -0.27869174744794047, "a via complex wrapper");
    CHECK(eval_a(a).im == Interval(0.0));
    // |mu|^2 = alpha exactly in the formulas; the enclosure must contain it.
    const Interval m2 = norm_sq(eval_mu(a));
    CHECK(m2.lo <= 0.9375);
    CHECK(0.9375 <= m2.hi);
}

TEST_CASE("coefficient evaluation rejects out-of-regime parameters") {
    CHECK_THROWS_AS(eval_gkl(Interval(0.1, 0.2), 2, 0), RegimeError);
    CHECK_THROWS_AS(eval_hkl(Interval(0.9), 5, 0), IndexError);
    CHECK_THROWS_AS(eval_gkl(Interval(0.9), 1, 0), IndexError);
    CHECK_THROWS_AS(eval_c1(Interval(0.9, 1.5)), RegimeError);
}

TEST_CASE("enclosures shrink with the parameter interval") {
    // Inclusion monotonicity carries over to the assembled formulas.
    const Interval wide(0.9, 0.95);
    const Interval narrow(0.92, 0.93);
    CHECK(is_subset(detail::g2nd_expr(narrow), detail::g2nd_expr(wide)));
    CHECK(is_subset(detail::eval_a_real(narrow), detail::eval_a_real(wide)));
    CHECK(is_subset(cabs(eval_hkl(narrow, 0, 3)), cabs(eval_hkl(wide, 0, 3))));
}

TEST_CASE("radius formula matches frozen point values") {
    const struct {
        double alpha, eps;
    } rows[] = {
        {0.5, 0.031622776601683771},   {0.6, 0.034547086694020936},
        {0.601, 0.034522499610704596}, {0.875, 0.014926650929209249},
        {0.9, 0.012168643028533609},   {0.95, 0.0062980386121278308},
    };
    for (const auto& r : rows) {
        CAPTURE(r.alpha);
        const double e = epsilon_formula(RickerParams{Interval(r.alpha)});
        CHECK(std::fabs(e - r.eps) <= 1e-15);
    }
    CHECK_THROWS_AS(epsilon_formula(RickerParams{Interval(0.49, 0.49)}), RegimeError);
    CHECK_THROWS_AS(epsilon_formula(RickerParams{Interval(0.9, 1.0)}), RegimeError);
}

TEST_CASE("radius over a slice lower-bounds the radius at every point") {
    Rng rng(20240822);
    for (int trial = 0; trial < 20; ++trial) {
        const double lo = rng.uniform(0.5, 0.98);
        const double hi = std::min(0.9999, lo + rng.uniform(0.0, 0.01));
        const double slice_eps = epsilon_formula(RickerParams{Interval(lo, hi)});
        for (int i = 0; i < 10; ++i) {
            const double a = rng.uniform(lo, hi);
            const double point_eps = epsilon_formula(RickerParams{Interval(a)});
            CHECK(slice_eps <= point_eps + 1e-12);
        }
    }
}

TEST_CASE("attraction domain picks the best applicable radius") {
    // Narrow slice below 0.875: only the formula applies.
    const NeighborhoodResult f = find_attraction_domain(RickerParams{Interval(0.6, 0.601)});
    CHECK(f.source == EpsilonSource::Formula);
    CHECK(f.epsilon0 == 0.034424144910958993);
    CHECK(f.epsilon == 0.033424144910958985);
    CHECK(f.center.x.lo == 0.56657585508904107);
    CHECK(f.center.x.hi == 0.63442414491095889);
    CHECK(f.center.x == f.center.y);

    // From 0.875 on the uniform radius 1/37 beats the formula.
    const NeighborhoodResult u37 = find_attraction_domain(RickerParams{Interval(0.875, 0.876)});
    CHECK(u37.source == EpsilonSource::Uniform37);
    CHECK(u37.epsilon0 == step_down(1.0 / 37.0));
    const NeighborhoodResult p9 = find_attraction_domain(RickerParams{Interval(0.9, 0.9)});
    CHECK(p9.source == EpsilonSource::Uniform37);

    // From 0.999 on the uniform radius 1/22 wins, and it is the only choice
    // at the right endpoint where the formula is out of regime.
    const NeighborhoodResult u22 = find_attraction_domain(RickerParams{Interval(0.999, 0.9995)});
    CHECK(u22.source == EpsilonSource::Uniform22);
    CHECK(u22.epsilon0 == step_down(1.0 / 22.0));
    const NeighborhoodResult top = find_attraction_domain(RickerParams{Interval(1.0)});
    CHECK(top.source == EpsilonSource::Uniform22);
    CHECK(top.epsilon > 0.0454);
}

TEST_CASE("attraction cube stays within the radius of every fixed point") {
    Rng rng(20240823);
    for (double lo : {0.6, 0.875, 0.9, 0.999}) {
        const double hi = lo + 1e-4;
        const NeighborhoodResult r = find_attraction_domain(RickerParams{Interval(lo, hi)});
        for (int i = 0; i < 200; ++i) {
            const double a = rng.uniform(lo, hi);
            // Per-axis distance from the fixed point (a, a) to the farthest
            // cube corner; the cube is built so this never exceeds epsilon0.
            const double reach = std::max(std::fabs(r.center.x.lo - a),
                                          std::fabs(r.center.x.hi - a));
            CHECK(reach <= r.epsilon0);
        }
    }
}

TEST_CASE("attraction domain rejects hopeless slices") {
    CHECK_THROWS_AS(find_attraction_domain(RickerParams{Interval(0.5, 0.54)}),
                    SliceTooWideError);
    CHECK_THROWS_AS(find_attraction_domain(RickerParams{Interval(0.875, 0.95)}),
                    SliceTooWideError);
    CHECK_THROWS_AS(find_attraction_domain(RickerParams{Interval(0.4, 0.45)}),
                    RegimeError);
}

TEST_CASE("local stability holds on the whole range with an endpoint flag") {
    bool endpoint = false;
    CHECK(local_stability_check(Interval(0.5, 0.9), &endpoint));
    CHECK(!endpoint);
    CHECK(local_stability_check(Interval(0.999, 1.0), &endpoint));
    CHECK(endpoint);
    CHECK(local_stability_check(Interval(0.3, 0.4)));
    CHECK_THROWS_AS(local_stability_check(Interval(0.9, 1.1)), RegimeError);
    CHECK_THROWS_AS(local_stability_check(Interval(0.0, 0.5)), RegimeError);
}

TEST_CASE("all named bounds certify on the tight range") {
    const ConstantsCertificate c = certify_constants(Interval(0.999, 1.0), 10000);
    CHECK(c.status == CertifyStatus::AllCertified);
    CHECK(c.subdivision_count <= 10000);
    CHECK(c.alpha_range == Interval(0.999, 1.0));
    REQUIRE(c.checks.size() == 17);
    for (const ConstantCheck& k : c.checks) {
        CAPTURE(k.name);
        CHECK(k.verdict);
        CHECK(!k.refuted);
    }
    // Certified enclosures must be consistent with their verdicts: strict
    // upper bounds demand the whole enclosure below the claim, the strict
    // lower bound the reverse.
    CHECK(find_check(c, "g2nd").certified_enclosure.hi < 1.01);
    CHECK(find_check(c, "g4th").certified_enclosure.hi < 0.76);
    CHECK(find_check(c, "h11").certified_enclosure.hi < 0.001);
    CHECK(find_check(c, "h03").certified_enclosure.hi < 0.89);
    CHECK(find_check(c, "a_lower").certified_enclosure.lo > -1.0);
    // The enclosures carry real information, not just "below the bound".
    CHECK(find_check(c, "g2nd").certified_enclosure.lo > 0.99);
    CHECK(find_check(c, "a_upper").certified_enclosure.lo < -0.25);
}

TEST_CASE("a degenerate range at the endpoint certifies in one shot") {
    const ConstantsCertificate c = certify_constants(Interval(1.0, 1.0), 10000);
    CHECK(c.status == CertifyStatus::AllCertified);
    CHECK(c.subdivision_count == 0);
}

TEST_CASE("certification is deterministic") {
    const ConstantsCertificate a = certify_constants(Interval(0.999, 1.0), 10000);
    const ConstantsCertificate b = certify_constants(Interval(0.999, 1.0), 10000);
    REQUIRE(a.checks.size() == b.checks.size());
    CHECK(a.subdivision_count == b.subdivision_count);
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].certified_enclosure == b.checks[i].certified_enclosure);
        CHECK(a.checks[i].verdict == b.checks[i].verdict);
    }
}

TEST_CASE("a tightened claim is refuted with a witness enclosure") {
    const ConstantsCertificate c =
        certify_constants(Interval(0.999, 1.0), 2000, {{"g2nd", 1.0}});
    CHECK(c.status == CertifyStatus::Failed);
    const ConstantCheck& k = find_check(c, "g2nd");
    CHECK(k.refuted);
    CHECK(!k.verdict);
    CHECK(k.claimed_bound == 1.0);
    // Refutation requires a piece whose entire enclosure violates the claim.
    CHECK(k.certified_enclosure.lo >= 1.0);
}

TEST_CASE("certification input validation") {
    CHECK_THROWS_AS(certify_constants(Interval(0.7, 0.8), 100), RegimeError);
    CHECK_THROWS_AS(certify_constants(Interval(0.9, 1.5), 100), RegimeError);
    CHECK_THROWS_AS(certify_constants(Interval(0.999, 1.0), -1), DomainError);
    CHECK_THROWS_AS(certify_constants(Interval(0.999, 1.0), 100, {{"nope", 1.0}}),
                    DomainError);
}

TEST_CASE("with no subdivision budget the wide range stays undecided") {
    const ConstantsCertificate c = certify_constants(Interval(0.999, 1.0), 0);
    CHECK(c.status == CertifyStatus::Inconclusive);
    CHECK(c.subdivision_count == 0);
    bool any_undecided = false;
    for (const ConstantCheck& k : c.checks) {
        CHECK(!k.refuted);  // nothing is certifiably violated, just undecided
        if (!k.verdict) any_undecided = true;
    }
    CHECK(any_undecided);
}

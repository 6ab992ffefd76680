#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ricker/dynamics.hpp"
#include "ricker/graph.hpp"
#include "ricker/json_io.hpp"
#include "ricker/neighborhood.hpp"

// End-to-end proof for one parameter slice, and orchestration over parameter
// ranges. Per slice: build the trapping square, certify an absorbing cube
// around the fixed point, then run the subdivision loop with the third map
// iterate, removing cells that are provably wandering (not on a directed
// cycle) or provably absorbed (the cell or its image inside the cube). An
// empty survivor set proves every orbit converges to the fixed point for all
// parameters in the slice. Each slice emits a machine-checkable certificate.

namespace ricker {

struct ParameterSlice {
    Interval alpha;
    double delta0 = 0.1;  // initial partition diameter
    int iterate_k = 3;    // map iterate used for transitions
};

enum class Verdict { Proved, Inconclusive, ResourceExceeded };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Proved: return "proved";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::ResourceExceeded: return "resource_exceeded";
    }
    return "inconclusive";
}

inline const char* to_string(EpsilonSource s) {
    switch (s) {
        case EpsilonSource::Formula: return "formula";
        case EpsilonSource::Uniform37: return "uniform_1_37";
        case EpsilonSource::Uniform22: return "uniform_1_22";
    }
    return "formula";
}

// Counts recorded after each subdivision iteration. vertex_count and
// edge_count describe the graph restricted to the cells that survived the
// iteration's removals; the removed_* columns say why the others left.
struct IterationRecord {
    int iter = 0;
    double delta = 0.0;
    std::int64_t vertex_count = 0;
    std::int64_t edge_count = 0;
    std::int64_t removed_not_in_cycle = 0;
    std::int64_t removed_absorbed = 0;
};

struct SoundnessRecord {
    int forward_invariance_grid_n = 0;
    bool forward_invariance_holds = false;
    bool epsilon_positive = false;
    bool final_vertex_set_empty = false;
};

struct ResourceLimits {
    int max_iterations = 40;
    std::int64_t memory_cap_bytes = 8LL * 1000 * 1000 * 1000;
    double trap_tol = 1e-9;
    std::int64_t trap_max_iter = 1000000;
    int invariance_grid_n = 64;
};

struct ProofCertificate {
    ParameterSlice slice;
    Box2 region_s;
    std::int64_t i0 = 0;
    double epsilon0 = 0.0;
    double epsilon = 0.0;
    EpsilonSource source = EpsilonSource::Formula;
    Box2 neighborhood_u;
    std::vector<IterationRecord> iterations;
    Verdict verdict = Verdict::Inconclusive;
    SoundnessRecord soundness;
    ResourceLimits limits;  // configuration echo
    std::string note;
    double wall_time_seconds = 0.0;  // reported but never serialized, so
                                     // certificates stay byte-reproducible
};

enum class RemovalReason { NotInCycle, Absorbed };

struct ProveOptions {
    // Survivors of each iteration, for box dumps and containment checks.
    std::function<void(const IterationRecord&, const std::vector<Cell>&)> on_iteration;
    // Every removed cell with its reason, for auditing removal semantics.
    std::function<void(int iter, const Cell&, RemovalReason)> on_removal;
};

namespace detail {

// Crude but conservative translation of the byte budget into the two counts
// that dominate memory: cells (box + coordinates + four quarter images +
// labels) and CSR edges. Deliberately counts sizes, not allocations.
inline std::int64_t cells_budget(std::int64_t cap_bytes) {
    return std::max<std::int64_t>(1, cap_bytes / 224);
}
inline std::int64_t edges_budget(std::int64_t cap_bytes) {
    return std::max<std::int64_t>(1, cap_bytes / 12);
}

// The image enclosure of a cell, as the four images of its quarters. The
// union still contains the true image, but it tracks a sheared image far
// more closely than the single-box enclosure, so both the edge relation and
// the absorption test below get tighter.
inline void quarter_images(const RickerParams& params, const Box2& box, int k,
                           std::vector<Box2>& out) {
    const double mx = midpoint(box.x);
    const double my = midpoint(box.y);
    const Box2 quarters[4] = {
        Box2(Interval(box.x.lo, mx), Interval(box.y.lo, my)),
        Box2(Interval(box.x.lo, mx), Interval(my, box.y.hi)),
        Box2(Interval(mx, box.x.hi), Interval(box.y.lo, my)),
        Box2(Interval(mx, box.x.hi), Interval(my, box.y.hi)),
    };
    for (const Box2& q : quarters)
        out.push_back(ricker_iterate_box(params, q, k).box);
}

}  // namespace detail

inline ProofCertificate prove_slice(const ParameterSlice& slice,
                                    const ResourceLimits& limits = {},
                                    const ProveOptions& opts = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!(slice.delta0 > 0.0))
        throw DomainError("delta0 must be positive");
    if (slice.iterate_k < 1 || slice.iterate_k > 3)
        throw DomainError("iterate_k must be 1, 2 or 3");

    ProofCertificate cert;
    cert.slice = slice;
    cert.limits = limits;

    const RickerParams params(slice.alpha);
    const RegionResult reg =
        construct_region(params, limits.trap_tol, limits.trap_max_iter);
    cert.region_s = reg.region;
    cert.i0 = reg.limits.index;

    const NeighborhoodResult nb = find_attraction_domain(params);
    cert.epsilon0 = nb.epsilon0;
    cert.epsilon = nb.epsilon;
    cert.source = nb.source;
    cert.neighborhood_u = nb.center;
    cert.soundness.epsilon_positive = nb.epsilon > 0.0;
    cert.soundness.forward_invariance_grid_n = limits.invariance_grid_n;
    cert.soundness.forward_invariance_holds =
        verify_forward_invariance(params, reg.region, limits.invariance_grid_n);

    const std::int64_t max_cells = detail::cells_budget(limits.memory_cap_bytes);
    const std::int64_t max_edges = detail::edges_budget(limits.memory_cap_bytes);
    const Box2& u = nb.center;

    try {
        Partition p = make_partition(reg.region, slice.delta0, max_cells);
        for (int iter = 1; iter <= limits.max_iterations; ++iter) {
            std::vector<Box2> images;
            images.reserve(p.cells.size() * 4);
            for (const Cell& c : p.cells)
                detail::quarter_images(params, c.box, slice.iterate_k, images);
            const BoxGraph g = transitions(p, images, max_edges, 4);
            const SccLabeling scc = tarjan_scc(g);

            std::vector<std::uint8_t> keep(p.cells.size(), 0);
            IterationRecord rec;
            rec.iter = iter;
            rec.delta = p.delta;
            for (std::size_t v = 0; v < p.cells.size(); ++v) {
                const bool image_absorbed =
                    is_subset(images[4 * v], u) && is_subset(images[4 * v + 1], u) &&
                    is_subset(images[4 * v + 2], u) && is_subset(images[4 * v + 3], u);
                if (!scc.in_cycle[v]) {
                    ++rec.removed_not_in_cycle;
                    if (opts.on_removal)
                        opts.on_removal(iter, p.cells[v], RemovalReason::NotInCycle);
                } else if (is_subset(p.cells[v].box, u) || image_absorbed) {
                    ++rec.removed_absorbed;
                    if (opts.on_removal)
                        opts.on_removal(iter, p.cells[v], RemovalReason::Absorbed);
                } else {
                    keep[v] = 1;
                }
            }
            std::vector<Cell> survivors;
            survivors.reserve(p.cells.size());
            for (std::size_t v = 0; v < p.cells.size(); ++v)
                if (keep[v]) survivors.push_back(p.cells[v]);
            for (std::size_t v = 0; v < p.cells.size(); ++v) {
                if (!keep[v]) continue;
                for (std::int64_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
                    if (keep[static_cast<std::size_t>(g.targets[static_cast<std::size_t>(e)])])
                        ++rec.edge_count;
            }
            rec.vertex_count = static_cast<std::int64_t>(survivors.size());
            cert.iterations.push_back(rec);
            if (opts.on_iteration) opts.on_iteration(rec, survivors);

            p.cells = std::move(survivors);
            if (p.cells.empty()) {
                cert.soundness.final_vertex_set_empty = true;
                cert.verdict = cert.soundness.epsilon_positive ? Verdict::Proved
                                                               : Verdict::Inconclusive;
                break;
            }
            if (iter == limits.max_iterations) {
                cert.verdict = Verdict::Inconclusive;
                cert.note = "iteration budget exhausted with surviving cells";
                break;
            }
            p = refine(p, max_cells);
        }
    } catch (const ResourceExceededError& e) {
        cert.verdict = Verdict::ResourceExceeded;
        cert.note = e.what();
    }

    cert.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cert;
}

// Default slice widths per parameter regime, with slices clamped at the
// regime boundaries so each slice draws on a single radius estimate.
struct WidthPolicy {
    bool uniform = false;
    double width = 0.0;  // only read when uniform
};

inline std::vector<ParameterSlice> slice_parameters(const Interval& range,
                                                    const WidthPolicy& policy = {},
                                                    double delta0 = 0.1,
                                                    int iterate_k = 3) {
    if (!(range.lo >= 0.5) || range.hi > 1.0)
        throw RegimeError("slicing accepts ranges within [0.5, 1]");
    if (policy.uniform && !(policy.width > 0.0))
        throw DomainError("uniform slice width must be positive");
    static constexpr double kBoundaries[] = {0.875, 0.95, 0.99, 0.999};
    const auto default_width = [](double a) {
        if (a < 0.95) return 1e-3;
        if (a < 0.99) return 1e-4;
        return 1e-5;
    };
    std::vector<ParameterSlice> out;
    double a = range.lo;
    while (a < range.hi) {
        const double w = policy.uniform ? policy.width : default_width(a);
        double b = a + w;
        if (!policy.uniform)
            for (const double c : kBoundaries)
                if (a < c && b > c) b = c;
        if (b > range.hi || range.hi - b < w * 1e-9) b = range.hi;
        if (!(b > a)) b = step_up(a);  // width below 1 ulp of the position
        out.push_back({Interval(a, b), delta0, iterate_k});
        a = b;
        if (out.size() > 2000000)
            throw ResourceExceededError("slice count exceeds a sane bound");
    }
    return out;
}

struct SliceOutcome {
    ParameterSlice slice;
    ProofCertificate certificate;
    std::string certificate_path;  // empty when not persisted
    std::string error;             // nonempty when the slice threw
};

struct RangeReport {
    Interval range;
    int workers = 1;
    Verdict aggregate = Verdict::Inconclusive;
    std::vector<SliceOutcome> slices;
    double wall_time_seconds = 0.0;
    std::string warning;
};

inline Json certificate_to_json(const ProofCertificate& c) {
    Json j;
    j["schema"] = "ricker-proof-certificate-v1";
    j["slice"] = {{"alpha", to_json(c.slice.alpha)},
                  {"delta0", c.slice.delta0},
                  {"iterate_k", c.slice.iterate_k}};
    j["region_s"] = to_json(c.region_s);
    j["i0"] = c.i0;
    j["epsilon0"] = c.epsilon0;
    j["epsilon"] = c.epsilon;
    j["epsilon_source"] = to_string(c.source);
    j["neighborhood_u"] = to_json(c.neighborhood_u);
    Json iters = Json::array();
    for (const IterationRecord& r : c.iterations)
        iters.push_back({{"iter", r.iter},
                         {"delta", r.delta},
                         {"vertex_count", r.vertex_count},
                         {"edge_count", r.edge_count},
                         {"removed_not_in_cycle", r.removed_not_in_cycle},
                         {"removed_absorbed", r.removed_absorbed}});
    j["iterations"] = std::move(iters);
    j["verdict"] = to_string(c.verdict);
    j["soundness"] = {
        {"forward_invariance_grid_n", c.soundness.forward_invariance_grid_n},
        {"forward_invariance_holds", c.soundness.forward_invariance_holds},
        {"epsilon_positive", c.soundness.epsilon_positive},
        {"final_vertex_set_empty", c.soundness.final_vertex_set_empty}};
    j["limits"] = {{"max_iterations", c.limits.max_iterations},
                   {"memory_cap_bytes", c.limits.memory_cap_bytes},
                   {"trap_tol", c.limits.trap_tol},
                   {"trap_max_iter", c.limits.trap_max_iter},
                   {"invariance_grid_n", c.limits.invariance_grid_n}};
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

inline void emit_certificate(const ProofCertificate& cert, const std::string& path) {
    write_text_file(path, canonical_dump(certificate_to_json(cert)));
}

inline std::string certificate_file_name(const ParameterSlice& slice) {
    return "cert_" + format_double(slice.alpha.lo) + "_" +
           format_double(slice.alpha.hi) + ".json";
}

struct RangeOptions {
    double delta0 = 0.1;
    int iterate_k = 3;
    std::string out_dir;  // per-slice certificates persisted here when nonempty
    // Called as each slice finishes, possibly from several threads at once;
    // the callback is responsible for its own locking.
    std::function<void(const SliceOutcome&)> on_slice;
};

inline RangeReport prove_range(const Interval& range, const WidthPolicy& policy,
                               int workers, const ResourceLimits& limits = {},
                               const RangeOptions& opts = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    if (workers < 1) throw DomainError("workers must be at least 1");
    RangeReport report;
    report.range = range;
    report.workers = workers;

    const std::vector<ParameterSlice> slices =
        slice_parameters(range, policy, opts.delta0, opts.iterate_k);
    report.slices.resize(slices.size());
    if (slices.empty()) {
        report.aggregate = Verdict::Proved;
        report.warning = "empty parameter range: vacuously proved, nothing was run";
        return report;
    }
    if (!opts.out_dir.empty())
        std::filesystem::create_directories(opts.out_dir);

    // Work stealing over slice indices. Certificates are deterministic per
    // slice and land in preassigned result slots, so neither worker count nor
    // scheduling order can influence any output.
    std::atomic<std::size_t> next{0};
    const auto run = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= slices.size()) return;
            SliceOutcome& o = report.slices[idx];
            o.slice = slices[idx];
            try {
                o.certificate = prove_slice(slices[idx], limits);
            } catch (const RickerError& e) {
                o.error = e.what();
                o.certificate.slice = slices[idx];
                o.certificate.verdict = Verdict::Inconclusive;
                o.certificate.note = e.what();
            }
            if (!opts.out_dir.empty()) {
                const std::string path =
                    (std::filesystem::path(opts.out_dir) /
                     certificate_file_name(slices[idx]))
                        .string();
                emit_certificate(o.certificate, path);
                o.certificate_path = path;
            }
            if (opts.on_slice) opts.on_slice(o);
        }
    };
    const std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(workers), slices.size());
    if (nthreads <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(run);
        for (std::thread& t : pool) t.join();
    }

    bool all_proved = true;
    for (const SliceOutcome& o : report.slices)
        all_proved = all_proved && o.error.empty() &&
                     o.certificate.verdict == Verdict::Proved;
    report.aggregate = all_proved ? Verdict::Proved : Verdict::Inconclusive;
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

inline Json report_to_json(const RangeReport& r) {
    Json j;
    j["schema"] = "ricker-range-report-v1";
    j["range"] = to_json(r.range);
    j["workers"] = r.workers;
    j["aggregate"] = to_string(r.aggregate);
    Json slices = Json::array();
    for (const SliceOutcome& o : r.slices) {
        Json s;
        s["alpha"] = to_json(o.slice.alpha);
        s["verdict"] = to_string(o.certificate.verdict);
        if (!o.certificate_path.empty()) s["certificate_path"] = o.certificate_path;
        if (!o.error.empty()) s["error"] = o.error;
        slices.push_back(std::move(s));
    }
    j["slices"] = std::move(slices);
    j["wall_time_seconds"] = r.wall_time_seconds;
    if (!r.warning.empty()) j["warning"] = r.warning;
    return j;
}

}  // namespace ricker

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "ricker/box2.hpp"
#include "ricker/errors.hpp"

// Set-oriented machinery: uniform grid partitions of a box, directed graphs
// over-approximating a box-enclosure map on the cells, iterative Tarjan SCC,
// and the two generic subdivision algorithms built on them (enclosing the
// non-wandering set from outside, enclosing a basin of attraction from
// inside). Everything here is deterministic: cells are kept sorted by grid
// coordinate, adjacency lists are emitted in ascending target order, and no
// result depends on scheduling.

namespace ricker {

struct Cell {
    std::int64_t ix = 0;
    std::int64_t iy = 0;
    Box2 box;
};

// A (possibly partial) uniform grid over a region. Cells carry their grid
// coordinates at the current refinement level; refinement bisects cells in
// place, so a level-L cell has coordinates in [0, n0 * 2^L) per axis and
// never straddles a coarser cell boundary.
struct Partition {
    Box2 region;
    std::int64_t nx0 = 1;
    std::int64_t ny0 = 1;
    int level = 0;
    double delta = 0.0;  // nominal diameter bound at this level
    std::vector<Cell> cells;

    std::int64_t nx() const { return nx0 << level; }
    std::int64_t ny() const { return ny0 << level; }
};

namespace detail {

// Checked product used for cell-count budgeting.
inline std::int64_t checked_count(std::int64_t a, std::int64_t b, std::int64_t cap) {
    if (a > 0 && b > cap / a)
        throw ResourceExceededError("cell count exceeds the configured budget");
    return a * b;
}

// Grid column whose ideal span contains x, clamped into range. Callers pad
// the resulting window by one cell per side, which absorbs both rounding in
// this computation and the drift of bisected cell edges from their ideal
// positions.
inline std::int64_t grid_index(double lo, double hi, std::int64_t n, double x) {
    if (!(x > lo)) return 0;
    if (!(x < hi)) return n - 1;
    double t = (x - lo) / (hi - lo);
    auto i = static_cast<std::int64_t>(t * static_cast<double>(n));
    if (i < 0) i = 0;
    if (i >= n) i = n - 1;
    return i;
}

inline std::vector<double> axis_edges(const Interval& side, std::int64_t n) {
    std::vector<double> e(static_cast<std::size_t>(n) + 1);
    const double w = side.hi - side.lo;
    for (std::int64_t i = 1; i < n; ++i)
        e[static_cast<std::size_t>(i)] =
            side.lo + (static_cast<double>(i) * w) / static_cast<double>(n);
    e.front() = side.lo;
    e.back() = side.hi;
    for (std::int64_t i = 0; i < n; ++i)
        if (!(e[static_cast<std::size_t>(i)] <= e[static_cast<std::size_t>(i) + 1]))
            throw DomainError("partition edges not monotone (delta too small for region)");
    return e;
}

inline double max_step_up(const std::vector<double>& e) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
        m = std::max(m, width_up(Interval(e[i], e[i + 1])));
    return m;
}

// Certified bounds on w * w. The residual r = fma(w, w, -p) is the exact
// rounding error of p, so the direction of the needed correction is known
// and exact squares stay unpadded.
inline double sq_up(double w) {
    const double p = w * w;
    const double r = std::fma(w, w, -p);
    return r <= 0.0 ? p : step_up(p);
}
inline double sq_down(double w) {
    const double p = w * w;
    const double r = std::fma(w, w, -p);
    return r >= 0.0 ? p : step_down(p);
}

// Upper bound on a + b via the exact rounding error from the two-sum trick,
// again padding only when the rounded sum lies below the true one.
inline double sum_up(double a, double b) {
    const double s = a + b;
    const double t = s - a;
    const double e = (a - (s - t)) + (b - t);
    return e <= 0.0 ? s : step_up(s);
}

}  // namespace detail

// Uniform grid over region with certified Euclidean cell diameter <= delta.
// The per-axis counts start at ceil(width * sqrt(2) / delta) and are bumped
// in the rare case the certified diameter check still fails by a rounding
// hair.
inline Partition make_partition(const Box2& region, double delta,
                                std::int64_t max_cells =
                                    std::numeric_limits<std::int64_t>::max()) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw DomainError("partition delta must be positive and finite");
    if (!std::isfinite(region.x.lo) || !std::isfinite(region.x.hi) ||
        !std::isfinite(region.y.lo) || !std::isfinite(region.y.hi))
        throw DomainError("partition region must be finite");

    // The per-axis counts are only a starting guess (plain rounding is fine
    // here); the loop below re-checks the certified diameter and bumps them.
    const auto initial_count = [&](const Interval& side) {
        const double w = width_up(side);
        if (w == 0.0) return std::int64_t{1};
        const double q = (w * std::sqrt(2.0)) / delta;
        auto n = static_cast<std::int64_t>(std::ceil(q));
        return n < 1 ? std::int64_t{1} : n;
    };
    std::int64_t nx = initial_count(region.x);
    std::int64_t ny = initial_count(region.y);

    std::vector<double> ex, ey;
    const double delta_sq_lo = detail::sq_down(delta);
    for (int attempt = 0;; ++attempt) {
        if (attempt > 64)
            throw DomainError("partition could not satisfy the diameter bound");
        detail::checked_count(nx, ny, max_cells);
        ex = detail::axis_edges(region.x, nx);
        ey = detail::axis_edges(region.y, ny);
        const double sx = detail::max_step_up(ex);
        const double sy = detail::max_step_up(ey);
        const double diag_sq_hi = detail::sum_up(detail::sq_up(sx), detail::sq_up(sy));
        if (diag_sq_hi <= delta_sq_lo) break;
        if (sx >= sy) ++nx; else ++ny;
    }

    Partition p;
    p.region = region;
    p.nx0 = nx;
    p.ny0 = ny;
    p.level = 0;
    p.delta = delta;
    p.cells.reserve(static_cast<std::size_t>(nx * ny));
    for (std::int64_t ix = 0; ix < nx; ++ix)
        for (std::int64_t iy = 0; iy < ny; ++iy)
            p.cells.push_back({ix, iy,
                               Box2(Interval(ex[static_cast<std::size_t>(ix)],
                                             ex[static_cast<std::size_t>(ix) + 1]),
                                    Interval(ey[static_cast<std::size_t>(iy)],
                                             ey[static_cast<std::size_t>(iy) + 1]))});
    return p;
}

// Bisects every cell into 4 children sharing the parent's edges exactly, so
// the union is preserved and the nominal diameter halves.
inline Partition refine(const Partition& p,
                        std::int64_t max_cells =
                            std::numeric_limits<std::int64_t>::max()) {
    if (p.level >= 48)
        throw ResourceExceededError("refinement level limit reached");
    detail::checked_count(static_cast<std::int64_t>(p.cells.size()), 4, max_cells);
    Partition q;
    q.region = p.region;
    q.nx0 = p.nx0;
    q.ny0 = p.ny0;
    q.level = p.level + 1;
    q.delta = p.delta * 0.5;
    q.cells.reserve(p.cells.size() * 4);
    for (const Cell& c : p.cells) {
        const double mx = midpoint(c.box.x);
        const double my = midpoint(c.box.y);
        const std::int64_t bx = 2 * c.ix;
        const std::int64_t by = 2 * c.iy;
        q.cells.push_back({bx, by, Box2(Interval(c.box.x.lo, mx), Interval(c.box.y.lo, my))});
        q.cells.push_back({bx, by + 1, Box2(Interval(c.box.x.lo, mx), Interval(my, c.box.y.hi))});
        q.cells.push_back({bx + 1, by, Box2(Interval(mx, c.box.x.hi), Interval(c.box.y.lo, my))});
        q.cells.push_back({bx + 1, by + 1, Box2(Interval(mx, c.box.x.hi), Interval(my, c.box.y.hi))});
    }
    std::sort(q.cells.begin(), q.cells.end(), [](const Cell& a, const Cell& b) {
        return a.ix != b.ix ? a.ix < b.ix : a.iy < b.iy;
    });
    return q;
}

// Directed graph on cell indices in CSR form. Vertex i is cells[i] of the
// partition the graph was built from; targets within a row are ascending.
struct BoxGraph {
    std::int64_t n = 0;
    std::vector<std::int64_t> offsets;
    std::vector<std::int32_t> targets;
    std::vector<std::uint8_t> self_loop;
};

using BoxMap = std::function<Box2(const Box2&)>;

// Edge (u, v) whenever one of u's image boxes intersects cells[v] as closed
// sets (shared edges and corners count: boundary orbits must not slip
// through). The image enclosure of a cell may be given as per_cell boxes
// whose union contains the true image; several smaller boxes hug a sheared
// image far better than one bounding box, thinning the edge relation with no
// loss of soundness. Candidate targets come from a padded index-window range
// query, never an all-pairs scan; the exact closed-box intersection test
// then filters the window, so the result is independent of the padding.
inline BoxGraph transitions(const Partition& p, const std::vector<Box2>& images,
                            std::int64_t max_edges =
                                std::numeric_limits<std::int64_t>::max(),
                            int per_cell = 1) {
    const std::int64_t n = static_cast<std::int64_t>(p.cells.size());
    if (per_cell < 1)
        throw DomainError("transitions: per_cell must be at least 1");
    if (images.size() != p.cells.size() * static_cast<std::size_t>(per_cell))
        throw DomainError("transitions: per_cell image boxes per cell required");
    if (n > std::numeric_limits<std::int32_t>::max())
        throw ResourceExceededError("graph too large for 32-bit vertex ids");

    BoxGraph g;
    g.n = n;
    g.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    g.self_loop.assign(static_cast<std::size_t>(n), 0);

    const std::int64_t gx = p.nx();
    const std::int64_t gy = p.ny();
    const auto cell_less = [](const Cell& c, const std::pair<std::int64_t, std::int64_t>& k) {
        return c.ix != k.first ? c.ix < k.first : c.iy < k.second;
    };

    std::vector<std::int32_t> row;
    for (std::int64_t u = 0; u < n; ++u) {
        row.clear();
        for (int s = 0; s < per_cell; ++s) {
            const Box2& b =
                images[static_cast<std::size_t>(u) * static_cast<std::size_t>(per_cell) +
                       static_cast<std::size_t>(s)];
            std::int64_t i0 = detail::grid_index(p.region.x.lo, p.region.x.hi, gx, b.x.lo) - 1;
            std::int64_t i1 = detail::grid_index(p.region.x.lo, p.region.x.hi, gx, b.x.hi) + 1;
            std::int64_t j0 = detail::grid_index(p.region.y.lo, p.region.y.hi, gy, b.y.lo) - 1;
            std::int64_t j1 = detail::grid_index(p.region.y.lo, p.region.y.hi, gy, b.y.hi) + 1;
            i0 = std::max<std::int64_t>(i0, 0);
            j0 = std::max<std::int64_t>(j0, 0);
            i1 = std::min(i1, gx - 1);
            j1 = std::min(j1, gy - 1);
            for (std::int64_t ix = i0; ix <= i1; ++ix) {
                auto it = std::lower_bound(p.cells.begin(), p.cells.end(),
                                           std::make_pair(ix, j0), cell_less);
                for (; it != p.cells.end() && it->ix == ix && it->iy <= j1; ++it) {
                    if (!intersects(b, it->box)) continue;
                    row.push_back(static_cast<std::int32_t>(it - p.cells.begin()));
                }
            }
        }
        if (per_cell > 1) {
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
        }
        for (const std::int32_t v : row) {
            if (static_cast<std::int64_t>(g.targets.size()) >= max_edges)
                throw ResourceExceededError("edge count exceeds the configured budget");
            g.targets.push_back(v);
            if (v == u) g.self_loop[static_cast<std::size_t>(u)] = 1;
        }
        g.offsets[static_cast<std::size_t>(u) + 1] =
            static_cast<std::int64_t>(g.targets.size());
    }
    return g;
}

inline BoxGraph transitions(const Partition& p, const BoxMap& image,
                            std::int64_t max_edges =
                                std::numeric_limits<std::int64_t>::max()) {
    std::vector<Box2> images;
    images.reserve(p.cells.size());
    for (const Cell& c : p.cells) images.push_back(image(c.box));
    return transitions(p, images, max_edges);
}

struct SccLabeling {
    std::vector<std::int32_t> component;
    std::vector<std::uint8_t> in_cycle;
    std::int32_t component_count = 0;
};

// Tarjan's strongly connected components with explicit stacks; recursion
// depth equals graph size in the worst case, which call stacks cannot take
// at the multi-million-vertex scale this is used at.
inline SccLabeling tarjan_scc(const BoxGraph& g) {
    const auto n = static_cast<std::int32_t>(g.n);
    constexpr std::int32_t kUnvisited = -1;
    SccLabeling out;
    out.component.assign(static_cast<std::size_t>(n), kUnvisited);
    out.in_cycle.assign(static_cast<std::size_t>(n), 0);

    std::vector<std::int32_t> index(static_cast<std::size_t>(n), kUnvisited);
    std::vector<std::int32_t> lowlink(static_cast<std::size_t>(n), 0);
    std::vector<std::uint8_t> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> stack;
    std::vector<std::int64_t> comp_size;
    struct Frame {
        std::int32_t v;
        std::int64_t edge;
    };
    std::vector<Frame> work;
    std::int32_t next_index = 0;

    for (std::int32_t root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != kUnvisited) continue;
        index[static_cast<std::size_t>(root)] = lowlink[static_cast<std::size_t>(root)] =
            next_index++;
        on_stack[static_cast<std::size_t>(root)] = 1;
        stack.push_back(root);
        work.push_back({root, g.offsets[static_cast<std::size_t>(root)]});
        while (!work.empty()) {
            Frame& f = work.back();
            const std::int32_t v = f.v;
            bool descended = false;
            while (f.edge < g.offsets[static_cast<std::size_t>(v) + 1]) {
                const std::int32_t w = g.targets[static_cast<std::size_t>(f.edge)];
                ++f.edge;
                if (index[static_cast<std::size_t>(w)] == kUnvisited) {
                    index[static_cast<std::size_t>(w)] =
                        lowlink[static_cast<std::size_t>(w)] = next_index++;
                    on_stack[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                    // f is dead after this push (possible reallocation).
                    work.push_back({w, g.offsets[static_cast<std::size_t>(w)]});
                    descended = true;
                    break;
                }
                if (on_stack[static_cast<std::size_t>(w)])
                    lowlink[static_cast<std::size_t>(v)] =
                        std::min(lowlink[static_cast<std::size_t>(v)],
                                 index[static_cast<std::size_t>(w)]);
            }
            if (descended) continue;
            work.pop_back();
            if (!work.empty())
                lowlink[static_cast<std::size_t>(work.back().v)] =
                    std::min(lowlink[static_cast<std::size_t>(work.back().v)],
                             lowlink[static_cast<std::size_t>(v)]);
            if (lowlink[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                std::int64_t size = 0;
                std::int32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = 0;
                    out.component[static_cast<std::size_t>(w)] = out.component_count;
                    ++size;
                } while (w != v);
                comp_size.push_back(size);
                ++out.component_count;
            }
        }
    }
    for (std::int32_t v = 0; v < n; ++v) {
        const std::int64_t sz =
            comp_size[static_cast<std::size_t>(out.component[static_cast<std::size_t>(v)])];
        out.in_cycle[static_cast<std::size_t>(v)] =
            (sz >= 2 || g.self_loop[static_cast<std::size_t>(v)]) ? 1 : 0;
    }
    return out;
}

// Per-iteration record of the subdivision loops below.
struct SubdivisionStats {
    int iter = 0;
    double delta = 0.0;
    std::int64_t vertices = 0;   // cells entering the iteration
    std::int64_t edges = 0;      // edges of the graph built on them
    std::int64_t removed = 0;    // cells dropped this iteration
    std::int64_t survivors = 0;  // cells kept after removal
};

using StopPredicate = std::function<bool(const SubdivisionStats&)>;

struct NonwanderingResult {
    bool empty_certified = false;
    Partition survivors;
    std::vector<SubdivisionStats> iterations;
};

// Shrinks a cover of the domain towards its non-wandering set: every cell
// not lying on a directed cycle of the transition graph is wandering and may
// be dropped; survivors are bisected and the loop repeats. The survivor
// union contains all non-wandering points at every iteration, so an empty
// survivor set certifies there are none. The stop predicate bounds the loop
// (with recurrence present it would otherwise run forever); the domain is
// assumed forward invariant under the true map, which is the caller's
// responsibility.
inline NonwanderingResult enclose_nonwandering(
        const Box2& domain, const BoxMap& image, double delta0,
        const StopPredicate& stop,
        std::int64_t max_cells = std::numeric_limits<std::int64_t>::max(),
        std::int64_t max_edges = std::numeric_limits<std::int64_t>::max()) {
    NonwanderingResult out;
    Partition p = make_partition(domain, delta0, max_cells);
    for (int iter = 1;; ++iter) {
        const BoxGraph g = transitions(p, image, max_edges);
        const SccLabeling scc = tarjan_scc(g);
        std::vector<Cell> kept;
        kept.reserve(p.cells.size());
        for (std::size_t v = 0; v < p.cells.size(); ++v)
            if (scc.in_cycle[v]) kept.push_back(p.cells[v]);

        SubdivisionStats st;
        st.iter = iter;
        st.delta = p.delta;
        st.vertices = static_cast<std::int64_t>(p.cells.size());
        st.edges = static_cast<std::int64_t>(g.targets.size());
        st.survivors = static_cast<std::int64_t>(kept.size());
        st.removed = st.vertices - st.survivors;
        out.iterations.push_back(st);

        p.cells = std::move(kept);
        if (p.cells.empty()) {
            out.empty_certified = true;
            break;
        }
        if (stop(st)) break;
        p = refine(p, max_cells);
    }
    out.survivors = std::move(p);
    return out;
}

struct BasinCell {
    int level = 0;
    Cell cell;
};

struct BasinResult {
    std::vector<BasinCell> absorbed;  // certified inside the basin
    Partition remaining;              // undecided cells at the final level
    std::vector<SubdivisionStats> iterations;
};

namespace detail {

// Membership index over the absorbed cells, keyed by (level, ix, iy), for
// union-containment queries against boxes that need not be grid aligned.
class AbsorbedIndex {
  public:
    explicit AbsorbedIndex(const Partition& geometry) : geom_(geometry) {}

    void insert(int level, const Cell& c) {
        boxes_[std::make_tuple(level, c.ix, c.iy)] = c.box;
        if (levels_.empty() || levels_.back() != level) levels_.push_back(level);
    }

    // True if some single absorbed cell contains b entirely.
    bool contains_box(const Box2& b) const {
        for (int level : levels_) {
            const std::int64_t nx = geom_.nx0 << level;
            const std::int64_t ny = geom_.ny0 << level;
            const std::int64_t cx =
                grid_index(geom_.region.x.lo, geom_.region.x.hi, nx, midpoint(b.x));
            const std::int64_t cy =
                grid_index(geom_.region.y.lo, geom_.region.y.hi, ny, midpoint(b.y));
            for (std::int64_t ix = std::max<std::int64_t>(0, cx - 1);
                 ix <= std::min(nx - 1, cx + 1); ++ix) {
                for (std::int64_t iy = std::max<std::int64_t>(0, cy - 1);
                     iy <= std::min(ny - 1, cy + 1); ++iy) {
                    const auto it = boxes_.find(std::make_tuple(level, ix, iy));
                    if (it != boxes_.end() && is_subset(b, it->second)) return true;
                }
            }
        }
        return false;
    }

  private:
    const Partition& geom_;
    std::map<std::tuple<int, std::int64_t, std::int64_t>, Box2> boxes_;
    std::vector<int> levels_;  // distinct levels in insertion order
};

// b subset of U union the absorbed cells, decided conservatively: direct
// containment first, else split b and require all quarters covered, down to
// a fixed depth. False negatives only (never claims coverage wrongly).
inline bool covered_by_union(const Box2& b, const Box2& u, const AbsorbedIndex& w,
                             int depth) {
    if (is_subset(b, u)) return true;
    if (w.contains_box(b)) return true;
    if (depth <= 0) return false;
    const double mx = midpoint(b.x);
    const double my = midpoint(b.y);
    const Box2 q1(Interval(b.x.lo, mx), Interval(b.y.lo, my));
    const Box2 q2(Interval(b.x.lo, mx), Interval(my, b.y.hi));
    const Box2 q3(Interval(mx, b.x.hi), Interval(b.y.lo, my));
    const Box2 q4(Interval(mx, b.x.hi), Interval(my, b.y.hi));
    return covered_by_union(q1, u, w, depth - 1) && covered_by_union(q2, u, w, depth - 1) &&
           covered_by_union(q3, u, w, depth - 1) && covered_by_union(q4, u, w, depth - 1);
}

}  // namespace detail

// Grows an inner enclosure of the basin of a set U certified attracting:
// a cell is absorbed when it, or its image, lies inside U together with the
// already absorbed cells. Sweeps repeat until stable ("ready"), then the
// undecided cells are bisected and the process continues until stop fires.
inline BasinResult basin_inner_enclosure(
        const Box2& domain, const BoxMap& image, double delta0, const Box2& u,
        const StopPredicate& stop,
        std::int64_t max_cells = std::numeric_limits<std::int64_t>::max()) {
    constexpr int kCoverDepth = 6;
    BasinResult out;
    Partition p = make_partition(domain, delta0, max_cells);
    detail::AbsorbedIndex absorbed(p);
    std::int64_t absorbed_count = 0;
    for (int iter = 1;; ++iter) {
        std::vector<Box2> images;
        images.reserve(p.cells.size());
        for (const Cell& c : p.cells) images.push_back(image(c.box));

        const std::int64_t before = static_cast<std::int64_t>(p.cells.size());
        bool moved = true;
        while (moved) {
            moved = false;
            std::vector<Cell> undecided;
            std::vector<Box2> undecided_images;
            undecided.reserve(p.cells.size());
            undecided_images.reserve(p.cells.size());
            for (std::size_t v = 0; v < p.cells.size(); ++v) {
                const bool in = detail::covered_by_union(p.cells[v].box, u, absorbed,
                                                         kCoverDepth) ||
                                detail::covered_by_union(images[v], u, absorbed,
                                                         kCoverDepth);
                if (in) {
                    absorbed.insert(p.level, p.cells[v]);
                    out.absorbed.push_back({p.level, p.cells[v]});
                    ++absorbed_count;
                    moved = true;
                } else {
                    undecided.push_back(p.cells[v]);
                    undecided_images.push_back(images[v]);
                }
            }
            p.cells = std::move(undecided);
            images = std::move(undecided_images);
        }

        SubdivisionStats st;
        st.iter = iter;
        st.delta = p.delta;
        st.vertices = before;
        st.edges = 0;
        st.survivors = static_cast<std::int64_t>(p.cells.size());
        st.removed = before - st.survivors;
        out.iterations.push_back(st);

        if (p.cells.empty() || stop(st)) break;
        p = refine(p, max_cells);
    }
    out.remaining = std::move(p);
    return out;
}

}  // namespace ricker

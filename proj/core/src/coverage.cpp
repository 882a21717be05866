#include "vacancy/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vacancy {

namespace {

std::int64_t grid_size(int n, int d) {
    std::int64_t total = 1;
    for (int i = 0; i < d; ++i) {
        total *= n;
        if (total > 100'000'000)
            throw std::invalid_argument("coverage: n^d grid too large");
    }
    return total;
}

void check_resolution(const SoupSample& s, int n) {
    if (n < 1) throw std::invalid_argument("coverage: n must be >= 1");
    if (n > s.level)
        throw std::invalid_argument(
            "coverage: insufficient resolution, soup level is below n");
}

double grain_reach(const Grain& g) {
    return g.kind == GrainKind::Ball ? g.radius : 0.5 * g.radius;
}

// Conservative per-coordinate index range of level-n cells the grain's
// bounding box can meet; exact predicates run inside the range.
struct CellRange {
    int lo[kMaxDim];
    int hi[kMaxDim];
    bool empty = false;
};

CellRange cell_range(const Grain& g, int n) {
    CellRange r;
    const double reach = grain_reach(g);
    for (int i = 0; i < g.dim; ++i) {
        const double a = (g.center[i] - reach) * n;
        const double b = (g.center[i] + reach) * n;
        // Pad one cell on each side so floating rounding of the bounds can
        // never exclude a cell the exact predicate would accept.
        int lo = static_cast<int>(std::floor(a)) - 1;
        int hi = static_cast<int>(std::floor(b)) + 1;
        if (hi < 0 || lo > n - 1) {
            r.empty = true;
            return r;
        }
        r.lo[i] = std::max(lo, 0);
        r.hi[i] = std::min(hi, n - 1);
    }
    return r;
}

LevelBox box_at(int n, int d, const int* idx) {
    LevelBox b;
    b.level = n;
    b.dim = d;
    for (int i = 0; i < d; ++i) b.index[i] = idx[i];
    return b;
}

std::int64_t flat_index(int n, int d, const int* idx) {
    std::int64_t f = 0;
    for (int i = 0; i < d; ++i) f = f * n + idx[i];
    return f;
}

// Visits every index tuple in the range, row-major.
template <class Fn>
void for_each_cell(const CellRange& r, int d, Fn&& fn) {
    if (r.empty) return;
    int idx[kMaxDim];
    for (int i = 0; i < d; ++i) idx[i] = r.lo[i];
    while (true) {
        fn(idx);
        int i = d - 1;
        while (i >= 0 && ++idx[i] > r.hi[i]) {
            idx[i] = r.lo[i];
            --i;
        }
        if (i < 0) break;
    }
}

template <class Pred>
std::vector<LevelBox> unmarked_boxes(const SoupSample& s, int n, Pred&& pred) {
    const int d = s.spec.d;
    const std::int64_t total = grid_size(n, d);
    std::vector<std::uint8_t> marked(static_cast<std::size_t>(total), 0);
    for (const Grain& g : s.grains) {
        for_each_cell(cell_range(g, n), d, [&](const int* idx) {
            auto& slot = marked[static_cast<std::size_t>(flat_index(n, d, idx))];
            if (!slot && pred(g, box_at(n, d, idx))) slot = 1;
        });
    }
    std::vector<LevelBox> out;
    int idx[kMaxDim] = {0};
    for (std::int64_t f = 0; f < total; ++f) {
        if (!marked[static_cast<std::size_t>(f)]) out.push_back(box_at(n, d, idx));
        int i = d - 1;
        while (i >= 0 && ++idx[i] >= n) {
            idx[i] = 0;
            --i;
        }
    }
    return out;
}

template <class Pred>
std::vector<LevelBox> unmarked_boxes_brute(const SoupSample& s, int n,
                                           Pred&& pred) {
    const int d = s.spec.d;
    const std::int64_t total = grid_size(n, d);
    std::vector<LevelBox> out;
    int idx[kMaxDim] = {0};
    for (std::int64_t f = 0; f < total; ++f) {
        const LevelBox b = box_at(n, d, idx);
        bool hit = false;
        for (const Grain& g : s.grains) {
            if (pred(g, b)) {
                hit = true;
                break;
            }
        }
        if (!hit) out.push_back(b);
        int i = d - 1;
        while (i >= 0 && ++idx[i] >= n) {
            idx[i] = 0;
            --i;
        }
    }
    return out;
}

} // namespace

std::vector<LevelBox> untouched_boxes(const SoupSample& s, int n) {
    check_resolution(s, n);
    return unmarked_boxes(s, n, [](const Grain& g, const LevelBox& b) {
        return grain_intersects(g, b);
    });
}

std::vector<LevelBox> single_uncovered_boxes(const SoupSample& s, int n) {
    check_resolution(s, n);
    return unmarked_boxes(s, n, [](const Grain& g, const LevelBox& b) {
        return grain_contains(g, b);
    });
}

std::vector<LevelBox> untouched_boxes_brute(const SoupSample& s, int n) {
    check_resolution(s, n);
    return unmarked_boxes_brute(s, n, [](const Grain& g, const LevelBox& b) {
        return grain_intersects(g, b);
    });
}

std::vector<LevelBox> single_uncovered_boxes_brute(const SoupSample& s, int n) {
    check_resolution(s, n);
    return unmarked_boxes_brute(s, n, [](const Grain& g, const LevelBox& b) {
        return grain_contains(g, b);
    });
}

namespace {

enum class CellStatus { Covered, Owned, Unknown };

struct CoverSearch {
    const SoupSample* soup = nullptr;
    int n = 0;
    int depth_cap = 0;
    const int* box_index = nullptr;

    bool point_vacant(const Coords& p, const std::vector<std::int32_t>& active) const {
        for (const std::int32_t gi : active) {
            if (point_in_grain(soup->grains[static_cast<std::size_t>(gi)], p))
                return false;
        }
        return true;
    }

    // Lexicographically smallest level-n box containing q equals this box?
    bool owns_corner(const Coords& q) const {
        const int d = soup->spec.d;
        for (int i = 0; i < d; ++i) {
            int own = static_cast<int>(std::ceil(q[i] * n)) - 1;
            own = std::clamp(own, 0, n - 1);
            if (own != box_index[i]) return false;
        }
        return true;
    }

    CellStatus classify(const Cube& cell, const std::vector<std::int32_t>& active,
                        int depth) const {
        if (active.empty()) return CellStatus::Owned; // wholly vacant cell

        for (const std::int32_t gi : active) {
            if (grain_contains_cube(soup->grains[static_cast<std::size_t>(gi)], cell))
                return CellStatus::Covered;
        }

        Coords center{};
        for (int i = 0; i < cell.dim; ++i) center[i] = cell.center(i);
        if (point_vacant(center, active)) return CellStatus::Owned;

        if (depth >= depth_cap) {
            // Last chance: corners may certify vacancy, but only corners this
            // box owns under the boundary rule.
            const int d = cell.dim;
            for (unsigned mask = 0; mask < (1u << d); ++mask) {
                Coords q{};
                for (int i = 0; i < d; ++i)
                    q[i] = (mask >> i) & 1u ? cell.hi(i) : cell.lo[i];
                if (point_vacant(q, active) && owns_corner(q))
                    return CellStatus::Owned;
            }
            return CellStatus::Unknown;
        }

        CellStatus combined = CellStatus::Covered;
        std::vector<std::int32_t> child_active;
        child_active.reserve(active.size());
        for (const Cube& child : subdivide(cell)) {
            child_active.clear();
            for (const std::int32_t gi : active) {
                if (grain_intersects_cube(soup->grains[static_cast<std::size_t>(gi)],
                                          child))
                    child_active.push_back(gi);
            }
            const CellStatus st = classify(child, child_active, depth + 1);
            if (st == CellStatus::Owned) return CellStatus::Owned;
            if (st == CellStatus::Unknown) combined = CellStatus::Unknown;
        }
        return combined;
    }
};

} // namespace

std::vector<BoxVerdict> covering_classification(const SoupSample& s, int n,
                                                int depth_cap) {
    check_resolution(s, n);
    if (depth_cap < 0)
        throw std::invalid_argument("covering_classification: depth_cap must be >= 0");
    const int d = s.spec.d;
    const std::int64_t total = grid_size(n, d);

    // Bucket grains by the level-n cells they meet.
    std::vector<std::vector<std::int32_t>> buckets(static_cast<std::size_t>(total));
    for (std::size_t gi = 0; gi < s.grains.size(); ++gi) {
        const Grain& g = s.grains[gi];
        for_each_cell(cell_range(g, n), d, [&](const int* idx) {
            if (grain_intersects(g, box_at(n, d, idx)))
                buckets[static_cast<std::size_t>(flat_index(n, d, idx))].push_back(
                    static_cast<std::int32_t>(gi));
        });
    }

    std::vector<BoxVerdict> verdicts(static_cast<std::size_t>(total));
    int idx[kMaxDim] = {0};
    for (std::int64_t f = 0; f < total; ++f) {
        CoverSearch search{&s, n, depth_cap, idx};
        const Cube cell = cube_of(box_at(n, d, idx));
        const CellStatus st =
            search.classify(cell, buckets[static_cast<std::size_t>(f)], 0);
        verdicts[static_cast<std::size_t>(f)] =
            st == CellStatus::Owned
                ? BoxVerdict::Owned
                : (st == CellStatus::Covered ? BoxVerdict::Covered
                                             : BoxVerdict::Undetermined);
        int i = d - 1;
        while (i >= 0 && ++idx[i] >= n) {
            idx[i] = 0;
            --i;
        }
    }
    return verdicts;
}

CoveringBounds covering_number_bounds(const SoupSample& s, int n, int depth_cap) {
    CoveringBounds bounds;
    for (const BoxVerdict v : covering_classification(s, n, depth_cap)) {
        if (v == BoxVerdict::Owned) {
            ++bounds.lo;
            ++bounds.hi;
        } else if (v == BoxVerdict::Undetermined) {
            ++bounds.hi;
            ++bounds.undetermined;
        }
    }
    return bounds;
}

CoverageReport coverage_report(const SoupSample& s, int n, int depth_cap) {
    CoverageReport report;
    report.level = n;
    report.depth_cap = depth_cap;
    report.untouched_count =
        static_cast<std::int64_t>(untouched_boxes(s, n).size());
    report.single_uncovered_count =
        static_cast<std::int64_t>(single_uncovered_boxes(s, n).size());
    const CoveringBounds b = covering_number_bounds(s, n, depth_cap);
    report.covering_lo = b.lo;
    report.covering_hi = b.hi;
    report.undetermined_cells = b.undetermined;
    return report;
}

} // namespace vacancy

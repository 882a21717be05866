#pragma once

#include <cstdint>
#include <vector>

#include "vacancy/soup.hpp"

namespace vacancy {

/// Per-resolution statistics of one realized soup.
struct CoverageReport {
    int level = 1;
    std::int64_t untouched_count = 0;        // |m_n|
    std::int64_t single_uncovered_count = 0; // |M_n|
    std::int64_t covering_lo = 0;
    std::int64_t covering_hi = 0;
    std::int64_t undetermined_cells = 0;
    int depth_cap = 0;
};

struct CoveringBounds {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t undetermined = 0;
};

/// Level-n boxes meeting no grain. Requires n <= s.level (the soup must
/// already contain every grain with radius >= 1/n). Spatial-hash path.
std::vector<LevelBox> untouched_boxes(const SoupSample& s, int n);

/// Level-n boxes contained in no single grain.
std::vector<LevelBox> single_uncovered_boxes(const SoupSample& s, int n);

/// All-pairs reference implementations, kept as test oracles.
std::vector<LevelBox> untouched_boxes_brute(const SoupSample& s, int n);
std::vector<LevelBox> single_uncovered_boxes_brute(const SoupSample& s, int n);

enum class BoxVerdict {
    Covered,      // every point certified inside some single grain
    Owned,        // a certified vacant point owned by this box
    Undetermined, // depth cap hit with neither certificate
};

/// Per-box verdicts in row-major index order, by recursive subdivision at
/// most depth_cap levels beyond the box itself:
///   - a cell inside a single grain is covered;
///   - a vacant cell center (always interior to the box) certifies the box;
///   - at the depth cap, vacant cell corners certify the box they are owned
///     by, where a point on a shared box boundary is owned by the
///     lexicographically smallest containing box;
///   - boxes with neither certificate are undetermined, never silently
///     resolved.
std::vector<BoxVerdict> covering_classification(const SoupSample& s, int n,
                                                int depth_cap);

/// Certified two-sided bounds on the covering number L_n (the number of
/// level-n boxes owning a point of the vacant set under the boundary rule):
/// lo counts Owned, hi counts Owned + Undetermined, so lo <= L_n <= hi.
CoveringBounds covering_number_bounds(const SoupSample& s, int n, int depth_cap);

/// Runs all three statistics and assembles the report.
CoverageReport coverage_report(const SoupSample& s, int n, int depth_cap);

} // namespace vacancy

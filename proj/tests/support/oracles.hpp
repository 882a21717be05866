// Test-only oracles, deliberately independent of the library's numerics:
// the quadrature here is adaptive Simpson (the library uses Gauss-Kronrod),
// and the d = 1 covering oracle works on interval endpoints instead of
// witness points.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "vacancy/soup.hpp"

namespace oracle {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm,
                    double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm,
                   double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_step(f, a, m, fa, flm, fm);
    const double right = simpson_step(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature, absolute tolerance. The tolerance halves on
/// each split, so it must stay above the rounding noise of the integrand
/// sums or the recursion degenerates; 1e-11 leaves ample margin for the
/// O(1..100) integrals checked here.
template <class F>
double integrate(const F& f, double a, double b, double eps = 1e-11,
                 int max_depth = 40) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = detail::simpson_step(f, a, b, fa, fm, fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, eps, max_depth);
}

/// Integrates f(r) dr over [r_lo, r_hi] with Simpson running in t = log r,
/// which flattens the r^{-d-1} dynamic range of the radial integrands.
template <class F>
double integrate_radial(const F& f, double r_lo, double r_hi,
                        double eps = 1e-11) {
    return integrate([&](double t) { const double r = std::exp(t);
                                     return f(r) * r; },
                     std::log(r_lo), std::log(r_hi), eps);
}

/// Exact covering number for d = 1 soups: the vacant set inside [0,1] is the
/// complement of a union of open intervals, and box j owns the vacant points
/// in (j/n, (j+1)/n] (box 0 additionally owns 0). Returns the number of
/// owner boxes.
inline std::int64_t covering_number_d1(const vacancy::SoupSample& s, int n) {
    struct Interval {
        double lo, hi;
    };
    std::vector<Interval> open;
    open.reserve(s.grains.size());
    for (const vacancy::Grain& g : s.grains) {
        const double half =
            g.kind == vacancy::GrainKind::Ball ? g.radius : 0.5 * g.radius;
        open.push_back({g.center[0] - half, g.center[0] + half});
    }
    std::sort(open.begin(), open.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

    // Merge on strict overlap only: open intervals touching at one point
    // leave that point vacant.
    std::vector<Interval> merged;
    for (const Interval& iv : open) {
        if (!merged.empty() && iv.lo < merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
            merged.push_back(iv);
    }

    // Closed vacant pieces inside [0,1] (possibly degenerate points). The
    // merged intervals are disjoint or touching; a touching point stays
    // vacant because the grains are open.
    std::vector<Interval> vacant;
    double frontier = 0.0; // next not-yet-covered coordinate, unclamped
    bool tail_covered = false;
    for (const Interval& iv : merged) {
        if (iv.hi <= 0.0) continue; // covers nothing in [0,1]
        if (iv.lo >= 1.0) break;
        const double a = frontier;
        const double b = std::min(iv.lo, 1.0);
        if (a <= b) vacant.push_back({a, b});
        frontier = std::max(frontier, iv.hi);
        if (frontier > 1.0) {
            tail_covered = true;
            break;
        }
    }
    if (!tail_covered && frontier <= 1.0) vacant.push_back({frontier, 1.0});

    auto owner = [n](double x) {
        int j = static_cast<int>(std::ceil(x * n)) - 1;
        return std::clamp(j, 0, n - 1);
    };
    std::vector<std::uint8_t> owned(static_cast<std::size_t>(n), 0);
    for (const Interval& piece : vacant) {
        const int first = owner(piece.lo);
        const int last = owner(piece.hi);
        for (int j = first; j <= last; ++j) owned[static_cast<std::size_t>(j)] = 1;
    }
    std::int64_t count = 0;
    for (const std::uint8_t b : owned) count += b;
    return count;
}

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
    double stderr_ = 0.0;
};

inline MeanSd mean_sd(const std::vector<double>& xs) {
    const double r = static_cast<double>(xs.size());
    double sum = 0.0;
    for (const double x : xs) sum += x;
    const double mean = sum / r;
    double ss = 0.0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (r - 1.0));
    return {mean, sd, sd / std::sqrt(r)};
}

} // namespace oracle

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace vacancy::quad {

/// Gauss 7 / Kronrod 15 pair on [a, b]. Returns the K15 estimate, writes
/// |K15 - G7| to err.
template <class Func>
double gk15(const Func& f, double a, double b, double& err) {
    // Kronrod abscissae (positive half) and the K15/G7 weights.
    static constexpr double node[8] = {
        0.000000000000000, 0.405845151377397, 0.741531185599394,
        0.949107912342759, 0.207784955007898, 0.586087235467691,
        0.864864423359769, 0.991455371120813};
    static constexpr double wg[4] = {
        0.417959183673469, 0.381830050505119, 0.279705391489277,
        0.129484966168870};
    static constexpr double wk[8] = {
        0.209482141084728, 0.190350578064785, 0.140653259715525,
        0.063092092629979, 0.204432940075298, 0.169004726639267,
        0.104790010322250, 0.022935322010529};

    const double mid = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    const double f0 = f(mid);
    double g7 = wg[0] * f0;
    double k15 = wk[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * node[i];
        const double fi = f(mid + dx) + f(mid - dx);
        k15 += wk[i] * fi;
        if (i < 4) g7 += wg[i] * fi;
    }
    g7 *= h;
    k15 *= h;
    err = std::abs(k15 - g7);
    return k15;
}

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_intervals = 20000;
};

/// Adaptive bisection built on the G7K15 pair. Throws std::runtime_error if
/// the interval budget runs out before the tolerance is met.
template <class Func>
double integrate(const Func& f, double a, double b, Options opts = {}) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    if (a == b) return 0.0;

    struct Segment {
        double a, b, value, err;
    };
    double err0 = 0.0;
    const double v0 = gk15(f, a, b, err0);
    std::vector<Segment> work{{a, b, v0, err0}};
    double total = v0;
    double total_err = err0;
    int used = 1;

    auto tolerance = [&](double val) {
        return std::max(opts.abs_tol, opts.rel_tol * std::abs(val));
    };

    while (total_err > tolerance(total)) {
        // Split the segment with the largest error estimate.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < work.size(); ++i)
            if (work[i].err > work[worst].err) worst = i;
        const Segment seg = work[worst];
        if (used + 1 > opts.max_intervals)
            throw std::runtime_error("integrate: interval budget exhausted");
        const double mid = 0.5 * (seg.a + seg.b);
        double el = 0.0, er = 0.0;
        const double vl = gk15(f, seg.a, mid, el);
        const double vr = gk15(f, mid, seg.b, er);
        total += vl + vr - seg.value;
        total_err += el + er - seg.err;
        work[worst] = {seg.a, mid, vl, el};
        work.push_back({mid, seg.b, vr, er});
        ++used;
        if (seg.b - seg.a <= std::abs(mid) * 1e-15)
            throw std::runtime_error("integrate: interval collapsed below resolution");
    }
    return total;
}

} // namespace vacancy::quad

#include "vacancy/grains.hpp"

#include <cmath>

namespace vacancy {

namespace {

void check_dims(const Grain& g, int dim) {
    if (g.dim != dim)
        throw std::invalid_argument("grain/box dimension mismatch");
    if (g.dim < 1 || g.dim > kMaxDim)
        throw std::invalid_argument("grain dimension out of range");
}

Grain make_grain(GrainKind kind, std::vector<double>&& center, double radius) {
    if (center.empty() || center.size() > static_cast<std::size_t>(kMaxDim))
        throw std::invalid_argument("grain center must have 1..kMaxDim coordinates");
    if (!(radius > 0.0) || !(radius <= 1.0))
        throw std::invalid_argument("grain radius must lie in (0, 1]");
    Grain g;
    g.kind = kind;
    g.dim = static_cast<int>(center.size());
    g.radius = radius;
    for (int i = 0; i < g.dim; ++i) g.center[i] = center[i];
    return g;
}

} // namespace

Grain make_ball(std::vector<double> center, double radius) {
    return make_grain(GrainKind::Ball, std::move(center), radius);
}

Grain make_box(std::vector<double> center, double radius) {
    return make_grain(GrainKind::Box, std::move(center), radius);
}

LevelBox make_level_box(int level, std::vector<std::int32_t> index) {
    if (level < 1)
        throw std::invalid_argument("level box level must be >= 1");
    if (index.empty() || index.size() > static_cast<std::size_t>(kMaxDim))
        throw std::invalid_argument("level box index must have 1..kMaxDim coordinates");
    LevelBox b;
    b.level = level;
    b.dim = static_cast<int>(index.size());
    for (int i = 0; i < b.dim; ++i) {
        if (index[i] < 0 || index[i] >= level)
            throw std::invalid_argument("level box index out of {0..n-1}");
        b.index[i] = index[i];
    }
    return b;
}

Cube cube_of(const LevelBox& b) {
    Cube c;
    c.dim = b.dim;
    c.side = 1.0 / b.level;
    for (int i = 0; i < b.dim; ++i) c.lo[i] = b.lo(i);
    return c;
}

Window Window::unit(int d) {
    if (d < 1 || d > kMaxDim)
        throw std::invalid_argument("window dimension out of range");
    Window w;
    w.dim = d;
    for (int i = 0; i < d; ++i) {
        w.lo[i] = 0.0;
        w.hi[i] = 1.0;
    }
    return w;
}

double Window::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= hi[i] - lo[i];
    return v;
}

namespace {

// Open grain vs closed interval product [lo_i, hi_i].
bool intersects_intervals(const Grain& g, const double* lo, const double* hi) {
    if (g.kind == GrainKind::Box) {
        const double h = 0.5 * g.radius;
        for (int i = 0; i < g.dim; ++i) {
            if (!(g.center[i] - h < hi[i] && g.center[i] + h > lo[i])) return false;
        }
        return true;
    }
    double dist2 = 0.0;
    for (int i = 0; i < g.dim; ++i) {
        double d = 0.0;
        if (g.center[i] < lo[i]) d = lo[i] - g.center[i];
        else if (g.center[i] > hi[i]) d = g.center[i] - hi[i];
        dist2 += d * d;
    }
    return dist2 < g.radius * g.radius;
}

bool contains_intervals(const Grain& g, const double* lo, const double* hi) {
    if (g.kind == GrainKind::Box) {
        const double h = 0.5 * g.radius;
        for (int i = 0; i < g.dim; ++i) {
            if (!(g.center[i] - h < lo[i] && hi[i] < g.center[i] + h)) return false;
        }
        return true;
    }
    // Farthest corner of the cube must be strictly inside the ball.
    double far2 = 0.0;
    for (int i = 0; i < g.dim; ++i) {
        const double d = std::max(g.center[i] - lo[i], hi[i] - g.center[i]);
        far2 += d * d;
    }
    return far2 < g.radius * g.radius;
}

} // namespace

bool grain_intersects(const Grain& g, const LevelBox& b) {
    check_dims(g, b.dim);
    double lo[kMaxDim], hi[kMaxDim];
    for (int i = 0; i < b.dim; ++i) {
        lo[i] = b.lo(i);
        hi[i] = b.hi(i);
    }
    return intersects_intervals(g, lo, hi);
}

bool grain_contains(const Grain& g, const LevelBox& b) {
    check_dims(g, b.dim);
    double lo[kMaxDim], hi[kMaxDim];
    for (int i = 0; i < b.dim; ++i) {
        lo[i] = b.lo(i);
        hi[i] = b.hi(i);
    }
    return contains_intervals(g, lo, hi);
}

bool grain_intersects_cube(const Grain& g, const Cube& c) {
    check_dims(g, c.dim);
    double lo[kMaxDim], hi[kMaxDim];
    for (int i = 0; i < c.dim; ++i) {
        lo[i] = c.lo[i];
        hi[i] = c.hi(i);
    }
    return intersects_intervals(g, lo, hi);
}

bool grain_contains_cube(const Grain& g, const Cube& c) {
    check_dims(g, c.dim);
    double lo[kMaxDim], hi[kMaxDim];
    for (int i = 0; i < c.dim; ++i) {
        lo[i] = c.lo[i];
        hi[i] = c.hi(i);
    }
    return contains_intervals(g, lo, hi);
}

bool point_in_grain(const Grain& g, const Coords& p) {
    if (g.kind == GrainKind::Box) {
        const double h = 0.5 * g.radius;
        for (int i = 0; i < g.dim; ++i) {
            if (!(std::abs(p[i] - g.center[i]) < h)) return false;
        }
        return true;
    }
    double dist2 = 0.0;
    for (int i = 0; i < g.dim; ++i) {
        const double d = p[i] - g.center[i];
        dist2 += d * d;
    }
    return dist2 < g.radius * g.radius;
}

std::vector<Cube> subdivide(const Cube& c) {
    const int d = c.dim;
    const double half = 0.5 * c.side;
    std::vector<Cube> children;
    children.reserve(std::size_t{1} << d);
    for (unsigned j = 0; j < (1u << d); ++j) {
        Cube child;
        child.dim = d;
        child.side = half;
        // Bit d-1-i of j is coordinate i, so children come out in
        // lexicographic order of the child index vector.
        for (int i = 0; i < d; ++i) {
            const unsigned bit = (j >> (d - 1 - i)) & 1u;
            child.lo[i] = c.lo[i] + (bit ? half : 0.0);
        }
        children.push_back(child);
    }
    return children;
}

} // namespace vacancy

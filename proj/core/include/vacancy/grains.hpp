#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace vacancy {

// Dimensions are runtime values but capped so geometric types stay POD-ish
// and allocation-free in the hot loops.
inline constexpr int kMaxDim = 6;

using Coords = std::array<double, kMaxDim>;
using IndexVec = std::array<std::int32_t, kMaxDim>;

enum class GrainKind { Ball, Box };

/// One Poisson point realized as an open set: the open Euclidean ball
/// B(center, radius), or the open axis-aligned box center + (-r/2, r/2)^d
/// where `radius` is the side length r.
struct Grain {
    GrainKind kind = GrainKind::Ball;
    int dim = 0;
    double radius = 0.0;
    Coords center{};
};

Grain make_ball(std::vector<double> center, double radius);
Grain make_box(std::vector<double> center, double radius);

/// Closed lattice cube index/n + [0, 1/n]^d inside [0,1]^d. Stores indices,
/// not coordinates, so identity and hashing are exact.
struct LevelBox {
    int level = 1;
    int dim = 0;
    IndexVec index{};

    double lo(int i) const { return static_cast<double>(index[i]) / level; }
    double hi(int i) const { return static_cast<double>(index[i] + 1) / level; }

    friend bool operator==(const LevelBox&, const LevelBox&) = default;
};

LevelBox make_level_box(int level, std::vector<std::int32_t> index);

/// Axis-aligned closed cube, the unit of the covering subdivision.
struct Cube {
    int dim = 0;
    double side = 0.0;
    Coords lo{};

    double hi(int i) const { return lo[i] + side; }
    double center(int i) const { return lo[i] + 0.5 * side; }
};

Cube cube_of(const LevelBox& b);

/// Axis-aligned observation window; defaults to [0,1]^d.
struct Window {
    int dim = 0;
    Coords lo{};
    Coords hi{};

    static Window unit(int d);
    double volume() const;
};

// Predicates use strict inequalities throughout: grains are open sets, level
// boxes are closed. No epsilons; boundary events have measure zero.

/// True iff the open grain meets the closed cube of the level box.
bool grain_intersects(const Grain& g, const LevelBox& b);

/// True iff the closed cube of the level box is a subset of the open grain.
bool grain_contains(const Grain& g, const LevelBox& b);

bool grain_intersects_cube(const Grain& g, const Cube& c);
bool grain_contains_cube(const Grain& g, const Cube& c);

/// True iff the point lies in the open grain.
bool point_in_grain(const Grain& g, const Coords& p);

/// Splits a closed cube into its 2^d congruent children, ordered
/// lexicographically by the child index vector.
std::vector<Cube> subdivide(const Cube& c);

} // namespace vacancy

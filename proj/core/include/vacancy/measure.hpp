#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "vacancy/grains.hpp"

namespace vacancy {

enum class ModelKind { Ball, Box };

enum class RadiusLawKind { PurePower, LogPlus, LogMinus };

/// Radius mark law on (r_min, r_max] with density
///
///   PurePower:  r^{-d-1}
///   LogPlus:    r^{-d-1} (1 + 2/|log r|)
///   LogMinus:   r^{-d-1} (1 - 2/|log r|)
///
/// The pure-power law uses the standard cutoff r_max = 1. The log-perturbed
/// laws default to r_max = e^{-2}: the perturbation matters only as r -> 0,
/// and above e^{-2} the minus-sign density would go negative (and both
/// densities blow up non-integrably at r = 1). The threshold behaviour these
/// laws probe does not depend on the cutoff value.
struct RadiusLaw {
    RadiusLawKind kind = RadiusLawKind::PurePower;
    int dimension = 1;
    double r_min = 0.0;
    double r_max = 1.0;

    static RadiusLaw pure_power(int d);
    static RadiusLaw log_perturbed(int d, int sign);

    double density(double r) const;
    bool is_pure_power() const { return kind == RadiusLawKind::PurePower; }
};

/// Full model description: grain shape, dimension, rate, radius law.
struct IntensitySpec {
    ModelKind model = ModelKind::Box;
    int d = 1;
    double lambda = 1.0;
    RadiusLaw law;

    static IntensitySpec make(ModelKind model, int d, double lambda,
                              RadiusLaw law);
    static IntensitySpec make(ModelKind model, int d, double lambda);
};

/// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);

/// nu([r_lo, r_hi]) for the pure-power density: (r_lo^{-d} - r_hi^{-d}) / d.
double radius_tail_mass(double r_lo, double r_hi, int d);

/// Intensity mass of balls with radius in [eps, 1] covering the origin:
/// v_d * log(1/eps).
double hit_measure_origin_ball(double eps, int d);

/// Intensity mass of boxes with side in [eps, 1] meeting the unit cube:
/// integral of (1+r)^d r^{-d-1} over [eps, 1], evaluated by binomial
/// expansion (the k = d term contributes log(1/eps)).
double hit_measure_unit_cube_box(double eps, int d);

/// E(n, d) with P(level-n box untouched) = exp(-lambda * E(n, d)):
/// log n + sum_{k<d} C(d,k) n^{k-d} (n^{d-k}-1)/(d-k), i.e. the integral of
/// (r + 1/n)^d r^{-d-1} over [1/n, 1].
double untouched_exponent_box(int n, int d);

/// Exponent with P(level-n box covered by no single grain)
/// = exp(-lambda * result).
/// Box: integral of (r - 1/n)^d r^{-d-1} over [1/n, 1].
/// Ball: v_d times the same integral with 1/n replaced by sqrt(d)/(2n);
/// requires n > sqrt(d)/2 so that a grain can cover a box at all.
double single_cover_exponent(ModelKind model, int n, int d);

/// mu(R1 union R2) for the hitting sets of two level-n boxes offset by k/n.
/// The intersection term integrates prod_i max(0, r + (1-|k_i|)/n) times
/// r^{-d-1}, which is a single polynomial piece above (k_max - 1)/n and
/// vanishes below, so the result is exact.
double pair_exponent_box(int n, int d, std::span<const int> offset);

/// Exact mu(R1 intersect R2); exposed for the second-moment assembly and the
/// pair-bound checks.
double pair_intersection_mass_box(int n, int d, std::span<const int> offset);

struct ScaleCheckResult {
    double measure_unit = 0.0;    // hitting mass at the unit scale
    double measure_scaled = 0.0;  // hitting mass of the eps-window, radii in [eps^2, eps]
    double residual = 0.0;
    bool pass = false;
};

/// Verifies the semi-scale-invariance identity mu(A) = mu(A_{1/eps}) by two
/// independent quadratures; passes iff |difference| < 1e-9 * (1 + |mu(A)|).
ScaleCheckResult scale_invariance_check(ModelKind model, double eps, int d);

/// C(n, k) as a double; n small (binomials of the dimension).
double binomial(int n, int k);

} // namespace vacancy

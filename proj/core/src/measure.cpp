#include "vacancy/measure.hpp"

#include <algorithm>
#include <cmath>

#include "vacancy/quadrature.hpp"

namespace vacancy {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_dim(int d) {
    if (d < 1 || d > kMaxDim)
        throw std::invalid_argument("dimension must be in 1.." + std::to_string(kMaxDim));
}

} // namespace

RadiusLaw RadiusLaw::pure_power(int d) {
    check_dim(d);
    RadiusLaw law;
    law.kind = RadiusLawKind::PurePower;
    law.dimension = d;
    law.r_min = 0.0;
    law.r_max = 1.0;
    return law;
}

RadiusLaw RadiusLaw::log_perturbed(int d, int sign) {
    check_dim(d);
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("log-perturbed sign must be +1 or -1");
    RadiusLaw law;
    law.kind = sign > 0 ? RadiusLawKind::LogPlus : RadiusLawKind::LogMinus;
    law.dimension = d;
    law.r_min = 0.0;
    law.r_max = std::exp(-2.0);
    return law;
}

double RadiusLaw::density(double r) const {
    if (!(r > r_min) || !(r <= r_max)) return 0.0;
    const double power = std::pow(r, -dimension - 1);
    switch (kind) {
        case RadiusLawKind::PurePower: return power;
        case RadiusLawKind::LogPlus: return power * (1.0 + 2.0 / std::abs(std::log(r)));
        case RadiusLawKind::LogMinus: return power * (1.0 - 2.0 / std::abs(std::log(r)));
    }
    return 0.0;
}

IntensitySpec IntensitySpec::make(ModelKind model, int d, double lambda,
                                  RadiusLaw law) {
    check_dim(d);
    if (!(lambda > 0.0))
        throw std::invalid_argument("lambda must be positive");
    if (law.dimension != d)
        throw std::invalid_argument("radius law dimension does not match model dimension");
    IntensitySpec spec;
    spec.model = model;
    spec.d = d;
    spec.lambda = lambda;
    spec.law = law;
    return spec;
}

IntensitySpec IntensitySpec::make(ModelKind model, int d, double lambda) {
    return make(model, d, lambda, RadiusLaw::pure_power(d));
}

double unit_ball_volume(int d) {
    check_dim(d);
    return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c;
}

double radius_tail_mass(double r_lo, double r_hi, int d) {
    check_dim(d);
    if (!(r_lo > 0.0))
        throw std::invalid_argument("radius_tail_mass: r_lo must be > 0");
    if (!(r_lo <= r_hi) || !(r_hi <= 1.0))
        throw std::invalid_argument("radius_tail_mass: need 0 < r_lo <= r_hi <= 1");
    return (std::pow(r_lo, -d) - std::pow(r_hi, -d)) / d;
}

double hit_measure_origin_ball(double eps, int d) {
    check_dim(d);
    if (!(eps > 0.0) || !(eps <= 1.0))
        throw std::invalid_argument("hit_measure_origin_ball: eps must be in (0, 1]");
    return -unit_ball_volume(d) * std::log(eps);
}

namespace {

// integral of (r + a)^d r^{-d-1} over [lo, 1], for a > -lo. Binomial
// expansion; the r^d term contributes log(1/lo), the rest are power tails.
double dilated_power_integral(double a, double lo, int d) {
    double total = std::log(1.0 / lo);
    for (int k = 0; k < d; ++k) {
        // C(d,k) a^{d-k} * (lo^{k-d} - 1) / (d-k)
        total += binomial(d, k) * std::pow(a, d - k) * (std::pow(lo, k - d) - 1.0) / (d - k);
    }
    return total;
}

} // namespace

double hit_measure_unit_cube_box(double eps, int d) {
    check_dim(d);
    if (!(eps > 0.0) || !(eps <= 1.0))
        throw std::invalid_argument("hit_measure_unit_cube_box: eps must be in (0, 1]");
    return dilated_power_integral(1.0, eps, d);
}

double untouched_exponent_box(int n, int d) {
    check_dim(d);
    if (n < 1) throw std::invalid_argument("untouched_exponent_box: n must be >= 1");
    if (n == 1) return 0.0;
    const double inv = 1.0 / n;
    return dilated_power_integral(inv, inv, d);
}

double single_cover_exponent(ModelKind model, int n, int d) {
    check_dim(d);
    if (n < 1) throw std::invalid_argument("single_cover_exponent: n must be >= 1");
    if (model == ModelKind::Box) {
        if (n == 1) return 0.0;
        const double a = 1.0 / n;
        return dilated_power_integral(-a, a, d);
    }
    const double a = std::sqrt(static_cast<double>(d)) / (2.0 * n);
    if (!(a < 1.0))
        throw std::invalid_argument(
            "single_cover_exponent: ball model needs n > sqrt(d)/2");
    return unit_ball_volume(d) * dilated_power_integral(-a, a, d);
}

double pair_intersection_mass_box(int n, int d, std::span<const int> offset) {
    check_dim(d);
    if (n < 1) throw std::invalid_argument("pair_intersection_mass_box: n must be >= 1");
    if (static_cast<int>(offset.size()) != d)
        throw std::invalid_argument("pair offset must have d coordinates");
    if (n == 1) {
        // Radius range [1, 1] is empty.
        return 0.0;
    }

    // Per-coordinate a_i = (|k_i| - 1)/n: the grain-center overlap in
    // coordinate i has length max(0, r - a_i).
    double a[kMaxDim];
    double lower = 1.0 / n;
    for (int i = 0; i < d; ++i) {
        a[i] = (std::abs(offset[i]) - 1.0) / n;
        lower = std::max(lower, a[i]);
    }
    if (lower >= 1.0) return 0.0;

    // prod_i (r - a_i) = sum_j (-1)^j e_j(a) r^{d-j}
    double esym[kMaxDim + 1] = {1.0};
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j >= 1; --j) esym[j] += esym[j - 1] * a[i];
    }

    double total = std::log(1.0 / lower); // j = 0 term
    double sign = -1.0;
    for (int j = 1; j <= d; ++j) {
        total += sign * esym[j] * (std::pow(lower, -j) - 1.0) / j;
        sign = -sign;
    }
    return total;
}

double pair_exponent_box(int n, int d, std::span<const int> offset) {
    return 2.0 * untouched_exponent_box(n, d) -
           pair_intersection_mass_box(n, d, offset);
}

ScaleCheckResult scale_invariance_check(ModelKind model, double eps, int d) {
    check_dim(d);
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("scale_invariance_check: eps must be in (0, 1)");

    quad::Options opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-12;

    double unit_side = 0.0, scaled_side = 0.0;
    if (model == ModelKind::Ball) {
        const double vd = unit_ball_volume(d);
        // Balls covering the origin: radial integrand v_d r^d r^{-d-1}.
        auto f = [&](double r) { return vd / r; };
        unit_side = quad::integrate(f, eps, 1.0, opts);
        scaled_side = quad::integrate(f, eps * eps, eps, opts);
    } else {
        // Boxes hitting [0,s]^d with side in [s*eps, s]: (s + r)^d r^{-d-1}.
        auto hit = [&](double s, double r_lo, double r_hi) {
            auto f = [&](double r) {
                return std::pow(s + r, d) * std::pow(r, -d - 1);
            };
            return quad::integrate(f, r_lo, r_hi, opts);
        };
        unit_side = hit(1.0, eps, 1.0);
        scaled_side = hit(eps, eps * eps, eps);
    }

    ScaleCheckResult res;
    res.measure_unit = unit_side;
    res.measure_scaled = scaled_side;
    res.residual = std::abs(unit_side - scaled_side);
    res.pass = res.residual < 1e-9 * (1.0 + std::abs(unit_side));
    return res;
}

} // namespace vacancy

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "vacancy/grains.hpp"
#include "vacancy/measure.hpp"

namespace vacancy {

/// A realized Poisson configuration restricted to grains with radius in
/// [1/level, 1], with centers sampled on window (+) [-1,1]^d. That dilated
/// center slab is a superset of every center whose grain can meet the
/// window, so the restriction of `grains` to grains meeting the window is
/// exactly the model's restriction; the never-touching extras are kept so
/// refinement and thinning stay consistent.
struct SoupSample {
    IntensitySpec spec;
    int level = 1;
    Window window;
    std::uint64_t seed = 0;
    std::vector<Grain> grains;
};

/// Poisson mean of |grains| for the given parameters.
double expected_grain_count(const IntensitySpec& spec, const Window& window,
                            int n);

/// Draws the configuration at level n. Deterministic in
/// (spec, window, n, seed). Pure-power law only; the log-perturbed laws are
/// analysis-only.
SoupSample sample_soup(const IntensitySpec& spec, const Window& window, int n,
                       std::uint64_t seed);

/// Inverse CDF of the pure-power law truncated to [1/n, 1]:
/// r(u) = (n^d - u (n^d - 1))^{-1/d}.
double sample_radius(double u, int n, int d);

/// Adds an independent radius band [1/m, 1/n) on top of s (derived seed
/// hash(seed, "refine", m)); the union is distributed as sample_soup at
/// level m and the original grains are preserved verbatim. m == s.level is
/// the identity (empty band).
SoupSample refine_soup(const SoupSample& s, int m);

/// Keeps each grain independently with probability lambda_prime / lambda,
/// realizing the monotone coupling: the result is a subset of s distributed
/// as the rate-lambda_prime model.
SoupSample thin_to_lambda(const SoupSample& s, double lambda_prime,
                          std::uint64_t seed2);

/// Line-oriented text format: header `soup <model> <d> <lambda> <n> <seed>`,
/// a `window <lo...> <hi...>` line, then one grain per line as
/// `<kind> <center_1> ... <center_d> <radius>`, floats with 17 significant
/// digits.
void write_soup(std::ostream& out, const SoupSample& s);
SoupSample read_soup(std::istream& in);

} // namespace vacancy

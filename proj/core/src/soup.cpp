#include "vacancy/soup.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "vacancy/io.hpp"
#include "vacancy/rng.hpp"

namespace vacancy {

namespace {

double dilated_volume(const Window& window) {
    double v = 1.0;
    for (int i = 0; i < window.dim; ++i) v *= window.hi[i] - window.lo[i] + 2.0;
    return v;
}

void require_pure_power(const IntensitySpec& spec, const char* what) {
    if (!spec.law.is_pure_power())
        throw std::invalid_argument(std::string(what) +
                                    ": log-perturbed laws are analysis-only and cannot be sampled");
}

GrainKind grain_kind(const IntensitySpec& spec) {
    return spec.model == ModelKind::Ball ? GrainKind::Ball : GrainKind::Box;
}

// Inverse CDF on a band [r_lo, r_hi) of the power law, in terms of
// t = r^{-d}: t uniform on (hi^{-d}, lo^{-d}].
double band_radius(double u, double r_lo, double r_hi, int d) {
    const double t_lo = std::pow(r_hi, -d);
    const double t_hi = std::pow(r_lo, -d);
    return std::pow(t_hi - u * (t_hi - t_lo), -1.0 / d);
}

void append_band(SoupSample& s, double r_lo, double r_hi, std::uint64_t seed) {
    const IntensitySpec& spec = s.spec;
    if (!(r_lo < r_hi)) return;
    const double mass = radius_tail_mass(r_lo, 1.0, spec.d) -
                        (r_hi < 1.0 ? radius_tail_mass(r_hi, 1.0, spec.d) : 0.0);
    const double mean = spec.lambda * dilated_volume(s.window) * mass;

    RngStream rng(seed);
    const std::int64_t count = rng.poisson(mean);
    s.grains.reserve(s.grains.size() + static_cast<std::size_t>(count));
    const GrainKind kind = grain_kind(spec);
    for (std::int64_t i = 0; i < count; ++i) {
        Grain g;
        g.kind = kind;
        g.dim = spec.d;
        for (int c = 0; c < spec.d; ++c)
            g.center[c] = rng.uniform(s.window.lo[c] - 1.0, s.window.hi[c] + 1.0);
        g.radius = band_radius(rng.uniform01(), r_lo, r_hi, spec.d);
        s.grains.push_back(g);
    }
}

} // namespace

double expected_grain_count(const IntensitySpec& spec, const Window& window,
                            int n) {
    if (n < 1) throw std::invalid_argument("expected_grain_count: n must be >= 1");
    if (n == 1) return 0.0;
    return spec.lambda * dilated_volume(window) *
           radius_tail_mass(1.0 / n, 1.0, spec.d);
}

double sample_radius(double u, int n, int d) {
    if (n < 2) throw std::invalid_argument("sample_radius: n must be >= 2");
    if (!(u >= 0.0) || !(u < 1.0))
        throw std::invalid_argument("sample_radius: u must be in [0, 1)");
    const double nd = std::pow(static_cast<double>(n), d);
    return std::pow(nd - u * (nd - 1.0), -1.0 / d);
}

SoupSample sample_soup(const IntensitySpec& spec, const Window& window, int n,
                       std::uint64_t seed) {
    require_pure_power(spec, "sample_soup");
    if (n < 1) throw std::invalid_argument("sample_soup: n must be >= 1");
    if (window.dim != spec.d)
        throw std::invalid_argument("sample_soup: window dimension mismatch");
    for (int i = 0; i < window.dim; ++i)
        if (!(window.lo[i] < window.hi[i]))
            throw std::invalid_argument("sample_soup: window needs lo < hi");

    SoupSample s;
    s.spec = spec;
    s.level = n;
    s.window = window;
    s.seed = seed;
    if (n > 1) append_band(s, 1.0 / n, 1.0, derive_seed(seed, "band", 0));
    return s;
}

SoupSample refine_soup(const SoupSample& s, int m) {
    require_pure_power(s.spec, "refine_soup");
    if (m < s.level)
        throw std::invalid_argument("refine_soup: target level must be >= current level");
    SoupSample out = s;
    out.level = m;
    if (m > s.level)
        append_band(out, 1.0 / m, 1.0 / s.level, derive_seed(s.seed, "refine", m));
    return out;
}

SoupSample thin_to_lambda(const SoupSample& s, double lambda_prime,
                          std::uint64_t seed2) {
    if (!(lambda_prime > 0.0) || !(lambda_prime <= s.spec.lambda))
        throw std::invalid_argument(
            "thin_to_lambda: need 0 < lambda_prime <= lambda");

    SoupSample out;
    out.spec = IntensitySpec::make(s.spec.model, s.spec.d, lambda_prime, s.spec.law);
    out.level = s.level;
    out.window = s.window;
    out.seed = s.seed;

    const double keep = lambda_prime / s.spec.lambda;
    RngStream rng(seed2);
    out.grains.reserve(s.grains.size());
    for (const Grain& g : s.grains) {
        if (rng.uniform01() < keep) out.grains.push_back(g);
    }
    return out;
}

void write_soup(std::ostream& out, const SoupSample& s) {
    out << "soup " << (s.spec.model == ModelKind::Ball ? "ball" : "box") << ' '
        << s.spec.d << ' ' << format_g17(s.spec.lambda) << ' ' << s.level << ' '
        << s.seed << '\n';
    out << "window";
    for (int i = 0; i < s.window.dim; ++i) out << ' ' << format_g17(s.window.lo[i]);
    for (int i = 0; i < s.window.dim; ++i) out << ' ' << format_g17(s.window.hi[i]);
    out << '\n';
    for (const Grain& g : s.grains) {
        out << (g.kind == GrainKind::Ball ? "ball" : "box");
        for (int i = 0; i < g.dim; ++i) out << ' ' << format_g17(g.center[i]);
        out << ' ' << format_g17(g.radius) << '\n';
    }
}

SoupSample read_soup(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_soup: missing header line");
    std::istringstream header(line);
    std::string tag, model;
    int d = 0, level = 0;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    if (!(header >> tag >> model >> d >> lambda >> level >> seed) || tag != "soup")
        throw std::runtime_error("read_soup: malformed header line");
    if (model != "ball" && model != "box")
        throw std::runtime_error("read_soup: unknown model token");

    SoupSample s;
    s.spec = IntensitySpec::make(model == "ball" ? ModelKind::Ball : ModelKind::Box,
                                 d, lambda);
    s.level = level;
    s.seed = seed;

    if (!std::getline(in, line))
        throw std::runtime_error("read_soup: missing window line");
    std::istringstream wline(line);
    if (!(wline >> tag) || tag != "window")
        throw std::runtime_error("read_soup: malformed window line");
    s.window.dim = d;
    for (int i = 0; i < d; ++i)
        if (!(wline >> s.window.lo[i]))
            throw std::runtime_error("read_soup: malformed window line");
    for (int i = 0; i < d; ++i)
        if (!(wline >> s.window.hi[i]))
            throw std::runtime_error("read_soup: malformed window line");

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream gline(line);
        std::string kind;
        gline >> kind;
        Grain g;
        if (kind == "ball") g.kind = GrainKind::Ball;
        else if (kind == "box") g.kind = GrainKind::Box;
        else throw std::runtime_error("read_soup: unknown grain kind");
        g.dim = d;
        for (int i = 0; i < d; ++i)
            if (!(gline >> g.center[i]))
                throw std::runtime_error("read_soup: malformed grain line");
        if (!(gline >> g.radius))
            throw std::runtime_error("read_soup: malformed grain line");
        s.grains.push_back(g);
    }
    return s;
}

} // namespace vacancy

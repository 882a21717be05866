#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "support/oracles.hpp"
#include "vacancy/rng.hpp"
#include "vacancy/soup.hpp"

using namespace vacancy;

namespace {

bool same_grains(const std::vector<Grain>& a, const std::vector<Grain>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].kind != b[i].kind || a[i].dim != b[i].dim ||
            a[i].radius != b[i].radius || a[i].center != b[i].center)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("sample_radius inverse CDF") {
    CHECK(sample_radius(0.0, 4, 2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(sample_radius(1.0 - 1e-13, 4, 2) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sample_radius(0.5, 2, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(sample_radius(1.0, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_radius(-0.1, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_radius(0.5, 1, 1), std::invalid_argument);

    // strictly increasing, and F(r(u)) = u
    const int n = 8, d = 3;
    double prev = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double u = i / 50.0;
        const double r = sample_radius(u, n, d);
        CHECK(r > prev);
        prev = r;
        const double nd = std::pow(n, d);
        const double cdf = (nd - std::pow(r, -d)) / (nd - 1.0);
        CHECK(cdf == doctest::Approx(u).epsilon(1e-10));
    }
}

TEST_CASE("expected grain counts") {
    const auto spec1 = IntensitySpec::make(ModelKind::Box, 1, 1.0);
    CHECK(expected_grain_count(spec1, Window::unit(1), 2) ==
          doctest::Approx(3.0).epsilon(1e-14));
    CHECK(expected_grain_count(spec1, Window::unit(1), 1) == 0.0);
    const auto spec2 = IntensitySpec::make(ModelKind::Box, 2, 2.0);
    CHECK(expected_grain_count(spec2, Window::unit(2), 4) ==
          doctest::Approx(135.0).epsilon(1e-14));
}

TEST_CASE("level 1 soups are empty and log laws cannot be sampled") {
    const auto spec = IntensitySpec::make(ModelKind::Ball, 2, 3.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        CHECK(sample_soup(spec, Window::unit(2), 1, seed).grains.empty());

    const auto log_spec = IntensitySpec::make(
        ModelKind::Ball, 2, 1.0, RadiusLaw::log_perturbed(2, +1));
    CHECK_THROWS_AS(sample_soup(log_spec, Window::unit(2), 4, 1),
                    std::invalid_argument);
}

TEST_CASE("sampling is deterministic, also across threads") {
    const auto spec = IntensitySpec::make(ModelKind::Box, 2, 1.5);
    const Window w = Window::unit(2);
    const SoupSample first = sample_soup(spec, w, 8, 12345);
    const SoupSample second = sample_soup(spec, w, 8, 12345);
    CHECK(same_grains(first.grains, second.grains));

    SoupSample from_thread;
    std::thread t([&] { from_thread = sample_soup(spec, w, 8, 12345); });
    t.join();
    CHECK(same_grains(first.grains, from_thread.grains));

    CHECK_FALSE(same_grains(first.grains,
                            sample_soup(spec, w, 8, 12346).grains));
}

TEST_CASE("soup invariants: radius band and center slab") {
    const auto spec = IntensitySpec::make(ModelKind::Ball, 2, 2.0);
    const SoupSample s = sample_soup(spec, Window::unit(2), 8, 99);
    CHECK(!s.grains.empty());
    for (const Grain& g : s.grains) {
        CHECK(g.radius >= 1.0 / 8);
        CHECK(g.radius <= 1.0);
        for (int i = 0; i < 2; ++i) {
            CHECK(g.center[i] >= -1.0);
            CHECK(g.center[i] <= 2.0);
        }
    }
}

TEST_CASE("grain count matches the Poisson law over many seeds") {
    const auto spec = IntensitySpec::make(ModelKind::Box, 1, 1.0);
    const Window w = Window::unit(1);
    const int reps = 10000;
    std::vector<double> counts(reps);
    for (int i = 0; i < reps; ++i)
        counts[i] =
            static_cast<double>(sample_soup(spec, w, 2, 1000 + i).grains.size());
    const auto stat = oracle::mean_sd(counts);
    const double mean = 3.0;
    CHECK(std::abs(stat.mean - mean) < 4.0 * std::sqrt(mean / reps));
    const double var = stat.sd * stat.sd;
    const double se_var = mean * std::sqrt(2.0 / (reps - 1) + 1.0 / (reps * mean));
    CHECK(std::abs(var - mean) < 4.0 * se_var);
}

TEST_CASE("empirical radius law passes a Kolmogorov-Smirnov test") {
    const int n = 4, d = 1;
    const auto spec = IntensitySpec::make(ModelKind::Box, d, 1.0);
    const Window w = Window::unit(d);
    std::vector<double> radii;
    for (int i = 0; i < 1500 && radii.size() < 10000; ++i) {
        for (const Grain& g : sample_soup(spec, w, n, 555 + i).grains)
            radii.push_back(g.radius);
    }
    REQUIRE(radii.size() >= 10000);
    radii.resize(10000);
    std::sort(radii.begin(), radii.end());
    const double nd = std::pow(n, d);
    double ks = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double cdf = (nd - std::pow(radii[i], -d)) / (nd - 1.0);
        const double hi = static_cast<double>(i + 1) / radii.size();
        const double lo = static_cast<double>(i) / radii.size();
        ks = std::max({ks, std::abs(cdf - hi), std::abs(cdf - lo)});
    }
    CHECK(ks < 1.63 / std::sqrt(static_cast<double>(radii.size())));
}

TEST_CASE("refine_soup adds exactly the missing band") {
    const auto spec = IntensitySpec::make(ModelKind::Box, 1, 1.0);
    const SoupSample s = sample_soup(spec, Window::unit(1), 2, 31);

    const SoupSample same = refine_soup(s, 2);
    CHECK(same_grains(s.grains, same.grains));
    CHECK_THROWS_AS(refine_soup(s, 1), std::invalid_argument);

    const SoupSample fine = refine_soup(s, 4);
    CHECK(fine.level == 4);
    REQUIRE(fine.grains.size() >= s.grains.size());
    for (std::size_t i = 0; i < s.grains.size(); ++i)
        CHECK(fine.grains[i].radius == s.grains[i].radius);
    for (std::size_t i = s.grains.size(); i < fine.grains.size(); ++i) {
        CHECK(fine.grains[i].radius >= 0.25);
        CHECK(fine.grains[i].radius < 0.5);
    }

    // refinement reproduces the level-4 count statistics
    const int reps = 10000;
    std::vector<double> added(reps);
    for (int i = 0; i < reps; ++i) {
        const SoupSample base = sample_soup(spec, Window::unit(1), 2, 7000 + i);
        added[i] = static_cast<double>(refine_soup(base, 4).grains.size() -
                                       base.grains.size());
    }
    const auto stat = oracle::mean_sd(added);
    const double mean = 3.0 * radius_tail_mass(0.25, 0.5, 1); // 6
    CHECK(std::abs(stat.mean - mean) < 4.0 * std::sqrt(mean / reps));
}

TEST_CASE("thin_to_lambda realizes the subset coupling") {
    const auto spec = IntensitySpec::make(ModelKind::Box, 1, 2.0);
    const SoupSample s = sample_soup(spec, Window::unit(1), 4, 8);

    const SoupSample all = thin_to_lambda(s, 2.0, 555);
    CHECK(same_grains(all.grains, s.grains));
    CHECK_THROWS_AS(thin_to_lambda(s, 2.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(thin_to_lambda(s, 0.0, 1), std::invalid_argument);

    for (std::uint64_t seed2 = 0; seed2 < 200; ++seed2) {
        const SoupSample thin = thin_to_lambda(s, 0.7, seed2);
        CHECK(thin.spec.lambda == 0.7);
        // kept grains appear in order as a subsequence of the source
        std::size_t j = 0;
        bool subset = true;
        for (const Grain& g : thin.grains) {
            while (j < s.grains.size() && s.grains[j].center != g.center) ++j;
            if (j++ == s.grains.size()) subset = false;
        }
        CHECK(subset);
    }

    // thinned counts have the thinned Poisson mean
    const int reps = 10000;
    std::vector<double> counts(reps);
    for (int i = 0; i < reps; ++i) {
        const SoupSample base = sample_soup(spec, Window::unit(1), 2, 40000 + i);
        counts[i] = static_cast<double>(
            thin_to_lambda(base, 1.0, 90000 + i).grains.size());
    }
    const auto stat = oracle::mean_sd(counts);
    CHECK(std::abs(stat.mean - 3.0) < 4.0 * std::sqrt(3.0 / reps));
}

TEST_CASE("soup text format round-trips") {
    const auto spec = IntensitySpec::make(ModelKind::Ball, 3, 0.75);
    const SoupSample s = sample_soup(spec, Window::unit(3), 4, 20240207);

    std::stringstream buffer;
    write_soup(buffer, s);
    const SoupSample back = read_soup(buffer);

    CHECK(back.level == s.level);
    CHECK(back.seed == s.seed);
    CHECK(back.spec.lambda == s.spec.lambda);
    CHECK(back.spec.model == s.spec.model);
    CHECK(back.spec.d == s.spec.d);
    CHECK(same_grains(back.grains, s.grains));

    std::stringstream again;
    write_soup(again, back);
    CHECK(again.str() == buffer.str());

    std::stringstream bad("nonsense");
    CHECK_THROWS_AS(read_soup(bad), std::runtime_error);
}

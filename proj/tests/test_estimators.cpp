#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "vacancy/estimators.hpp"

using namespace vacancy;

namespace {
const IntensitySpec kBox1 = IntensitySpec::make(ModelKind::Box, 1, 1.0);
const IntensitySpec kBoxHalf = IntensitySpec::make(ModelKind::Box, 1, 0.5);
}

TEST_CASE("exact first moment of |m_n|") {
    CHECK(exact_first_moment_mn(kBox1, 2) ==
          doctest::Approx(2.0 * std::exp(-(std::log(2.0) + 0.5))).epsilon(1e-14));
    CHECK(exact_first_moment_mn(kBox1, 1) == 1.0);
    CHECK_THROWS_AS(
        exact_first_moment_mn(IntensitySpec::make(ModelKind::Ball, 1, 1.0), 2),
        std::invalid_argument);

    for (int d = 1; d <= 2; ++d) {
        for (double lambda : {0.5, 1.0, 2.0}) {
            const auto spec = IntensitySpec::make(ModelKind::Box, d, lambda);
            for (int n = 2; n <= 1024; n *= 2) {
                const double mean = exact_first_moment_mn(spec, n);
                CHECK(mean >= std::exp(-lambda * std::pow(2.0, d)) *
                                  std::pow(n, d - lambda));
                CHECK(mean <= std::pow(n, d - lambda));
            }
        }
    }
}

TEST_CASE("exact second moment of |m_n|") {
    // two offset classes at n = 2: k = 0 and |k| = 1
    const double p0 = std::exp(-untouched_exponent_box(2, 1));
    const double p1 = std::exp(-(1.0 + std::log(2.0)));
    CHECK(exact_second_moment_mn(kBox1, 2) ==
          doctest::Approx(2.0 * p0 + 2.0 * p1).epsilon(1e-14));
    CHECK(exact_second_moment_mn(kBox1, 2) ==
          doctest::Approx(0.97441010088407576).epsilon(1e-14));

    CHECK(exact_second_moment_mn(kBox1, 1) ==
          doctest::Approx(exact_first_moment_mn(kBox1, 1)).epsilon(1e-14));

    CHECK_THROWS_AS(exact_second_moment_mn(kBox1, 512), std::runtime_error);
    CHECK_THROWS_AS(
        exact_second_moment_mn(IntensitySpec::make(ModelKind::Box, 2, 1.0), 128),
        std::runtime_error);

    // Cauchy-Schwarz and integer-valuedness, plus boundedness at lambda = d
    double largest = 0.0;
    for (int n = 2; n <= 256; n *= 2) {
        const double mean = exact_first_moment_mn(kBox1, n);
        const double second = exact_second_moment_mn(kBox1, n);
        CHECK(second >= mean * mean);
        CHECK(second >= mean);
        largest = std::max(largest, second);
    }
    CHECK(largest < 1.3); // n^{2(d-lambda)} = 1 here, constant stays small
}

TEST_CASE("second moment agrees in d=2 with a direct pair sum") {
    const auto spec = IntensitySpec::make(ModelKind::Box, 2, 1.5);
    const int n = 4;
    double direct = 0.0;
    for (int k1 = -(n - 1); k1 <= n - 1; ++k1) {
        for (int k2 = -(n - 1); k2 <= n - 1; ++k2) {
            const int k[] = {k1, k2};
            direct += (n - std::abs(k1)) * (n - std::abs(k2)) *
                      std::exp(-spec.lambda * pair_exponent_box(n, 2, k));
        }
    }
    CHECK(exact_second_moment_mn(spec, n) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("Paley-Zygmund bound") {
    CHECK(paley_zygmund_lower(kBox1, 2) ==
          doctest::Approx(0.37754066879814546).epsilon(1e-13));
    CHECK(paley_zygmund_lower(kBox1, 1) ==
          doctest::Approx(exact_first_moment_mn(kBox1, 1)).epsilon(1e-14));

    const double base = paley_zygmund_lower(kBoxHalf, 2);
    for (int n = 2; n <= 256; ++n) {
        const double pz = paley_zygmund_lower(kBoxHalf, n);
        CHECK(pz > 0.0);
        CHECK(pz <= 1.0);
        CHECK(pz >= 0.5 * base);
    }
}

TEST_CASE("mc_experiment pins the exact oracles") {
    const std::vector<MomentReport> reports =
        mc_experiment(kBox1, Window::unit(1), {2}, 20000, 10, 2026);
    REQUIRE(reports.size() == 1);
    const MomentReport& rep = reports[0];

    REQUIRE(rep.exact_mean_mn.has_value());
    REQUIRE(rep.exact_second_moment_mn.has_value());
    CHECK(std::abs(rep.mc_mean_mn.mean - *rep.exact_mean_mn) <
          4.0 * rep.mc_mean_mn.stderr_);
    CHECK(std::abs(rep.mc_second_moment_mn.mean - *rep.exact_second_moment_mn) <
          4.0 * rep.mc_second_moment_mn.stderr_);

    // survival by inclusion-exclusion over the two level-2 boxes
    const double p1 = std::exp(-untouched_exponent_box(2, 1));
    const int k1[] = {1};
    const double p12 = std::exp(-pair_exponent_box(2, 1, k1));
    const double survival = 2.0 * p1 - p12;
    CHECK(std::abs(rep.mc_survival_mn.mean - survival) <
          4.0 * rep.mc_survival_mn.stderr_);

    // survival dominates its Paley-Zygmund bound
    CHECK(rep.mc_survival_mn.mean >
          *rep.pz_lower_bound - 4.0 * rep.mc_survival_mn.stderr_);

    CHECK_THROWS_AS(mc_experiment(kBox1, Window::unit(1), {2}, 1, 10, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_experiment(kBox1, Window::unit(1), {}, 100, 10, 1),
                    std::invalid_argument);
}

TEST_CASE("mc_experiment is deterministic and worker-count independent") {
    const auto one = mc_experiment(kBox1, Window::unit(1), {2, 4}, 400, 10, 99, 1);
    const auto two = mc_experiment(kBox1, Window::unit(1), {2, 4}, 400, 10, 99, 2);
    const auto rerun = mc_experiment(kBox1, Window::unit(1), {2, 4}, 400, 10, 99, 1);
    REQUIRE(one.size() == two.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].mc_mean_mn.mean == two[i].mc_mean_mn.mean);
        CHECK(one[i].mc_mean_mn.stderr_ == two[i].mc_mean_mn.stderr_);
        CHECK(one[i].mc_covering_lo.mean == two[i].mc_covering_lo.mean);
        CHECK(one[i].mc_mean_Mn.mean == rerun[i].mc_mean_Mn.mean);
        CHECK(one[i].mc_survival_mn.mean == rerun[i].mc_survival_mn.mean);
    }
}

TEST_CASE("subcritical covering numbers grow like 2^{d-lambda} per level") {
    // lambda = 1/2 in d = 1: successive dyadic levels should multiply the
    // certified covering number by about sqrt(2).
    std::vector<int> levels;
    for (int k = 4; k <= 9; ++k) levels.push_back(1 << k);
    const auto reports =
        mc_experiment(kBoxHalf, Window::unit(1), levels, 3000, 10, 314);
    for (std::size_t i = 0; i + 1 < reports.size(); ++i) {
        const McStat& a = reports[i].mc_covering_lo;
        const McStat& b = reports[i + 1].mc_covering_lo;
        const double ratio = b.mean / a.mean;
        const double se =
            ratio * std::sqrt(std::pow(a.stderr_ / a.mean, 2) +
                              std::pow(b.stderr_ / b.mean, 2));
        CHECK(ratio + 4.0 * se >= 1.2);
        CHECK(ratio - 4.0 * se <= 1.7);
    }
}

TEST_CASE("be_classify reproduces the threshold picture") {
    for (int d = 1; d <= 2; ++d) {
        const double critical = d / unit_ball_volume(d);
        const RadiusLaw power = RadiusLaw::pure_power(d);
        const RadiusLaw logplus = RadiusLaw::log_perturbed(d, +1);
        const RadiusLaw logminus = RadiusLaw::log_perturbed(d, -1);

        CHECK(be_classify(power, 0.2 * critical, d) == BeVerdict::NonEmpty);
        CHECK(be_classify(power, critical, d) == BeVerdict::Inconclusive);
        CHECK(be_classify(power, 2.0 * critical, d) == BeVerdict::Empty);
        CHECK(be_classify(logplus, critical, d) == BeVerdict::Empty);
        CHECK(be_classify(logminus, critical, d) == BeVerdict::NonEmpty);
    }

    BeDiagnostics diag;
    be_classify(RadiusLaw::pure_power(2), 0.1, 2, &diag);
    CHECK(diag.grid_u.size() == 40);
    CHECK(diag.local_exponent_f.size() == 39);
    CHECK(diag.margin == 0.02);
    // pure power: f(u) = u^{d-1-lambda v_d} e^{lambda v_d (u-1)}
    CHECK(diag.fitted_exponent_f ==
          doctest::Approx(2 - 1 - 0.1 * unit_ball_volume(2)).epsilon(1e-6));

    CHECK_THROWS_AS(be_classify(RadiusLaw::pure_power(2), 1.0, 3),
                    std::invalid_argument);
    RadiusLaw bad = RadiusLaw::log_perturbed(2, -1);
    bad.r_max = 1.0; // density would be negative / non-integrable near 1
    CHECK_THROWS_AS(be_classify(bad, 1.0, 2), std::invalid_argument);
}

TEST_CASE("be_classify is monotone in lambda") {
    auto rank = [](BeVerdict v) {
        return v == BeVerdict::NonEmpty ? 0 : (v == BeVerdict::Inconclusive ? 1 : 2);
    };
    for (int d = 1; d <= 2; ++d) {
        for (const RadiusLaw& law :
             {RadiusLaw::pure_power(d), RadiusLaw::log_perturbed(d, +1),
              RadiusLaw::log_perturbed(d, -1)}) {
            int prev = 0;
            for (double lambda = 0.05; lambda < 4.0; lambda *= 1.5) {
                const int r = rank(be_classify(law, lambda, d));
                CHECK(r >= prev);
                prev = r;
            }
        }
    }
}

#include "vacancy/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vacancy/parallel.hpp"
#include "vacancy/quadrature.hpp"
#include "vacancy/rng.hpp"

namespace vacancy {

namespace {

void require_box_power(const IntensitySpec& spec, const char* what) {
    if (spec.model != ModelKind::Box)
        throw std::invalid_argument(
            std::string(what) +
            ": closed-form m_n moments exist only for the box model");
    if (!spec.law.is_pure_power())
        throw std::invalid_argument(std::string(what) +
                                    ": closed forms need the pure-power law");
}

int second_moment_budget(int d) {
    switch (d) {
        case 1: return 256;
        case 2: return 64;
        case 3: return 16;
        default: return 0;
    }
}

} // namespace

double exact_first_moment_mn(const IntensitySpec& spec, int n) {
    require_box_power(spec, "exact_first_moment_mn");
    if (n < 1) throw std::invalid_argument("exact_first_moment_mn: n must be >= 1");
    return std::pow(static_cast<double>(n), spec.d) *
           std::exp(-spec.lambda * untouched_exponent_box(n, spec.d));
}

double exact_second_moment_mn(const IntensitySpec& spec, int n) {
    require_box_power(spec, "exact_second_moment_mn");
    if (n < 1) throw std::invalid_argument("exact_second_moment_mn: n must be >= 1");
    const int d = spec.d;
    const int budget = second_moment_budget(d);
    if (budget == 0 || n > budget)
        throw std::runtime_error(
            "exact_second_moment_mn: offset enumeration exceeds the size budget");

    // Enumerate unsigned offsets; each nonzero coordinate doubles the count
    // of signed offsets with the same exponent, and an offset k has
    // prod_i (n - k_i) ordered box pairs.
    int k[kMaxDim] = {0};
    double total = 0.0;
    while (true) {
        double pairs = 1.0;
        int nonzero = 0;
        for (int i = 0; i < d; ++i) {
            pairs *= n - k[i];
            if (k[i] != 0) ++nonzero;
        }
        pairs *= static_cast<double>(1u << nonzero);
        total += pairs * std::exp(-spec.lambda *
                                  pair_exponent_box(n, d, std::span(k, k + d)));
        int i = d - 1;
        while (i >= 0 && ++k[i] >= n) {
            k[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return total;
}

double paley_zygmund_lower(const IntensitySpec& spec, int n) {
    const double mean = exact_first_moment_mn(spec, n);
    const double second = exact_second_moment_mn(spec, n);
    return mean * mean / second;
}

namespace {

struct ReplicateRow {
    double mn = 0.0;
    double mn_sq = 0.0;
    double survival = 0.0;
    double big_mn = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double undetermined = 0.0;
};

McStat reduce(const std::vector<ReplicateRow>& rows, double ReplicateRow::* field) {
    const std::size_t r = rows.size();
    double sum = 0.0;
    for (const ReplicateRow& row : rows) sum += row.*field;
    const double mean = sum / static_cast<double>(r);
    double ss = 0.0;
    for (const ReplicateRow& row : rows) {
        const double dev = row.*field - mean;
        ss += dev * dev;
    }
    const double sd = std::sqrt(ss / static_cast<double>(r - 1));
    return {mean, sd / std::sqrt(static_cast<double>(r))};
}

} // namespace

std::vector<MomentReport> mc_experiment(const IntensitySpec& spec,
                                        const Window& window,
                                        const std::vector<int>& levels,
                                        std::int64_t replicates, int depth_cap,
                                        std::uint64_t seed, int workers) {
    if (replicates < 2)
        throw std::invalid_argument("mc_experiment: need at least 2 replicates");
    if (levels.empty())
        throw std::invalid_argument("mc_experiment: level list is empty");
    if (!spec.law.is_pure_power())
        throw std::invalid_argument("mc_experiment: pure-power law required");

    std::vector<MomentReport> reports;
    reports.reserve(levels.size());
    for (const int n : levels) {
        if (n < 1) throw std::invalid_argument("mc_experiment: levels must be >= 1");
        const std::uint64_t level_seed = derive_seed(seed, "level", n);

        std::vector<ReplicateRow> rows(static_cast<std::size_t>(replicates));
        parallel_for_index(replicates, workers, [&](std::int64_t i) {
            const std::uint64_t rep_seed = derive_seed(level_seed, "replicate",
                                                       static_cast<std::uint64_t>(i));
            const SoupSample soup = sample_soup(spec, window, n, rep_seed);
            const CoverageReport report = coverage_report(soup, n, depth_cap);
            ReplicateRow& row = rows[static_cast<std::size_t>(i)];
            row.mn = static_cast<double>(report.untouched_count);
            row.mn_sq = row.mn * row.mn;
            row.survival = report.untouched_count > 0 ? 1.0 : 0.0;
            row.big_mn = static_cast<double>(report.single_uncovered_count);
            row.lo = static_cast<double>(report.covering_lo);
            row.hi = static_cast<double>(report.covering_hi);
            row.undetermined = static_cast<double>(report.undetermined_cells);
        });

        MomentReport rep;
        rep.spec = spec;
        rep.level = n;
        rep.replicates = replicates;
        rep.depth_cap = depth_cap;
        if (spec.model == ModelKind::Box && spec.law.is_pure_power()) {
            rep.exact_mean_mn = exact_first_moment_mn(spec, n);
            if (n <= second_moment_budget(spec.d)) {
                rep.exact_second_moment_mn = exact_second_moment_mn(spec, n);
                rep.pz_lower_bound = *rep.exact_mean_mn * *rep.exact_mean_mn /
                                     *rep.exact_second_moment_mn;
            }
        }
        rep.mc_mean_mn = reduce(rows, &ReplicateRow::mn);
        rep.mc_second_moment_mn = reduce(rows, &ReplicateRow::mn_sq);
        rep.mc_survival_mn = reduce(rows, &ReplicateRow::survival);
        rep.mc_mean_Mn = reduce(rows, &ReplicateRow::big_mn);
        rep.mc_covering_lo = reduce(rows, &ReplicateRow::lo);
        rep.mc_covering_hi = reduce(rows, &ReplicateRow::hi);
        rep.mc_undetermined = reduce(rows, &ReplicateRow::undetermined);
        reports.push_back(std::move(rep));
    }
    return reports;
}

namespace {

// Radial integrals behind the emptiness tests, as functions of the floor u. For the pure-power law both have closed forms; the log-perturbed
// ones go through quadrature after the substitution r = e^t, which turns
//   int_u^R (r-u)^p r^{-p-1} (1 + 2 sign/|log r|) dr
// into the well-behaved int (1 - u e^{-t})^p (1 - 2 sign / t) dt.
double hitting_integral(const RadiusLaw& law, double u, int power) {
    if (u >= law.r_max) return 0.0;
    if (law.is_pure_power()) {
        double total = std::log(1.0 / u);
        for (int k = 1; k <= power; ++k)
            total += binomial(power, k) * ((k % 2) ? -1.0 : 1.0) *
                     (1.0 - std::pow(u, k)) / k;
        return total;
    }
    const double sign = law.kind == RadiusLawKind::LogPlus ? 1.0 : -1.0;
    quad::Options opts;
    opts.abs_tol = 1e-12;
    opts.rel_tol = 1e-10;
    auto integrand = [&](double t) {
        return std::pow(1.0 - u * std::exp(-t), power) * (1.0 - 2.0 * sign / t);
    };
    return quad::integrate(integrand, std::log(u), std::log(law.r_max), opts);
}

// g: power = 1 (d-independent reduced integrand); h: power = d.
double necessary_exponent(const RadiusLaw& law, double u) {
    return hitting_integral(law, u, 1);
}
double sufficient_exponent(const RadiusLaw& law, double u, int d) {
    return hitting_integral(law, u, d);
}

} // namespace

BeVerdict be_classify(const RadiusLaw& law, double lambda, int d,
                      BeDiagnostics* diagnostics) {
    if (law.dimension != d)
        throw std::invalid_argument("be_classify: law dimension mismatch");
    if (!(lambda > 0.0))
        throw std::invalid_argument("be_classify: lambda must be positive");
    if (!law.is_pure_power() && law.r_max > std::exp(-2.0) * (1.0 + 1e-12))
        throw std::invalid_argument(
            "be_classify: log-perturbed law is not a nonnegative integrable "
            "measure above r = e^-2");

    constexpr int kGridSize = 40;
    constexpr int kFitSteps = 10;
    constexpr double kMargin = 0.02;
    const double vd = unit_ball_volume(d);
    const double rate = lambda * vd;

    std::vector<double> grid_u(kGridSize), log_f(kGridSize), log_s(kGridSize);
    for (int j = 1; j <= kGridSize; ++j) {
        const double u = std::ldexp(1.0, -j);
        const double g = rate * necessary_exponent(law, u);
        const double h = rate * sufficient_exponent(law, u, d);
        grid_u[j - 1] = u;
        log_f[j - 1] = (d - 1) * std::log(u) + g;
        log_s[j - 1] = d * std::log(u) + h;
    }

    std::vector<double> local_f(kGridSize - 1), local_s(kGridSize - 1);
    constexpr double kLog2 = 0.6931471805599453;
    for (int j = 0; j + 1 < kGridSize; ++j) {
        local_f[j] = (log_f[j] - log_f[j + 1]) / kLog2;
        local_s[j] = (log_s[j] - log_s[j + 1]) / kLog2;
    }

    double fit_f = 0.0, fit_s = 0.0;
    for (int j = kGridSize - 1 - kFitSteps; j < kGridSize - 1; ++j) {
        fit_f += local_f[j];
        fit_s += local_s[j];
    }
    fit_f /= kFitSteps;
    fit_s /= kFitSteps;

    if (diagnostics) {
        diagnostics->grid_u = grid_u;
        diagnostics->local_exponent_f = local_f;
        diagnostics->local_exponent_s = local_s;
        diagnostics->fitted_exponent_f = fit_f;
        diagnostics->fitted_exponent_s = fit_s;
        diagnostics->margin = kMargin;
    }

    // s(u) -> infinity as u -> 0 iff its exponent is negative: empty phase.
    if (fit_s <= -kMargin) return BeVerdict::Empty;
    // The integral of f converges iff the exponent exceeds -1, which negates
    // the necessary condition for emptiness.
    if (fit_f >= -1.0 + kMargin) return BeVerdict::NonEmpty;
    return BeVerdict::Inconclusive;
}

const char* be_verdict_name(BeVerdict v) {
    switch (v) {
        case BeVerdict::Empty: return "Empty";
        case BeVerdict::NonEmpty: return "NonEmpty";
        case BeVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

} // namespace vacancy

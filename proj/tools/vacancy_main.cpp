// Experiment runner for the scale-invariant grain soup models: exact
// formula tables, Monte Carlo sweeps, the emptiness classifier, coupling
// checks and raw soup dumps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vacancy/coverage.hpp"
#include "vacancy/estimators.hpp"
#include "vacancy/io.hpp"
#include "vacancy/measure.hpp"
#include "vacancy/parallel.hpp"
#include "vacancy/rng.hpp"
#include "vacancy/soup.hpp"

namespace {

using namespace vacancy;

struct RunConfig {
    std::string model = "box";
    int dim = 1;
    double lambda = 1.0;
    std::vector<int> levels = {2};
    std::int64_t replicates = 1000;
    std::uint64_t seed = 1;
    int depth_cap = 10;
    std::string output;
    std::string format = "csv";
    int workers = 0;
    double couple = 0.0;
    std::string law = "power";
};

ModelKind parse_model(const std::string& name) {
    if (name == "ball") return ModelKind::Ball;
    if (name == "box") return ModelKind::Box;
    throw std::invalid_argument("unknown model '" + name + "' (expected ball|box)");
}

RadiusLaw parse_law(const std::string& name, int d) {
    if (name == "power") return RadiusLaw::pure_power(d);
    if (name == "logplus") return RadiusLaw::log_perturbed(d, +1);
    if (name == "logminus") return RadiusLaw::log_perturbed(d, -1);
    throw std::invalid_argument("unknown law '" + name +
                                "' (expected power|logplus|logminus)");
}

// Flags override the JSON config file, which overrides defaults; the
// config is applied before CLI11 parses the command line.
void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("model")) cfg.model = j["model"].get<std::string>();
    if (j.contains("dim")) cfg.dim = j["dim"].get<int>();
    if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
    if (j.contains("levels")) cfg.levels = j["levels"].get<std::vector<int>>();
    if (j.contains("replicates")) cfg.replicates = j["replicates"].get<std::int64_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("depth_cap")) cfg.depth_cap = j["depth_cap"].get<int>();
    if (j.contains("output")) cfg.output = j["output"].get<std::string>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (j.contains("couple")) cfg.couple = j["couple"].get<double>();
    if (j.contains("law")) cfg.law = j["law"].get<std::string>();
}

void emit_rows(const RunConfig& cfg, const std::vector<SweepRow>& rows) {
    std::ostringstream text;
    if (cfg.format == "csv") write_csv(text, rows);
    else if (cfg.format == "json") write_json(text, rows);
    else throw std::invalid_argument("unknown format '" + cfg.format + "'");

    if (cfg.output.empty()) {
        std::cout << text.str();
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + cfg.output);
    out << text.str();
    out.flush();
    if (!out) {
        out.close();
        std::remove(cfg.output.c_str());
        throw std::runtime_error("failed writing output file " + cfg.output);
    }
}

SweepRow base_row(const RunConfig& cfg, int n, std::string statistic,
                  double value, double stderr_ = 0.0,
                  std::int64_t replicates = 0) {
    SweepRow row;
    row.model = cfg.model;
    row.d = cfg.dim;
    row.lambda = cfg.lambda;
    row.n = n;
    row.statistic = std::move(statistic);
    row.value = value;
    row.stderr_ = stderr_;
    row.replicates = replicates;
    row.seed = cfg.seed;
    row.depth_cap = cfg.depth_cap;
    return row;
}

int cmd_exact(const RunConfig& cfg) {
    const ModelKind model = parse_model(cfg.model);
    std::vector<SweepRow> rows;
    for (const int n : cfg.levels) {
        bool single_ok = true;
        double single = 0.0;
        try {
            single = single_cover_exponent(model, n, cfg.dim);
        } catch (const std::invalid_argument& e) {
            single_ok = false;
            std::cerr << "exact: skipping single_cover_exponent at n=" << n
                      << ": " << e.what() << '\n';
        }
        if (single_ok) {
            rows.push_back(base_row(cfg, n, "single_cover_exponent", single));
            rows.push_back(base_row(cfg, n, "p_single_uncovered",
                                    std::exp(-cfg.lambda * single)));
        }

        if (model != ModelKind::Box) {
            std::cerr << "exact: untouched/moment closed forms exist only for "
                         "the box model; skipping for n=" << n << '\n';
            continue;
        }
        const IntensitySpec spec = IntensitySpec::make(model, cfg.dim, cfg.lambda);
        const double exponent = untouched_exponent_box(n, cfg.dim);
        rows.push_back(base_row(cfg, n, "untouched_exponent", exponent));
        rows.push_back(base_row(cfg, n, "p_untouched",
                                std::exp(-cfg.lambda * exponent)));
        rows.push_back(base_row(cfg, n, "sandwich_lower",
                                std::exp(-cfg.lambda * std::pow(2.0, cfg.dim)) *
                                    std::pow(n, -cfg.lambda)));
        rows.push_back(base_row(cfg, n, "sandwich_upper", std::pow(n, -cfg.lambda)));
        rows.push_back(base_row(cfg, n, "mn_mean_exact",
                                exact_first_moment_mn(spec, n)));
        try {
            rows.push_back(base_row(cfg, n, "mn_second_moment_exact",
                                    exact_second_moment_mn(spec, n)));
            rows.push_back(base_row(cfg, n, "pz_lower_bound",
                                    paley_zygmund_lower(spec, n)));
        } catch (const std::runtime_error& e) {
            std::cerr << "exact: skipping second moment at n=" << n << ": "
                      << e.what() << '\n';
        }
    }
    emit_rows(cfg, rows);
    return 0;
}

struct CoupleStats {
    double subset_fraction = 0.0;
    double mn_monotone_fraction = 0.0;
    double lo_monotone_fraction = 0.0;
};

CoupleStats couple_stats(const IntensitySpec& spec, int n,
                         const RunConfig& cfg) {
    const Window window = Window::unit(cfg.dim);
    const std::uint64_t level_seed = derive_seed(cfg.seed, "level", n);
    const std::int64_t r = cfg.replicates;
    std::vector<std::uint8_t> subset_ok(r), mn_ok(r), lo_ok(r);
    parallel_for_index(r, cfg.workers, [&](std::int64_t i) {
        const std::uint64_t rep_seed =
            derive_seed(level_seed, "replicate", static_cast<std::uint64_t>(i));
        const SoupSample soup = sample_soup(spec, window, n, rep_seed);
        const SoupSample thinned =
            thin_to_lambda(soup, cfg.couple, derive_seed(rep_seed, "thin", 0));

        bool subset = thinned.grains.size() <= soup.grains.size();
        std::size_t j = 0;
        for (const Grain& g : thinned.grains) {
            while (j < soup.grains.size() &&
                   !(soup.grains[j].center == g.center &&
                     soup.grains[j].radius == g.radius))
                ++j;
            if (j == soup.grains.size()) {
                subset = false;
                break;
            }
            ++j;
        }

        const CoverageReport full = coverage_report(soup, n, cfg.depth_cap);
        const CoverageReport thin = coverage_report(thinned, n, cfg.depth_cap);
        subset_ok[static_cast<std::size_t>(i)] = subset ? 1 : 0;
        mn_ok[static_cast<std::size_t>(i)] =
            thin.untouched_count >= full.untouched_count ? 1 : 0;
        lo_ok[static_cast<std::size_t>(i)] =
            thin.covering_lo >= full.covering_lo ? 1 : 0;
    });
    auto fraction = [r](const std::vector<std::uint8_t>& v) {
        std::int64_t ok = 0;
        for (const std::uint8_t b : v) ok += b;
        return static_cast<double>(ok) / static_cast<double>(r);
    };
    return {fraction(subset_ok), fraction(mn_ok), fraction(lo_ok)};
}

void append_couple_rows(const RunConfig& cfg, const IntensitySpec& spec, int n,
                        std::vector<SweepRow>& rows) {
    const CoupleStats stats = couple_stats(spec, n, cfg);
    rows.push_back(base_row(cfg, n, "couple_subset_fraction",
                            stats.subset_fraction, 0.0, cfg.replicates));
    rows.push_back(base_row(cfg, n, "couple_mn_monotone_fraction",
                            stats.mn_monotone_fraction, 0.0, cfg.replicates));
    rows.push_back(base_row(cfg, n, "couple_lo_monotone_fraction",
                            stats.lo_monotone_fraction, 0.0, cfg.replicates));
}

int cmd_simulate(const RunConfig& cfg) {
    const ModelKind model = parse_model(cfg.model);
    const IntensitySpec spec = IntensitySpec::make(model, cfg.dim, cfg.lambda);
    if (cfg.couple != 0.0 &&
        (!(cfg.couple > 0.0) || !(cfg.couple <= cfg.lambda)))
        throw std::invalid_argument("--couple must satisfy 0 < couple <= lambda");

    const std::vector<MomentReport> reports =
        mc_experiment(spec, Window::unit(cfg.dim), cfg.levels, cfg.replicates,
                      cfg.depth_cap, cfg.seed, cfg.workers);

    std::vector<SweepRow> rows;
    for (const MomentReport& rep : reports) {
        const int n = rep.level;
        auto mc = [&](const char* name, const McStat& st) {
            rows.push_back(base_row(cfg, n, name, st.mean, st.stderr_,
                                    rep.replicates));
        };
        mc("mn_mean", rep.mc_mean_mn);
        mc("mn_second_moment", rep.mc_second_moment_mn);
        mc("mn_survival", rep.mc_survival_mn);
        mc("Mn_mean", rep.mc_mean_Mn);
        mc("covering_lo_mean", rep.mc_covering_lo);
        mc("covering_hi_mean", rep.mc_covering_hi);
        mc("undetermined_mean", rep.mc_undetermined);
        if (rep.exact_mean_mn)
            rows.push_back(base_row(cfg, n, "mn_mean_exact", *rep.exact_mean_mn));
        if (rep.exact_second_moment_mn)
            rows.push_back(base_row(cfg, n, "mn_second_moment_exact",
                                    *rep.exact_second_moment_mn));
        if (rep.pz_lower_bound)
            rows.push_back(base_row(cfg, n, "pz_lower_bound", *rep.pz_lower_bound));
        if (cfg.couple > 0.0) append_couple_rows(cfg, spec, n, rows);
    }
    emit_rows(cfg, rows);
    return 0;
}

int cmd_be(const RunConfig& cfg) {
    const RadiusLaw law = parse_law(cfg.law, cfg.dim);
    BeDiagnostics diag;
    const BeVerdict verdict = be_classify(law, cfg.lambda, cfg.dim, &diag);
    std::cout << "verdict " << be_verdict_name(verdict) << '\n'
              << "fitted_exponent_f " << format_g17(diag.fitted_exponent_f) << '\n'
              << "fitted_exponent_s " << format_g17(diag.fitted_exponent_s) << '\n'
              << "margin " << format_g17(diag.margin) << '\n';
    return 0;
}

int cmd_couple_check(const RunConfig& cfg) {
    const ModelKind model = parse_model(cfg.model);
    const IntensitySpec spec = IntensitySpec::make(model, cfg.dim, cfg.lambda);
    if (!(cfg.couple > 0.0) || !(cfg.couple <= cfg.lambda))
        throw std::invalid_argument("couple-check needs 0 < --couple <= lambda");
    std::vector<SweepRow> rows;
    for (const int n : cfg.levels) append_couple_rows(cfg, spec, n, rows);
    emit_rows(cfg, rows);
    return 0;
}

int cmd_soup_dump(const RunConfig& cfg) {
    const ModelKind model = parse_model(cfg.model);
    const IntensitySpec spec = IntensitySpec::make(model, cfg.dim, cfg.lambda);
    if (cfg.levels.size() != 1)
        throw std::invalid_argument("soup-dump wants exactly one level");
    const SoupSample soup =
        sample_soup(spec, Window::unit(cfg.dim), cfg.levels.front(), cfg.seed);

    std::ostringstream text;
    write_soup(text, soup);
    if (cfg.output.empty()) {
        std::cout << text.str();
        return 0;
    }
    std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + cfg.output);
    out << text.str();
    out.flush();
    if (!out) {
        out.close();
        std::remove(cfg.output.c_str());
        throw std::runtime_error("failed writing output file " + cfg.output);
    }
    return 0;
}

void add_common_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--model", cfg.model, "ball|box");
    sub->add_option("--dim", cfg.dim, "spatial dimension d")
        ->check(CLI::Range(1, kMaxDim));
    sub->add_option("--lambda", cfg.lambda, "rate multiplier");
    sub->add_option("--levels", cfg.levels, "resolution levels n")
        ->delimiter(',');
    sub->add_option("--replicates", cfg.replicates, "Monte Carlo replicates");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--depth-cap", cfg.depth_cap,
                    "subdivision levels beyond n for covering bounds");
    sub->add_option("--output", cfg.output, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "csv|json");
    sub->add_option("--workers", cfg.workers,
                    "worker threads (0 = available parallelism)");
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;

    // A config file must be applied before the flag parse so that flags win.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string_view(argv[i]) == "--config") {
            try {
                apply_config_file(cfg, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << '\n';
                return 1;
            }
        }
    }

    CLI::App app{"scale-invariant Poisson grain soups: exact formulas, "
                 "Monte Carlo coverage statistics, emptiness classifier"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override)");

    CLI::App* exact = app.add_subcommand("exact", "exact exponent/moment table");
    add_common_options(exact, cfg);
    exact->add_option("--config", config_path, "JSON config file");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo sweep");
    add_common_options(simulate, cfg);
    simulate->add_option("--couple", cfg.couple,
                         "also thin each replicate to this rate and report "
                         "coupling monotonicity");
    simulate->add_option("--config", config_path, "JSON config file");

    CLI::App* be = app.add_subcommand("be", "emptiness verdict for a radius law");
    be->add_option("--law", cfg.law, "power|logplus|logminus");
    be->add_option("--dim", cfg.dim, "spatial dimension d")
        ->check(CLI::Range(1, kMaxDim));
    be->add_option("--lambda", cfg.lambda, "rate multiplier");
    be->add_option("--config", config_path, "JSON config file");

    CLI::App* couple = app.add_subcommand("couple-check",
                                          "thinning coupling monotonicity");
    add_common_options(couple, cfg);
    couple->add_option("--couple", cfg.couple, "thinned rate (required)")
        ->required();
    couple->add_option("--config", config_path, "JSON config file");

    CLI::App* dump = app.add_subcommand("soup-dump", "emit one sampled soup");
    add_common_options(dump, cfg);
    dump->add_option("--config", config_path, "JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (exact->parsed()) return cmd_exact(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (be->parsed()) return cmd_be(cfg);
        if (couple->parsed()) return cmd_couple_check(cfg);
        if (dump->parsed()) return cmd_soup_dump(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

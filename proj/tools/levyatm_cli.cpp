// Batch front-end: price curves, first-order predictions and verification reports.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numeric failure,
// 4 assumptions of the expansion violated (without --force), 5 a verification check failed.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "levyatm/config.hpp"
#include "levyatm/errors.hpp"
#include "levyatm/io.hpp"
#include "levyatm/pricing.hpp"
#include "levyatm/verify.hpp"

using namespace levyatm;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kConfig = 2, kNumeric = 3, kAssumption = 4, kCheckFailed = 5;

const std::vector<std::string> kDefaultChecks = {"assumptions", "esscher", "vratio", "gamma_star", "concentration"};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool is_toy(const RunConfig& cfg) { return cfg.model.preset == "toy_log"; }

AsymptoticSetup setup_for(const RunConfig& cfg, const LevyModel& model) {
    const std::string kind = cfg.scaling.empty() ? (is_toy(cfg) ? "closed_form" : "maller_mason") : cfg.scaling;
    if (kind == "closed_form" && !is_toy(cfg)) throw ConfigError("closed_form scaling exists only for toy_log");
    auto s = asymptotic_setup(model, kind == "closed_form");
    if (kind == "debruijn")
        s.scaling = debruijn_scaling(ell_from_probes(s.fit), s.scaling.alpha, *s.scaling.lambda_const);
    return s;
}

std::string curve_csv(const PriceCurve& c, const std::string& hash) {
    std::ostringstream os;
    write_csv(os, c, hash);
    return os.str();
}

void write_manifest(const RunConfig& cfg, std::chrono::steady_clock::time_point t0,
                    std::vector<std::string> outputs, json extra = json::object()) {
    auto m = run_manifest(cfg, seconds_since(t0), outputs);
    for (auto& [k, v] : extra.items()) m[k] = v;
    write_output(cfg.out_dir, "manifest.json", m.dump(2) + "\n");
}

int cmd_price(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto model = build_model(cfg.model);
    const auto grid = maturity_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.per_decade);
    CurveOptions opts;
    opts.mc_paths = cfg.mc_paths;
    opts.seed = cfg.seed;
    json extra = json::object();
    if (model.sigma > 0.0) {
        AsymptoticInputs in;
        in.model_class = ModelClass::with_brownian;
        in.sigma = model.sigma;
        opts.asymptotics = in;
    } else if (!model.jumps.empty()) {
        const auto s = setup_for(cfg, model);
        const auto reports = check_assumptions(model);
        AsymptoticInputs in;
        in.scaling = s.scaling;
        in.law = s.law;
        in.assumptions = assumption_summary(reports);
        in.force = true;  // prices are always written; the manifest records the assumption status
        opts.asymptotics = in;
        extra["assumptions"] = to_json(reports);
    }
    const auto curve = price_curve(model, grid, opts);
    const auto csv = write_output(cfg.out_dir, "price_curve.csv", curve_csv(curve, config_hash(cfg)));
    write_manifest(cfg, t0, {csv}, extra);
    std::cout << "wrote " << csv << '\n';
    return kOk;
}

int cmd_asymptotics(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto model = build_model(cfg.model);
    const auto grid = maturity_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.per_decade);
    const std::string hash = config_hash(cfg);
    AsymptoticInputs in;
    json summary = {{"config_hash", hash}};
    std::vector<double> B(grid.size());
    if (model.sigma > 0.0) {
        in.model_class = ModelClass::with_brownian;
        in.sigma = model.sigma;
        for (std::size_t i = 0; i < grid.size(); ++i) B[i] = std::sqrt(grid[i]);
        summary["E_Z_plus"] = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    } else {
        const auto reports = check_assumptions(model);
        std::vector<std::string> failing;
        for (const auto& r : reports)
            if (!r.pass) failing.push_back(r.check_name);
        summary["assumptions"] = to_json(reports);
        summary["failing_assumptions"] = failing;
        summary["forced"] = cfg.force && !failing.empty();
        if (!failing.empty() && !cfg.force) {
            write_output(cfg.out_dir, "asymptotics.json", summary.dump(2) + "\n");
            std::cerr << "assumption violated:";
            for (const auto& f : failing) std::cerr << ' ' << f;
            std::cerr << " (use --force to continue)\n";
            return kAssumption;
        }
        const auto s = setup_for(cfg, model);
        in.scaling = s.scaling;
        in.law = s.law;
        in.assumptions = assumption_summary(reports);
        in.force = cfg.force;
        for (std::size_t i = 0; i < grid.size(); ++i) B[i] = s.scaling(grid[i]);
        summary["E_Z_plus"] = expected_positive_part(s.law);
        summary["law"] = {{"alpha", s.law.alpha}, {"c_alpha", s.law.c_alpha}, {"p_plus", s.law.p_plus}};
        summary["scaling"] = {{"kind", to_string(s.scaling.kind)}, {"lambda", *s.scaling.lambda_const}};
        summary["alpha_hat"] = s.fit.alpha_hat;
    }
    in.force = true;  // gating already handled above
    summary["model_class"] = to_string(in.model_class);
    const auto pred = predict_first_order(in, grid);
    const auto ivol = predict_implied_vol(in, grid);
    std::ostringstream os;
    os << "# config_hash " << hash << "\nt,B_t,prediction,ivol_prediction\n";
    os.precision(17);
    for (std::size_t i = 0; i < grid.size(); ++i) os << grid[i] << ',' << B[i] << ',' << pred[i] << ',' << ivol[i] << '\n';
    const auto csv = write_output(cfg.out_dir, "asymptotics.csv", os.str());
    const auto js = write_output(cfg.out_dir, "asymptotics.json", summary.dump(2) + "\n");
    write_manifest(cfg, t0, {csv, js});
    std::cout << "wrote " << csv << " and " << js << '\n';
    return kOk;
}

VerificationReport failed(const std::string& name, const std::exception& e) {
    VerificationReport r;
    r.check_name = name;
    r.pass = false;
    r.notes = std::string("error: ") + e.what();
    return r;
}

int cmd_verify(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto model = build_model(cfg.model);
    const auto checks = cfg.checks.value_or(kDefaultChecks);
    std::vector<VerificationReport> reports;
    for (const auto& name : checks) {
        try {
            if (name == "assumptions") {
                for (auto& r : check_assumptions(model)) reports.push_back(std::move(r));
            } else if (name == "esscher") {
                reports.push_back(check_esscher_invariance(model));
            } else if (name == "vratio") {
                reports.push_back(check_vratio(model, cfg.vratio_lo, cfg.vratio_hi));
            } else if (name == "gamma_star") {
                reports.push_back(check_gamma_star_integrability(model, 1.0));
            } else if (name == "concentration") {
                const auto pairs = admissible_pairs(model, cfg.concentration_pairs, cfg.seed);
                reports.push_back(check_concentration(model, pairs, std::nullopt, cfg.concentration_paths, cfg.seed));
            } else if (name == "convergence") {
                const auto s = setup_for(cfg, model);
                ConvergenceOptions co;
                co.expect_log_correction = is_toy(cfg);
                const auto grid = maturity_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.per_decade);
                reports.push_back(convergence_study(model, grid, s.scaling, s.law, co).report);
            } else {
                throw ConfigError("unknown check '" + name + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            reports.push_back(failed(name, e));
        }
    }
    print_report_table(std::cout, reports);
    const auto js = write_output(cfg.out_dir, "reports.json", to_json(reports).dump(2) + "\n");
    write_manifest(cfg, t0, {js});
    for (const auto& r : reports)
        if (!r.pass) return kCheckFailed;
    return kOk;
}

int cmd_compare(const std::string& a, const std::string& b) {
    std::ifstream fa(a), fb(b);
    if (!fa || !fb) throw ConfigError("cannot open the curves to compare");
    const double d = compare_curves(read_curve_csv(fa), read_curve_csv(fb));
    std::cout << "max relative difference of exact prices: " << d << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Small-time ATM call prices of exponential Levy models"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, preset, checks;
    std::optional<double> alpha, sigma, t_lo, t_hi;
    std::optional<int> ppd;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> mc_paths;
    std::string out_dir;
    bool force = false;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--preset", preset, "black_scholes, toy_log, symmetric_stable, oscillatory or custom");
    app.add_option("--alpha", alpha, "tail index of the preset");
    app.add_option("--sigma", sigma, "Brownian volatility");
    app.add_option("--t-lo", t_lo, "smallest maturity");
    app.add_option("--t-hi", t_hi, "largest maturity");
    app.add_option("--ppd", ppd, "maturities per decade");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--mc-paths", mc_paths, "Monte Carlo paths per maturity (0 disables)");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--force", force, "continue when assumptions fail");
    app.add_option("--checks", checks, "comma-separated checks for verify (empty runs none)");

    auto* price = app.add_subcommand("price", "exact ATM prices on the maturity grid");
    auto* asym = app.add_subcommand("asymptotics", "B_t, E*[Z+] and first-order predictions");
    auto* verify = app.add_subcommand("verify", "numerical checks of the model hypotheses");
    auto* compare = app.add_subcommand("compare", "compare two price curves with matching config hashes");
    std::vector<std::string> compare_files;
    compare->add_option("files", compare_files, "two CSV files")->expected(2)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfig;
    }

    try {
        if (compare->parsed()) return cmd_compare(compare_files[0], compare_files[1]);
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (!preset.empty()) cfg.model.preset = preset;
        if (alpha) cfg.model.alpha = *alpha;
        if (sigma) cfg.model.sigma = *sigma;
        if (t_lo) cfg.grid.lo = *t_lo;
        if (t_hi) cfg.grid.hi = *t_hi;
        if (ppd) cfg.grid.per_decade = *ppd;
        if (seed) cfg.seed = *seed;
        if (mc_paths) cfg.mc_paths = *mc_paths;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (force) cfg.force = true;
        if (app.count("--checks")) {
            std::vector<std::string> list;
            std::stringstream ss(checks);
            for (std::string item; std::getline(ss, item, ',');)
                if (!item.empty()) list.push_back(item);
            cfg.checks = list;
        }
        cfg.command = price->parsed() ? "price" : asym->parsed() ? "asymptotics" : "verify";
        validate(cfg);
        if (price->parsed()) return cmd_price(cfg);
        if (asym->parsed()) return cmd_asymptotics(cfg);
        return cmd_verify(cfg);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kConfig;
    } catch (const AssumptionViolation& e) {
        std::cerr << "assumption violated: " << e.what() << '\n';
        return kAssumption;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    }
}

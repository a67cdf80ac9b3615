// dce: resonance tables, numeric validation and curve export for the cavity model.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dce/errors.hpp"
#include "dce/sweep.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNoSolution = 3;
constexpr int kIntegrationFailure = 4;

struct Common {
    std::string config;
    std::string out;
    int threads = 1;
    std::optional<double> tol_rel, tol_abs, threshold;
};

void add_common(CLI::App* app, Common& c, bool needs_config) {
    auto* opt = app->add_option("--config", c.config, "sweep config file (key = value)");
    if (needs_config) opt->required();
    app->add_option("--out", c.out, "output path");
    app->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256));
    app->add_option("--tol-rel", c.tol_rel, "integrator relative tolerance");
    app->add_option("--tol-abs", c.tol_abs, "integrator absolute tolerance");
    app->add_option("--validity-threshold", c.threshold, "long-wavelength cutoff on L*Omega_g (default 1e-3)");
}

dce::SweepConfig load(const Common& c) {
    auto cfg = dce::SweepConfig::load(c.config);
    if (c.tol_rel) cfg.tol_rel = *c.tol_rel;
    if (c.tol_abs) cfg.tol_abs = *c.tol_abs;
    if (c.threshold) cfg.validity_threshold = *c.threshold;
    if (!c.out.empty()) cfg.output = c.out;
    cfg.validate();
    return cfg;
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw dce::ConfigError("cannot write '" + p.string() + "'");
    f << text;
}

void emit_table(const dce::SweepConfig& cfg, const std::string& command, const std::string& csv,
                const std::vector<dce::RunRecord>& rows) {
    if (cfg.output == "-") {
        std::cout << csv;
        return;
    }
    fs::path p(cfg.output);
    write_file(p, csv);
    write_file(fs::path(p).replace_extension(".json"), dce::records_json(command, cfg, rows));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamical Casimir particle creation with a gravitational-wave perturbed cavity"};
    app.require_subcommand(1);

    Common rates_opt, validate_opt, figure_opt, tune_opt;
    bool strict = false;
    auto* rates = app.add_subcommand("rates", "analytic growth-rate table over the sweep grid");
    add_common(rates, rates_opt, true);
    auto* validate = app.add_subcommand("validate", "numeric Bogoliubov evolution against sinh^2(chi T)");
    add_common(validate, validate_opt, true);
    validate->add_flag("--strict", strict, "exit 4 if any row fails to integrate");
    auto* figure = app.add_subcommand("figure", "chi/(eps kappa) curves, one CSV per Omega_g");
    add_common(figure, figure_opt, true);

    auto* tune = app.add_subcommand("tune", "cubic cavity length for one resonance");
    add_common(tune, tune_opt, false);
    std::string condition = "mechanical", mode_k = "2,1,2", mode_j;
    dce::TuneArgs targs;
    tune->add_option("--condition", condition, "mechanical|gw|sideband_plus|sideband_minus|sum_g_plus_c|"
                                               "sum_g_minus_c|sum_c_minus_g");
    tune->add_option("--mode", mode_k, "target mode nx,ny,nz");
    tune->add_option("--mode-j", mode_j, "partner mode for sum conditions");
    tune->add_option("--omega-c", targs.Omega_c, "mirror angular frequency");
    tune->add_option("--omega-g", targs.Omega_g, "wave angular frequency");
    tune->add_option("--epsilon", targs.epsilon, "mirror amplitude");
    tune->add_option("--h-plus", targs.h_plus, "plus strain");
    tune->add_option("--kappa", targs.kappa, "strain = kappa * Omega_g^2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (*rates) {
            auto cfg = load(rates_opt);
            auto rows = dce::cmd_rates(cfg, rates_opt.threads);
            emit_table(cfg, "rates", dce::rates_csv(rows), rows);
        } else if (*validate) {
            auto cfg = load(validate_opt);
            auto rows = dce::cmd_validate(cfg, validate_opt.threads);
            emit_table(cfg, "validate", dce::validate_csv(rows), rows);
            for (const auto& r : rows)
                if (r.status == "integration_failed") {
                    std::cerr << "integration failed at Omega_c=" << r.Omega_c << " Omega_g=" << r.Omega_g << "\n";
                    if (strict) return kIntegrationFailure;
                }
        } else if (*figure) {
            auto cfg = load(figure_opt);
            if (cfg.output == "-") throw dce::ConfigError("figure needs --out <directory>");
            auto data = dce::cmd_figure(cfg, figure_opt.threads);
            const fs::path dir(cfg.output);
            const std::string stem = "figure_" + dce::to_string(cfg.condition);
            for (std::size_t i = 0; i < data.curves.size(); ++i)
                write_file(dir / (stem + "_" + std::to_string(i) + ".csv"), dce::curve_csv(data.curves[i]));
            const auto summary = dce::summary_csv(data);
            write_file(dir / (stem + "_summary.csv"), summary);
            std::cout << summary;
        } else if (*tune) {
            auto r = dce::resonance_from_string(condition);
            if (!r) throw dce::ConfigError("unknown condition '" + condition + "'");
            targs.condition = *r;
            targs.mode_k = dce::parse_mode(mode_k);
            if (!mode_j.empty()) targs.mode_j = dce::parse_mode(mode_j);
            if (tune_opt.threshold) targs.validity_threshold = *tune_opt.threshold;
            const auto json = dce::cmd_tune(targs);
            if (tune_opt.out.empty() || tune_opt.out == "-") std::cout << json;
            else write_file(tune_opt.out, json);
        }
    } catch (const dce::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const dce::NoSolution& e) {
        std::cerr << "no solution: " << e.what() << "\n";
        return kNoSolution;
    } catch (const dce::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kOk;
}

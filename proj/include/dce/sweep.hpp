#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dce/bogoliubov.hpp"
#include "dce/resonance.hpp"

namespace dce {

enum class GridScale { Linear, Log };

// Parameters of one sweep. Text form is `key = value` lines with `#` comments;
// see serialize() for the canonical key order.
struct SweepConfig {
    Resonance condition = Resonance::Mechanical;
    ModeIndex mode_k{2, 1, 2};
    std::optional<ModeIndex> mode_j;
    double omega_c_min = 1.0;
    double omega_c_max = 1.0;
    int omega_c_count = 2;
    GridScale omega_c_scale = GridScale::Linear;
    std::vector<double> omega_g{0.0};
    std::optional<double> kappa;   // h_plus = kappa * Omega_g^2
    std::optional<double> h_plus;  // fixed strain otherwise
    double epsilon = 0.0;
    std::optional<double> T;
    std::optional<double> chi_T;
    double detune = 0.0;  // relative change of L after tuning (validate only)
    double tol_rel = 1e-10;
    double tol_abs = 1e-12;
    double max_step = 0.0;
    int n_max = 3;
    int samples = 200;
    std::string output = "-";
    double validity_threshold = kDefaultValidityThreshold;

    static SweepConfig parse(const std::string& text);  // throws ConfigError
    static SweepConfig load(const std::string& path);
    std::string serialize() const;
    void validate() const;

    std::vector<double> omega_c_grid() const;
    double strain(double Omega_g) const;
};

struct RunRecord {
    Resonance condition;
    ModeIndex mode_k;
    std::optional<ModeIndex> mode_j;
    double Omega_c = 0, Omega_g = 0, epsilon = 0, h_plus = 0;
    double L = 0, omega_k0 = 0, omega_j0 = 0;
    double chi = 0, T = 0, N_analytic = 0;
    double N_numeric = 0, N_numeric_j = 0, rel_dev = 0, numeric_rate = 0, unitarity_defect = 0;
    bool numeric = false;
    bool degenerate = false;
    ValidityFlags flags{false, false};
    std::string status = "ok";
    double wall_time = 0;
};

std::vector<RunRecord> cmd_rates(const SweepConfig& cfg, int threads = 1);
std::vector<RunRecord> cmd_validate(const SweepConfig& cfg, int threads = 1);

struct FigureCurve {
    double Omega_g;
    std::vector<double> Omega_c, L, chi_over_eps_kappa;
    std::vector<bool> valid;
};
struct FigureSummary {
    double Omega_g_low, Omega_g_high;
    int compared;
    int violations;
};
struct FigureData {
    std::vector<FigureCurve> curves;
    std::vector<FigureSummary> summary;
};
FigureData cmd_figure(const SweepConfig& cfg, int threads = 1);

struct TuneArgs {
    Resonance condition = Resonance::Mechanical;
    ModeIndex mode_k{2, 1, 2};
    std::optional<ModeIndex> mode_j;
    double Omega_c = 0, Omega_g = 0, epsilon = 0;
    std::optional<double> h_plus, kappa;
    double validity_threshold = kDefaultValidityThreshold;
};
// Throws NoSolution when the condition has no positive length.
std::string cmd_tune(const TuneArgs& args);

// Output helpers.
std::string rates_csv(const std::vector<RunRecord>& rows);
std::string validate_csv(const std::vector<RunRecord>& rows);
std::string records_json(const std::string& command, const SweepConfig& cfg, const std::vector<RunRecord>& rows);
std::string curve_csv(const FigureCurve& c);
std::string summary_csv(const FigureData& d);

std::string format_mode(const ModeIndex& m);
ModeIndex parse_mode(const std::string& s);

}  // namespace dce

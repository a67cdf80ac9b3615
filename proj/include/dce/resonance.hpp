#pragma once

#include <complex>
#include <optional>
#include <string>

#include "dce/cavity.hpp"

namespace dce {

enum class Resonance {
    Mechanical,     // 2w = Wc
    GwOnly,         // 2w = Wg
    SidebandPlus,   // 2w = Wc + Wg
    SidebandMinus,  // 2w = |Wc - Wg|
    SumGPlusC,      // wk + wj = Wg + Wc
    SumGMinusC,     // wk + wj = Wg - Wc
    SumCMinusG,     // wk + wj = Wc - Wg
};

bool is_two_mode(Resonance r);
bool is_gw_origin(Resonance r);
std::string to_string(Resonance r);
std::optional<Resonance> resonance_from_string(const std::string& s);

// Right-hand side of the resonance equation; may be <= 0 (no solution).
double resonance_drive(Resonance r, double Omega_c, double Omega_g);

struct ResonanceCondition {
    Resonance kind;
    ModeIndex k;
    std::optional<ModeIndex> j;

    // Throws ConfigError on wrong arity or when the pair differs in nx, ny.
    ResonanceCondition(Resonance kind, ModeIndex k, std::optional<ModeIndex> j = std::nullopt);

    // 2w_k for one mode, w_k + w_j for two.
    double mode_side(const CavityConfig& cfg) const;
};

// Throws NotOnResonance if the resonance equation misses by more than 1e-9
// relative, or if another active resonance is satisfied as well.
void require_on_resonance(const ResonanceCondition& c, const CavityConfig& cfg);

double chi_rate(const ResonanceCondition& c, const CavityConfig& cfg);

// GW-origin condition on a mode with kx^2 == ky^2.
bool is_degenerate(const ResonanceCondition& c, const CavityConfig& cfg);

double particle_number_analytic(double chi, double T);

struct Squeeze {
    double cosh_amp;
    double sinh_amp;
    double phase;
};
Squeeze squeeze_evolve(std::complex<double> g, bool same_mode, double T);

struct RwaCoupling {
    double g;
    bool two_mode;
    // rate entering sinh^2(rate T): g for a single mode, g/2 for a pair
    double rate() const { return two_mode ? 0.5 * g : g; }
};
RwaCoupling rwa_hamiltonian(const ResonanceCondition& c, const CavityConfig& cfg);

// Cubic cavity side length that puts the condition on resonance.
double tune_cavity_length(Resonance r, double Omega_c, double Omega_g, const ModeIndex& k,
                          const std::optional<ModeIndex>& j = std::nullopt);

CavityConfig cubic_cavity(double L, double epsilon, double Omega_c, double h_plus, double Omega_g);

struct ValidityFlags {
    bool long_wavelength_ok;
    bool weak_drive_ok;
};
inline constexpr double kDefaultValidityThreshold = 1e-3;
ValidityFlags validity_flags(const CavityConfig& cfg, double L, double threshold = kDefaultValidityThreshold);

double sideband_quality_factor(double Omega_c, double Omega_g);
double source_amplitude(double kappa, double Omega_g);

struct AmplificationResult {
    ResonanceCondition condition;
    double chi;
    bool degenerate;
    ValidityFlags flags;

    double N(double T) const { return particle_number_analytic(chi, T); }
};
AmplificationResult amplification(const ResonanceCondition& c, const CavityConfig& cfg,
                                  double threshold = kDefaultValidityThreshold);

}  // namespace dce

#include "dce/resonance.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "dce/errors.hpp"

namespace dce {

using std::numbers::pi;

namespace {

constexpr std::array kAll = {Resonance::Mechanical, Resonance::GwOnly,     Resonance::SidebandPlus,
                             Resonance::SidebandMinus, Resonance::SumGPlusC, Resonance::SumGMinusC,
                             Resonance::SumCMinusG};

constexpr double kResonanceTol = 1e-9;

bool active(Resonance r, const CavityConfig& cfg) {
    const bool mech = cfg.epsilon() > 0 && cfg.Omega_c() > 0;
    const bool gw = cfg.h_plus() > 0 && cfg.Omega_g() > 0;
    switch (r) {
        case Resonance::Mechanical: return mech;
        case Resonance::GwOnly: return gw;
        default: return mech && gw;
    }
}

double norm3(const ModeIndex& m) { return std::sqrt(double(m.nx * m.nx + m.ny * m.ny + m.nz * m.nz)); }

}  // namespace

bool is_two_mode(Resonance r) {
    return r == Resonance::SumGPlusC || r == Resonance::SumGMinusC || r == Resonance::SumCMinusG;
}

bool is_gw_origin(Resonance r) { return r != Resonance::Mechanical; }

std::string to_string(Resonance r) {
    switch (r) {
        case Resonance::Mechanical: return "mechanical";
        case Resonance::GwOnly: return "gw";
        case Resonance::SidebandPlus: return "sideband_plus";
        case Resonance::SidebandMinus: return "sideband_minus";
        case Resonance::SumGPlusC: return "sum_g_plus_c";
        case Resonance::SumGMinusC: return "sum_g_minus_c";
        case Resonance::SumCMinusG: return "sum_c_minus_g";
    }
    return "unknown";
}

std::optional<Resonance> resonance_from_string(const std::string& s) {
    for (auto r : kAll)
        if (to_string(r) == s) return r;
    return std::nullopt;
}

double resonance_drive(Resonance r, double Wc, double Wg) {
    switch (r) {
        case Resonance::Mechanical: return Wc;
        case Resonance::GwOnly: return Wg;
        case Resonance::SidebandPlus: return Wc + Wg;
        case Resonance::SidebandMinus: return std::abs(Wc - Wg);
        case Resonance::SumGPlusC: return Wg + Wc;
        case Resonance::SumGMinusC: return Wg - Wc;
        case Resonance::SumCMinusG: return Wc - Wg;
    }
    return 0.0;
}

ResonanceCondition::ResonanceCondition(Resonance r, ModeIndex k_, std::optional<ModeIndex> j_)
    : kind(r), k(k_), j(j_) {
    if (is_two_mode(r)) {
        if (!j) throw ConfigError(to_string(r) + " needs two modes");
        if (j->nx != k.nx || j->ny != k.ny) throw ConfigError("paired modes must share nx and ny");
        if (*j == k) throw ConfigError("paired modes must differ");
    } else if (j) {
        throw ConfigError(to_string(r) + " takes a single mode");
    }
}

double ResonanceCondition::mode_side(const CavityConfig& cfg) const {
    const double wk = mode_frequencies(k, cfg).omega0;
    return j ? wk + mode_frequencies(*j, cfg).omega0 : 2.0 * wk;
}

void require_on_resonance(const ResonanceCondition& c, const CavityConfig& cfg) {
    const double lhs = c.mode_side(cfg);
    auto hits = [&](Resonance r) {
        const double rhs = resonance_drive(r, cfg.Omega_c(), cfg.Omega_g());
        return rhs > 0 && std::abs(lhs - rhs) <= kResonanceTol * lhs;
    };
    if (!hits(c.kind))
        throw NotOnResonance(to_string(c.kind) + ": drive frequency does not match the mode side to 1e-9");
    for (auto r : kAll) {
        if (r == c.kind || is_two_mode(r) != is_two_mode(c.kind) || !active(r, cfg)) continue;
        if (hits(r))
            throw NotOnResonance(to_string(c.kind) + " overlaps with " + to_string(r) +
                                 "; isolated resonances required");
    }
    // The mirror alone also pairs two modes at wk + wj = Wc.
    if (is_two_mode(c.kind) && c.kind != Resonance::Mechanical && active(Resonance::Mechanical, cfg) &&
        std::abs(lhs - cfg.Omega_c()) <= kResonanceTol * lhs)
        throw NotOnResonance(to_string(c.kind) + " overlaps with the mechanical pair resonance wk + wj = Wc");
}

bool is_degenerate(const ResonanceCondition& c, const CavityConfig& cfg) {
    if (!is_gw_origin(c.kind)) return false;
    auto f = mode_frequencies(c.k, cfg);
    return f.kx * f.kx == f.ky * f.ky;
}

double chi_rate(const ResonanceCondition& c, const CavityConfig& cfg) {
    require_on_resonance(c, cfg);
    const double eps = cfg.epsilon(), h = cfg.h_plus();
    const double Wc = cfg.Omega_c(), Wg = cfg.Omega_g();
    const auto fk = mode_frequencies(c.k, cfg);
    const double wk = fk.omega0;
    const double split = fk.kx * fk.kx - fk.ky * fk.ky;
    const double kz2 = fk.kz0 * fk.kz0;

    switch (c.kind) {
        case Resonance::Mechanical: return std::abs(kz2 * Wc * eps / (4.0 * wk * wk));
        case Resonance::GwOnly: return std::abs(h / 8.0 * Wg / (wk * wk) * split);
        case Resonance::SidebandPlus:
        case Resonance::SidebandMinus:
            return std::abs(eps * h / 8.0 * split * kz2 / (wk * wk * wk) * (Wc * Wc + Wg * Wg) / (Wc * Wg));
        default: break;
    }
    const auto fj = mode_frequencies(*c.j, cfg);
    const double wj = fj.omega0;
    const double prod = wk * wj;
    const double base = h * eps / (16.0 * prod) * (Wc / Wg) * split * fk.kz0 * fj.kz0 / std::sqrt(prod);
    double bracket = 0.0;
    switch (c.kind) {
        case Resonance::SumGPlusC: bracket = 1.0 + 0.5 * Wg * (Wg + Wc) / prod; break;
        case Resonance::SumGMinusC: bracket = 1.0 + 0.5 * Wg * (Wg - Wc) / prod; break;
        case Resonance::SumCMinusG: bracket = 1.0 - 0.5 * Wg * (Wc - Wg) / prod; break;
        default: break;
    }
    return std::abs(base * bracket);
}

double particle_number_analytic(double chi, double T) {
    if (T < 0) throw ConfigError("T must be >= 0");
    const double s = std::sinh(chi * T);
    return s * s;
}

Squeeze squeeze_evolve(std::complex<double> g, bool same_mode, double T) {
    const double r = same_mode ? std::abs(g) * T : 0.5 * std::abs(g) * T;
    return {std::cosh(r), std::sinh(r), std::arg(g)};
}

RwaCoupling rwa_hamiltonian(const ResonanceCondition& c, const CavityConfig& cfg) {
    require_on_resonance(c, cfg);
    if (!is_two_mode(c.kind)) return {chi_rate(c, cfg), false};
    // Two-mode couplings written with (wk + wj) in the bracket; equal to the
    // drive-frequency form on resonance.
    const double eps = cfg.epsilon(), h = cfg.h_plus();
    const double Wc = cfg.Omega_c(), Wg = cfg.Omega_g();
    const auto fk = mode_frequencies(c.k, cfg), fj = mode_frequencies(*c.j, cfg);
    const double prod = fk.omega0 * fj.omega0, sum = fk.omega0 + fj.omega0;
    const double split = fk.kx * fk.kx - fk.ky * fk.ky;
    const double sign = c.kind == Resonance::SumCMinusG ? -1.0 : 1.0;
    const double g = h * eps / (8.0 * prod) * (Wc / Wg) * fk.kz0 * fj.kz0 * split / std::sqrt(prod) *
                     (1.0 + sign * 0.5 * Wg * sum / prod);
    return {std::abs(g), true};
}

double tune_cavity_length(Resonance r, double Wc, double Wg, const ModeIndex& k, const std::optional<ModeIndex>& j) {
    ResonanceCondition cond(r, k, j);
    const double F = resonance_drive(r, Wc, Wg);
    if (!(F > 0) || !std::isfinite(F))
        throw NoSolution(to_string(r) + ": drive side " + std::to_string(F) + " admits no positive length");
    const double s = j ? norm3(k) + norm3(*j) : 2.0 * norm3(k);
    return pi * s / F;
}

CavityConfig cubic_cavity(double L, double epsilon, double Omega_c, double h_plus, double Omega_g) {
    CavityParams p;
    p.Lx = p.Ly = p.Lz0 = L;
    p.epsilon = epsilon;
    p.Omega_c = Omega_c;
    p.h_plus = h_plus;
    p.Omega_g = Omega_g;
    return CavityConfig(p);
}

ValidityFlags validity_flags(const CavityConfig& cfg, double L, double threshold) {
    return {L * cfg.Omega_g() < threshold,
            cfg.epsilon() < CavityConfig::kMaxStrain && cfg.h_plus() < CavityConfig::kMaxStrain};
}

double sideband_quality_factor(double Wc, double Wg) {
    if (!(Wg > 0)) throw ConfigError("sideband quality factor needs Omega_g > 0");
    return 2.0 * Wc / Wg;
}

double source_amplitude(double kappa, double Wg) {
    if (kappa < 0) throw ConfigError("kappa must be >= 0");
    return kappa * Wg * Wg;
}

AmplificationResult amplification(const ResonanceCondition& c, const CavityConfig& cfg, double threshold) {
    return {c, chi_rate(c, cfg), is_degenerate(c, cfg), validity_flags(cfg, cfg.Lz0(), threshold)};
}

}  // namespace dce

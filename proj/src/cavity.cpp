#include "dce/cavity.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dce/errors.hpp"
#include "dce/quadrature.hpp"

namespace dce {

using std::numbers::pi;

ModeIndex::ModeIndex(int x, int y, int z) : nx(x), ny(y), nz(z) {
    if (x < 1 || y < 1 || z < 1) {
        throw ConfigError("mode indices must be >= 1, got (" + std::to_string(x) + "," +
                          std::to_string(y) + "," + std::to_string(z) + ")");
    }
}

CavityConfig::CavityConfig(const CavityParams& p) : p_(p) {
    auto fin = [](double v) { return std::isfinite(v); };
    if (!fin(p.Lx) || !fin(p.Ly) || !fin(p.Lz0) || p.Lx <= 0 || p.Ly <= 0 || p.Lz0 <= 0)
        throw ConfigError("cavity lengths must be finite and > 0");
    if (!fin(p.epsilon) || p.epsilon < 0 || p.epsilon >= 1)
        throw ConfigError("epsilon must satisfy 0 <= epsilon < 1");
    if (!fin(p.h_plus) || !fin(p.h_cross) || p.h_plus < 0 || p.h_cross < 0 ||
        p.h_plus >= kMaxStrain || p.h_cross >= kMaxStrain)
        throw ConfigError("strains must satisfy 0 <= h < 0.1");
    if (!fin(p.Omega_c) || !fin(p.Omega_g) || p.Omega_c < 0 || p.Omega_g < 0)
        throw ConfigError("drive frequencies must be finite and >= 0");
    if (!fin(p.delta_g)) throw ConfigError("delta_g must be finite");
}

double mirror_position(const CavityConfig& cfg, double t) {
    return cfg.Lz0() * (1.0 + cfg.epsilon() * std::sin(cfg.Omega_c() * t));
}

double mirror_velocity(const CavityConfig& cfg, double t) {
    return cfg.Lz0() * cfg.epsilon() * cfg.Omega_c() * std::cos(cfg.Omega_c() * t);
}

double mirror_rate(const CavityConfig& cfg, double t) {
    const double e = cfg.epsilon(), w = cfg.Omega_c();
    return e * w * std::cos(w * t) / (1.0 + e * std::sin(w * t));
}

std::array<double, 3> wavenumbers(const ModeIndex& m, const CavityConfig& cfg, double t) {
    return {m.nx * pi / cfg.Lx(), m.ny * pi / cfg.Ly(), m.nz * pi / mirror_position(cfg, t)};
}

ModeFrequencies mode_frequencies(const ModeIndex& m, const CavityConfig& cfg) {
    ModeFrequencies f;
    f.kx = m.nx * pi / cfg.Lx();
    f.ky = m.ny * pi / cfg.Ly();
    f.kz0 = m.nz * pi / cfg.Lz0();
    f.omega0 = std::sqrt(f.kx * f.kx + f.ky * f.ky + f.kz0 * f.kz0);
    return f;
}

double omega_squared_instant(const ModeIndex& m, const CavityConfig& cfg, double t) {
    auto [kx, ky, kz] = wavenumbers(m, cfg, t);
    double w2 = kx * kx + ky * ky + kz * kz;
    if (cfg.h_plus() != 0.0)
        w2 += cfg.h_plus() * (kx * kx - ky * ky) * std::cos(cfg.Omega_g() * t + cfg.delta_g());
    if (!(w2 > 0.0)) throw NonPositiveFrequency("omega^2 <= 0 at t=" + std::to_string(t));
    return w2;
}

ExpansionWeights expansion_weights(const ModeIndex& m, const CavityConfig& cfg) {
    auto f = mode_frequencies(m, cfg);
    double w2 = f.omega0 * f.omega0;
    return {f.omega0, f.kz0 * f.kz0 / w2, (f.kx * f.kx - f.ky * f.ky) / w2};
}

DrivePhase::DrivePhase(const CavityConfig& cfg, double t)
    : sc(std::sin(cfg.Omega_c() * t)),
      cc(std::cos(cfg.Omega_c() * t)),
      sg(std::sin(cfg.Omega_g() * t)),
      cg(std::cos(cfg.Omega_g() * t)) {}

OmegaPair omega_from_weights(const ExpansionWeights& e, const CavityConfig& cfg, const DrivePhase& d) {
    const double eps = cfg.epsilon(), h = cfg.h_plus();
    const double Wc = cfg.Omega_c(), Wg = cfg.Omega_g();
    const double ab = e.a * e.b;
    double w = 1.0 - e.a * eps * d.sc + 0.5 * h * e.b * d.cg + 0.5 * eps * h * ab * d.sc * d.cg;
    double wd = -e.a * eps * Wc * d.cc - 0.5 * h * e.b * Wg * d.sg +
                0.5 * eps * h * ab * (Wc * d.cc * d.cg - Wg * d.sc * d.sg);
    return {e.omega0 * w, e.omega0 * wd};
}

double omega_expanded(const ModeIndex& m, const CavityConfig& cfg, double t) {
    return omega_from_weights(expansion_weights(m, cfg), cfg, DrivePhase(cfg, t)).w;
}

double omega_expanded_rate(const ModeIndex& m, const CavityConfig& cfg, double t) {
    return omega_from_weights(expansion_weights(m, cfg), cfg, DrivePhase(cfg, t)).wdot;
}

double theta_integrated(const ModeIndex& m, const CavityConfig& cfg, double t) {
    if (t < 0 || !std::isfinite(t)) throw ConfigError("theta_integrated: t must be finite and >= 0");
    if (t == 0.0) return 0.0;
    const auto e = expansion_weights(m, cfg);
    // Integrate only the deviation from omega0 so the constant part stays exact.
    auto dev = [&](double s) { return omega_from_weights(e, cfg, DrivePhase(cfg, s)).w - e.omega0; };
    const double fastest = std::max({cfg.Omega_c(), cfg.Omega_g(), 1e-300});
    const double span = 8.0 * pi / fastest;
    const long pieces = std::max(1L, static_cast<long>(std::ceil(t / span)));
    const double tol = 1e-10 * e.omega0 * t;
    double acc = 0.0;
    for (long i = 0; i < pieces; ++i) {
        double a = t * static_cast<double>(i) / pieces;
        double b = t * static_cast<double>(i + 1) / pieces;
        acc += quad::adaptive(dev, a, b, tol / pieces, 1e-13);
    }
    return e.omega0 * t + acc;
}

Strain gw_strain(const CavityConfig& cfg, double t) {
    const double ph = cfg.Omega_g() * t;
    return {cfg.h_plus() * std::cos(ph), cfg.h_cross() * std::cos(ph + cfg.delta_g())};
}

}  // namespace dce

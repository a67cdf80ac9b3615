#pragma once

#include <array>

namespace dce {

// Dirichlet mode label; every index must be >= 1.
struct ModeIndex {
    int nx = 1;
    int ny = 1;
    int nz = 1;

    ModeIndex() = default;
    ModeIndex(int x, int y, int z);

    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

struct CavityParams {
    double Lx = 1.0;
    double Ly = 1.0;
    double Lz0 = 1.0;
    double epsilon = 0.0;
    double Omega_c = 0.0;
    double h_plus = 0.0;
    double h_cross = 0.0;
    double Omega_g = 0.0;
    double delta_g = 0.0;
};

// Validated, immutable cavity + drive + wave description.
class CavityConfig {
public:
    static constexpr double kMaxStrain = 0.1;

    explicit CavityConfig(const CavityParams& p);

    const CavityParams& params() const { return p_; }
    double Lx() const { return p_.Lx; }
    double Ly() const { return p_.Ly; }
    double Lz0() const { return p_.Lz0; }
    double epsilon() const { return p_.epsilon; }
    double Omega_c() const { return p_.Omega_c; }
    double h_plus() const { return p_.h_plus; }
    double h_cross() const { return p_.h_cross; }
    double Omega_g() const { return p_.Omega_g; }
    double delta_g() const { return p_.delta_g; }

private:
    CavityParams p_;
};

struct ModeFrequencies {
    double omega0 = 0.0;
    double kx = 0.0;
    double ky = 0.0;
    double kz0 = 0.0;
};

struct Strain {
    double h11 = 0.0;
    double h12 = 0.0;
};

double mirror_position(const CavityConfig& cfg, double t);
double mirror_velocity(const CavityConfig& cfg, double t);

// Exact Ldot/L.
double mirror_rate(const CavityConfig& cfg, double t);

std::array<double, 3> wavenumbers(const ModeIndex& m, const CavityConfig& cfg, double t);
ModeFrequencies mode_frequencies(const ModeIndex& m, const CavityConfig& cfg);

// Throws NonPositiveFrequency if the perturbed omega^2 is not positive.
double omega_squared_instant(const ModeIndex& m, const CavityConfig& cfg, double t);

// Second-order (epsilon, h, epsilon*h) expansion of omega(t) with delta_g = 0,
// and its exact time derivative.
double omega_expanded(const ModeIndex& m, const CavityConfig& cfg, double t);
double omega_expanded_rate(const ModeIndex& m, const CavityConfig& cfg, double t);

// Integral of omega_expanded over [0, t]. Throws QuadratureFailure.
double theta_integrated(const ModeIndex& m, const CavityConfig& cfg, double t);

Strain gw_strain(const CavityConfig& cfg, double t);

// Dimensionless weights of the expansion: a = kz^2/w0^2, b = (kx^2-ky^2)/w0^2.
struct ExpansionWeights {
    double omega0;
    double a;
    double b;
};
ExpansionWeights expansion_weights(const ModeIndex& m, const CavityConfig& cfg);

// Drive trig evaluated once per instant and shared between modes.
struct DrivePhase {
    double sc, cc, sg, cg;
    DrivePhase(const CavityConfig& cfg, double t);
};

// omega and omegadot for given weights; used by the fast paths.
struct OmegaPair {
    double w;
    double wdot;
};
OmegaPair omega_from_weights(const ExpansionWeights& e, const CavityConfig& cfg, const DrivePhase& d);

}  // namespace dce

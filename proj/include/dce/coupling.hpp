#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "dce/cavity.hpp"

namespace dce {

class ModeBasis {
public:
    explicit ModeBasis(std::vector<ModeIndex> modes);

    // Target's (nx, ny) column with nz = 1..max(n_max, target.nz).
    static ModeBasis column(const ModeIndex& target, int n_max = 3);

    std::size_t size() const { return modes_.size(); }
    const ModeIndex& operator[](std::size_t i) const { return modes_[i]; }
    const std::vector<ModeIndex>& modes() const { return modes_; }
    std::optional<std::size_t> find(const ModeIndex& m) const;
    std::size_t index_of(const ModeIndex& m) const;  // throws ConfigError

private:
    std::vector<ModeIndex> modes_;
};

struct CouplingTable {
    Eigen::MatrixXd G;
    Eigen::MatrixXd mu;
    Eigen::MatrixXcd A;
    Eigen::MatrixXcd B;
    double evaluated_at = 0.0;
};

double g_factor(const ModeIndex& k, const ModeIndex& j);

// g_kj * Ldot/L with the exact mirror rate.
double coupling_G(const ModeIndex& k, const ModeIndex& j, const CavityConfig& cfg, double t);

// -int phi_k d/dt phi_j over the instantaneous box, 3-D Gauss-Legendre product rule.
double coupling_G_oracle(const ModeIndex& k, const ModeIndex& j, const CavityConfig& cfg, double t,
                         int nodes = 64);

// int phi_k phi_j over the instantaneous box, same rule.
double overlap_oracle(const ModeIndex& k, const ModeIndex& j, const CavityConfig& cfg, double t,
                      int nodes = 64);

double mu_coefficient(const ModeIndex& k, const ModeIndex& j, const CavityConfig& cfg, double t);

// Phases come from theta_integrated per mode.
CouplingTable hamiltonian_coefficients(const ModeBasis& basis, const CavityConfig& cfg, double t);

// Precomputed per-basis data for repeated evaluation inside an integrator.
class CouplingModel {
public:
    CouplingModel(const ModeBasis& basis, const CavityConfig& cfg);

    std::size_t size() const { return weights_.size(); }
    const CavityConfig& cavity() const { return cfg_; }
    const ModeBasis& basis() const { return basis_; }
    double omega0(std::size_t i) const { return weights_[i].omega0; }
    const Eigen::MatrixXd& g() const { return g_; }

    // omega(t) (expanded) and mu(t). Throws NonPositiveFrequency.
    void evaluate(double t, Eigen::VectorXd& omega, Eigen::MatrixXd& mu) const;

    // A and B from mu and the integrated phases.
    static void dress(const Eigen::MatrixXd& mu, const Eigen::VectorXd& theta, Eigen::MatrixXcd& A,
                      Eigen::MatrixXcd& B);

private:
    ModeBasis basis_;
    CavityConfig cfg_;
    std::vector<ExpansionWeights> weights_;
    Eigen::MatrixXd g_;
};

}  // namespace dce

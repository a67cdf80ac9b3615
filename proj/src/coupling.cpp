#include "dce/coupling.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "dce/errors.hpp"
#include "dce/quadrature.hpp"

namespace dce {

using std::numbers::pi;

ModeBasis::ModeBasis(std::vector<ModeIndex> modes) : modes_(std::move(modes)) {
    if (modes_.empty()) throw ConfigError("mode basis must be nonempty");
    for (std::size_t i = 0; i < modes_.size(); ++i)
        for (std::size_t j = i + 1; j < modes_.size(); ++j)
            if (modes_[i] == modes_[j]) throw ConfigError("duplicate mode in basis");
}

ModeBasis ModeBasis::column(const ModeIndex& target, int n_max) {
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    std::vector<ModeIndex> v;
    for (int z = 1; z <= std::max(n_max, target.nz); ++z) v.emplace_back(target.nx, target.ny, z);
    return ModeBasis(std::move(v));
}

std::optional<std::size_t> ModeBasis::find(const ModeIndex& m) const {
    for (std::size_t i = 0; i < modes_.size(); ++i)
        if (modes_[i] == m) return i;
    return std::nullopt;
}

std::size_t ModeBasis::index_of(const ModeIndex& m) const {
    auto i = find(m);
    if (!i) throw ConfigError("mode not in basis");
    return *i;
}

double g_factor(const ModeIndex& k, const ModeIndex& j) {
    if (k.nx != j.nx || k.ny != j.ny || k.nz == j.nz) return 0.0;
    const int kz = k.nz, jz = j.nz;
    const double sign = ((jz - kz) % 2 == 0) ? 1.0 : -1.0;
    return sign * 2.0 * kz * jz / static_cast<double>(jz * jz - kz * kz);
}

double coupling_G(const ModeIndex& k, const ModeIndex& j, const CavityConfig& cfg, double t) {
    return g_factor(k, j) * mirror_rate(cfg, t);
}

namespace {

// phi = sqrt(8/V) sin(kx x) sin(ky y) sin(nz pi z / Lz); the z factor and its
// time derivative carry all the Lz(t) dependence.
struct ZFactor {
    double value;
    double rate;
};

ZFactor z_factor(int nz, double z, double Lz, double Lzdot) {
    const double arg = nz * pi * z / Lz;
    const double s = std::sin(arg), c = std::cos(arg);
    const double norm = std::sqrt(2.0 / Lz);
    // d/dt [sqrt(2/Lz) sin(n pi z/Lz)]
    const double rate = norm * Lzdot * (-0.5 * s / Lz - c * arg / Lz);
    return {norm * s, rate};
}

template <class F>
double box_product(const ModeIndex& k, const ModeIndex& j, const CavityConfig& cfg, double t, int nodes,
                   F zpair) {
    const double Lz = mirror_position(cfg, t), Lzdot = mirror_velocity(cfg, t);
    auto rx = quad::gauss_legendre(nodes, 0.0, cfg.Lx());
    auto ry = quad::gauss_legendre(nodes, 0.0, cfg.Ly());
    auto rz = quad::gauss_legendre(nodes, 0.0, Lz);
    std::vector<double> fx(nodes), fy(nodes), fz(nodes);
    const double nx = std::sqrt(2.0 / cfg.Lx()), ny = std::sqrt(2.0 / cfg.Ly());
    for (int i = 0; i < nodes; ++i) {
        fx[i] = nx * nx * std::sin(k.nx * pi * rx.x[i] / cfg.Lx()) * std::sin(j.nx * pi * rx.x[i] / cfg.Lx());
        fy[i] = ny * ny * std::sin(k.ny * pi * ry.x[i] / cfg.Ly()) * std::sin(j.ny * pi * ry.x[i] / cfg.Ly());
        fz[i] = zpair(z_factor(k.nz, rz.x[i], Lz, Lzdot), z_factor(j.nz, rz.x[i], Lz, Lzdot));
    }
    double sum = 0.0;
    for (int a = 0; a < nodes; ++a)
        for (int b = 0; b < nodes; ++b) {
            const double wab = rx.w[a] * ry.w[b] * fx[a] * fy[b];
            double inner = 0.0;
            for (int c = 0; c < nodes; ++c) inner += rz.w[c] * fz[c];
            sum += wab * inner;
        }
    if (!std::isfinite(sum)) throw QuadratureFailure("box quadrature produced a non-finite value");
    return sum;
}

}  // namespace

double coupling_G_oracle(const ModeIndex& k, const ModeIndex& j, const CavityConfig& cfg, double t,
                         int nodes) {
    if (nodes < 64) throw ConfigError("oracle needs at least 64 nodes per axis");
    return -box_product(k, j, cfg, t, nodes, [](ZFactor a, ZFactor b) { return a.value * b.rate; });
}

double overlap_oracle(const ModeIndex& k, const ModeIndex& j, const CavityConfig& cfg, double t, int nodes) {
    return box_product(k, j, cfg, t, nodes, [](ZFactor a, ZFactor b) { return a.value * b.value; });
}

CouplingModel::CouplingModel(const ModeBasis& basis, const CavityConfig& cfg)
    : basis_(basis), cfg_(cfg), g_(basis.size(), basis.size()) {
    const auto n = basis.size();
    for (std::size_t i = 0; i < n; ++i) {
        weights_.push_back(expansion_weights(basis[i], cfg));
        for (std::size_t j = 0; j < n; ++j) g_(i, j) = g_factor(basis[i], basis[j]);
    }
}

void CouplingModel::evaluate(double t, Eigen::VectorXd& omega, Eigen::MatrixXd& mu) const {
    const auto n = size();
    omega.resize(n);
    mu.resize(n, n);
    const DrivePhase d(cfg_, t);
    Eigen::VectorXd wdot(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = omega_from_weights(weights_[i], cfg_, d);
        if (!(p.w > 0.0)) throw NonPositiveFrequency("expanded omega <= 0 at t=" + std::to_string(t));
        omega[i] = p.w;
        wdot[i] = p.wdot;
    }
    const double rate = cfg_.epsilon() * cfg_.Omega_c() * d.cc / (1.0 + cfg_.epsilon() * d.sc);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            mu(i, j) = (i == j) ? 0.5 * wdot[i] / omega[i] : g_(i, j) * rate * std::sqrt(omega[i] / omega[j]);
}

void CouplingModel::dress(const Eigen::MatrixXd& mu, const Eigen::VectorXd& theta, Eigen::MatrixXcd& A,
                          Eigen::MatrixXcd& B) {
    const auto n = mu.rows();
    A.resize(n, n);
    B.resize(n, n);
    Eigen::VectorXcd ph(n);
    for (Eigen::Index i = 0; i < n; ++i) ph[i] = std::polar(1.0, -theta[i]);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double anti = 0.5 * (mu(i, j) - mu(j, i));
            const double sym = 0.5 * (mu(i, j) + mu(j, i));
            A(i, j) = anti * ph[i] * std::conj(ph[j]);
            B(i, j) = sym * ph[i] * ph[j];
        }
}

double mu_coefficient(const ModeIndex& k, const ModeIndex& j, const CavityConfig& cfg, double t) {
    CouplingModel m(k == j ? ModeBasis({k}) : ModeBasis({k, j}), cfg);
    Eigen::VectorXd w;
    Eigen::MatrixXd mu;
    m.evaluate(t, w, mu);
    return k == j ? mu(0, 0) : mu(0, 1);
}

CouplingTable hamiltonian_coefficients(const ModeBasis& basis, const CavityConfig& cfg, double t) {
    CouplingModel m(basis, cfg);
    CouplingTable tab;
    tab.evaluated_at = t;
    Eigen::VectorXd w;
    m.evaluate(t, w, tab.mu);
    const auto n = basis.size();
    tab.G.resize(n, n);
    const double rate = mirror_rate(cfg, t);
    Eigen::VectorXd theta(n);
    for (std::size_t i = 0; i < n; ++i) {
        theta[i] = theta_integrated(basis[i], cfg, t);
        for (std::size_t j = 0; j < n; ++j) tab.G(i, j) = m.g()(i, j) * rate;
    }
    CouplingModel::dress(tab.mu, theta, tab.A, tab.B);
    return tab;
}

}  // namespace dce

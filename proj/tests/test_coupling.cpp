#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "dce/coupling.hpp"
#include "dce/errors.hpp"
#include "dce/quadrature.hpp"

using namespace dce;
using std::numbers::pi;

namespace {
CavityConfig box(double eps, double Wc, double h = 0, double Wg = 0) {
    CavityParams p;
    p.Lx = 1.0;
    p.Ly = 1.3;
    p.Lz0 = 0.8;
    p.epsilon = eps;
    p.Omega_c = Wc;
    p.h_plus = h;
    p.Omega_g = Wg;
    return CavityConfig(p);
}
CavityConfig cube(double L, double eps, double Wc, double h = 0, double Wg = 0) {
    CavityParams p;
    p.Lx = p.Ly = p.Lz0 = L;
    p.epsilon = eps;
    p.Omega_c = Wc;
    p.h_plus = h;
    p.Omega_g = Wg;
    return CavityConfig(p);
}
}  // namespace

TEST_CASE("gauss_legendre integrates polynomials exactly") {
    auto r = quad::gauss_legendre(5, 0.0, 2.0);
    double s = 0;
    for (int i = 0; i < 5; ++i) s += r.w[i] * std::pow(r.x[i], 9);
    CHECK(s == doctest::Approx(std::pow(2.0, 10) / 10).epsilon(1e-14));
    auto one = quad::gauss_legendre(1);
    CHECK(one.x[0] == 0.0);
    CHECK(one.w[0] == 2.0);
}

TEST_CASE("g_factor") {
    CHECK(g_factor({1, 1, 2}, {1, 1, 2}) == 0.0);
    CHECK(g_factor({1, 1, 1}, {1, 1, 2}) == doctest::Approx(-4.0 / 3.0));
    CHECK(g_factor({1, 1, 2}, {1, 1, 1}) == doctest::Approx(4.0 / 3.0));
    CHECK(g_factor({1, 1, 1}, {1, 1, 3}) == doctest::Approx(0.75));
    CHECK(g_factor({1, 1, 1}, {2, 1, 2}) == 0.0);
    CHECK(g_factor({1, 2, 1}, {1, 1, 2}) == 0.0);
}

TEST_CASE("coupling_G") {
    CHECK(coupling_G({1, 1, 1}, {1, 1, 2}, box(0.0, 3.0), 0.4) == 0.0);
    CHECK(std::abs(coupling_G({1, 1, 1}, {1, 1, 2}, box(0.1, 3.0), pi / 6.0)) < 1e-16);
    CHECK(coupling_G({1, 1, 1}, {1, 1, 2}, cube(1.0, 1e-2, 1.0), 0.0) == doctest::Approx(-1.333333333333e-2));
}

TEST_CASE("oracle orthonormality and antisymmetry") {
    auto c = box(0.05, 2.0);
    for (double t : {0.0, 0.37}) {
        for (int a = 1; a <= 3; ++a)
            for (int b = 1; b <= 3; ++b) {
                const double o = overlap_oracle({2, 1, a}, {2, 1, b}, c, t);
                CHECK(std::abs(o - (a == b ? 1.0 : 0.0)) < 1e-12);
                const double s = coupling_G_oracle({2, 1, a}, {2, 1, b}, c, t) +
                                 coupling_G_oracle({2, 1, b}, {2, 1, a}, c, t);
                CHECK(std::abs(s) < 1e-12);
            }
        CHECK(std::abs(overlap_oracle({1, 1, 1}, {2, 1, 1}, c, t)) < 1e-12);
    }
    CHECK_THROWS_AS(coupling_G_oracle({1, 1, 1}, {1, 1, 2}, c, 0.0, 32), ConfigError);
}

TEST_CASE("closed form matches the oracle on six modes at random times") {
    auto c = box(0.05, 2.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0, 10);
    for (int r = 0; r < 4; ++r) {
        const double t = dist(rng);
        for (int a = 1; a <= 6; ++a)
            for (int b = 1; b <= 6; ++b) {
                if (a == b) continue;
                const double g = coupling_G({1, 2, a}, {1, 2, b}, c, t);
                const double o = coupling_G_oracle({1, 2, a}, {1, 2, b}, c, t);
                CHECK(std::abs(g - o) <= 1e-10 * std::abs(o) + 1e-15);
            }
    }
}

TEST_CASE("G antisymmetry and transverse selection") {
    auto c = box(0.05, 2.0);
    for (double t : {0.1, 0.9}) {
        CHECK(coupling_G({1, 1, 2}, {1, 1, 5}, c, t) == -coupling_G({1, 1, 5}, {1, 1, 2}, c, t));
        CHECK(coupling_G({1, 1, 2}, {2, 1, 3}, c, t) == 0.0);
        CHECK(std::abs(coupling_G_oracle({1, 1, 2}, {2, 1, 3}, c, t)) < 1e-12);
    }
}

TEST_CASE("G scales linearly with epsilon to leading order") {
    // Ldot/L = eps W cos / (1 + eps sin): doubling eps doubles it exactly at sin = 0
    auto a = box(1e-3, 2.0), b = box(2e-3, 2.0);
    CHECK(coupling_G({1, 1, 1}, {1, 1, 2}, b, pi) == doctest::Approx(2 * coupling_G({1, 1, 1}, {1, 1, 2}, a, pi)).epsilon(1e-14));
}

TEST_CASE("mu_coefficient") {
    auto off = cube(pi, 0, 0);
    CHECK(mu_coefficient({2, 1, 2}, {2, 1, 2}, off, 1.0) == 0.0);
    CHECK(mu_coefficient({2, 1, 2}, {2, 1, 1}, off, 1.0) == 0.0);

    // diagonal, mirror only: -(kz^2/w0^2)(eps W/2) cos(W t) to first order
    const double eps = 1e-4, W = 6.0;
    auto c = cube(pi, eps, W);
    for (double t : {0.0, 0.3, 1.7}) {
        const double expect = -(4.0 / 9.0) * (eps * W / 2) * std::cos(W * t);
        CHECK(std::abs(mu_coefficient({2, 1, 2}, {2, 1, 2}, c, t) - expect) <= 10 * eps * std::abs(eps * W) + 1e-18);
    }

    // off-diagonal vs its first-order series
    const double h = 1e-4, Wg = 1.1;
    auto d = cube(pi, eps, W, h, Wg);
    const ModeIndex k{2, 1, 2}, j{2, 1, 1};
    const double wk = 3.0, wj = std::sqrt(6.0);
    for (double t : {0.05, 0.4, 2.2}) {
        const double series = g_factor(k, j) * std::sqrt(wk / wj) * W * eps * std::cos(W * t);
        const double v = mu_coefficient(k, j, d, t);
        CHECK(std::abs(v - series) <= 1e-3 * std::abs(series));
    }

    // eps -> 2 eps doubles off-diagonal values to first order
    auto e1 = cube(pi, 1e-3, W), e2 = cube(pi, 2e-3, W);
    const double m1 = mu_coefficient(k, j, e1, 0.2), m2 = mu_coefficient(k, j, e2, 0.2);
    CHECK(std::abs(m2 / m1 - 2.0) < 2e-3 * 2.0);
}

TEST_CASE("hamiltonian_coefficients structure") {
    auto basis = ModeBasis::column({2, 1, 2}, 3);
    auto quiet = hamiltonian_coefficients(basis, cube(pi, 0, 0), 2.0);
    CHECK(quiet.A.norm() == 0.0);
    CHECK(quiet.B.norm() == 0.0);

    auto c = cube(pi, 0.02, 6.0, 0.01, 1.3);
    for (double t : {0.0, 0.7, 3.1}) {
        auto tab = hamiltonian_coefficients(basis, c, t);
        CHECK(tab.evaluated_at == t);
        for (Eigen::Index i = 0; i < 3; ++i) {
            CHECK(std::abs(tab.A(i, i)) == 0.0);
            for (Eigen::Index j = 0; j < 3; ++j) {
                CHECK(std::abs(tab.G(i, j) + tab.G(j, i)) <= 1e-12);
                CHECK(std::abs(tab.B(i, j) - tab.B(j, i)) <= 1e-14);
                CHECK(std::abs(tab.A(i, j) + std::conj(tab.A(j, i))) <= 1e-14);
            }
            const double theta = theta_integrated(basis[i], c, t);
            CHECK(std::abs(tab.B(i, i) - tab.mu(i, i) * std::polar(1.0, -2 * theta)) <= 1e-14);
        }
    }
}

TEST_CASE("B_kk time average at the mirror resonance") {
    // with W = 2 w0, |<B_kk>| over many periods -> eps W kz^2/(4 w0^2)
    const double eps = 1e-4, W = 6.0;
    auto c = cube(pi, eps, W);
    ModeBasis basis({{2, 1, 2}});
    CouplingModel m(basis, c);
    Eigen::VectorXd w, theta(1);
    Eigen::MatrixXd mu;
    Eigen::MatrixXcd A, B;
    const int n = 5000;
    const double T = 50 * 2 * pi / W;
    std::complex<double> acc = 0;
    for (int i = 0; i < n; ++i) {
        const double t = (i + 0.5) * T / n;
        m.evaluate(t, w, mu);
        theta[0] = theta_integrated({2, 1, 2}, c, t);
        CouplingModel::dress(mu, theta, A, B);
        acc += B(0, 0);
    }
    acc /= n;
    const double expect = eps * W * (4.0 / 9.0) / 4.0;
    CHECK(std::abs(std::abs(acc) - expect) <= 1e-2 * expect);
}

TEST_CASE("mode basis") {
    CHECK_THROWS_AS(ModeBasis({}), ConfigError);
    CHECK_THROWS_AS(ModeBasis({{1, 1, 1}, {1, 1, 1}}), ConfigError);
    auto b = ModeBasis::column({3, 1, 5}, 3);
    CHECK(b.size() == 5);
    CHECK(b.index_of({3, 1, 4}) == 3);
    CHECK_FALSE(b.find({1, 1, 1}).has_value());
}

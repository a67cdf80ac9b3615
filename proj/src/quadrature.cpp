#include "dce/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "dce/errors.hpp"

namespace dce::quad {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if (n == 1) return {x, 1.0};
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

Rule gauss_legendre(int n) {
    if (n < 1) throw ConfigError("gauss_legendre: n must be >= 1");
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = legendre(n, x);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double dp = legendre(n, x).second;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

Rule gauss_legendre(int n, double a, double b) {
    Rule r = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.x[i] = c + h * r.x[i];
        r.w[i] *= h;
    }
    return r;
}

namespace {

// Boost's driver stops on relative error only, which never triggers for an
// integral that cancels to ~0; bisect ourselves so abs_tol is honoured.
double bisect(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
              int depth) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    if (!std::isfinite(v)) throw QuadratureFailure("adaptive quadrature: non-finite integrand");
    if (err <= std::max(abs_tol, rel_tol * std::abs(v))) return v;
    if (depth == 0)
        throw QuadratureFailure("adaptive quadrature: error estimate " + std::to_string(err) + " exceeds tolerance");
    const double m = 0.5 * (a + b);
    return bisect(f, a, m, 0.5 * abs_tol, rel_tol, depth - 1) + bisect(f, m, b, 0.5 * abs_tol, rel_tol, depth - 1);
}

}  // namespace

double adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    return bisect(f, a, b, abs_tol, std::max(rel_tol, 1e-15), max_depth);
}

}  // namespace dce::quad

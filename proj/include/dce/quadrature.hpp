#pragma once

#include <functional>
#include <vector>

namespace dce::quad {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

// n-point Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
Rule gauss_legendre(int n);

// Same rule mapped onto [a, b].
Rule gauss_legendre(int n, double a, double b);

// Adaptive Gauss-Kronrod (15 point) on [a, b]. Throws QuadratureFailure when the
// error estimate exceeds max(abs_tol, rel_tol*|I|).
double adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                double rel_tol = 1e-12, int max_depth = 18);

}  // namespace dce::quad

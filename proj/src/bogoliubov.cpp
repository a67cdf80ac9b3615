#include "dce/bogoliubov.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "dce/errors.hpp"

namespace dce {

namespace odeint = boost::numeric::odeint;
using cplx = std::complex<double>;
using State = std::vector<double>;
using CMap = Eigen::Map<Eigen::MatrixXcd>;
using CConstMap = Eigen::Map<const Eigen::MatrixXcd>;

BogoliubovState BogoliubovState::vacuum(std::size_t n) {
    BogoliubovState s;
    s.alpha = Eigen::MatrixXcd::Identity(n, n);
    s.beta = Eigen::MatrixXcd::Zero(n, n);
    return s;
}

void IntegrationSpec::validate() const {
    auto tol_ok = [](double v) { return v > 0.0 && v <= 1e-2; };
    if (!tol_ok(rel_tol) || !tol_ok(abs_tol)) throw ConfigError("tolerances must lie in (0, 1e-2]");
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be > 0");
    if (max_step < 0.0) throw ConfigError("max_step must be >= 0");
    if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
}

namespace {

// Packed layout, all complex blocks column-major n x n:
//   Full:   [alpha | beta | phase deviation (n reals)]
//   First:  [a1 | b1 | phase]
//   Second: [a1 | b1 | a2 | b2 | phase]
// The phase deviation integrates omega(t) - omega0 so Theta = omega0 t + dev.
struct Dynamics {
    CouplingModel model;
    Method method;
    std::size_t n;
    std::size_t blocks;
    mutable Eigen::VectorXd omega, theta;
    mutable Eigen::MatrixXd mu;
    mutable Eigen::MatrixXcd A, B, Ct, Dt, At, Bt;

    Dynamics(const ModeBasis& b, const CavityConfig& c, Method m)
        : model(b, c), method(m), n(b.size()), blocks(m == Method::SecondOrder ? 4 : 2) {}

    std::size_t dim() const { return blocks * 2 * n * n + n; }
    std::size_t phase_offset() const { return blocks * 2 * n * n; }

    const cplx* block(const State& x, std::size_t b) const {
        return reinterpret_cast<const cplx*>(x.data()) + b * n * n;
    }
    cplx* block(State& x, std::size_t b) const { return reinterpret_cast<cplx*>(x.data()) + b * n * n; }

    void operator()(const State& x, State& dxdt, double t) const {
        const auto ni = static_cast<Eigen::Index>(n);
        model.evaluate(t, omega, mu);
        theta.resize(ni);
        for (std::size_t i = 0; i < n; ++i) theta[i] = model.omega0(i) * t + x[phase_offset() + i];
        CouplingModel::dress(mu, theta, A, B);
        At = A.transpose();
        Bt = B.transpose();
        Ct = A.conjugate().transpose();
        Dt = B.conjugate().transpose();

        switch (method) {
            case Method::Full: {
                CConstMap al(block(x, 0), ni, ni), be(block(x, 1), ni, ni);
                CMap dal(block(dxdt, 0), ni, ni), dbe(block(dxdt, 1), ni, ni);
                dal.noalias() = al * Ct;
                dal.noalias() += be * Dt;
                dbe.noalias() = be * At;
                dbe.noalias() += al * Bt;
                break;
            }
            case Method::FirstOrder: {
                CMap(block(dxdt, 0), ni, ni) = Ct;
                CMap(block(dxdt, 1), ni, ni) = Bt;
                break;
            }
            case Method::SecondOrder: {
                CConstMap a1(block(x, 0), ni, ni), b1(block(x, 1), ni, ni);
                CMap(block(dxdt, 0), ni, ni) = Ct;
                CMap(block(dxdt, 1), ni, ni) = Bt;
                CMap da2(block(dxdt, 2), ni, ni), db2(block(dxdt, 3), ni, ni);
                da2.noalias() = a1 * Ct;
                da2.noalias() += b1 * Dt;
                db2.noalias() = b1 * At;
                db2.noalias() += a1 * Bt;
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) dxdt[phase_offset() + i] = omega[i] - model.omega0(i);
    }

    State initial() const {
        State x(dim(), 0.0);
        if (method == Method::Full) {
            cplx* al = block(x, 0);
            for (std::size_t i = 0; i < n; ++i) al[i * n + i] = 1.0;
        }
        return x;
    }

    BogoliubovState unpack(const State& x, double t) const {
        const auto ni = static_cast<Eigen::Index>(n);
        BogoliubovState s;
        s.t = t;
        switch (method) {
            case Method::Full:
                s.alpha = CConstMap(block(x, 0), ni, ni);
                s.beta = CConstMap(block(x, 1), ni, ni);
                break;
            case Method::FirstOrder:
                s.alpha = Eigen::MatrixXcd::Identity(ni, ni) + CConstMap(block(x, 0), ni, ni);
                s.beta = CConstMap(block(x, 1), ni, ni);
                break;
            case Method::SecondOrder:
                s.alpha = Eigen::MatrixXcd::Identity(ni, ni) + CConstMap(block(x, 0), ni, ni) +
                          CConstMap(block(x, 2), ni, ni);
                s.beta = CConstMap(block(x, 1), ni, ni) + CConstMap(block(x, 3), ni, ni);
                break;
        }
        return s;
    }
};

double default_max_step(const Dynamics& d) {
    double fastest = std::max(d.model.cavity().Omega_c(), d.model.cavity().Omega_g());
    for (std::size_t i = 0; i < d.n; ++i) fastest = std::max(fastest, 2.0 * d.model.omega0(i));
    return 0.25 * 2.0 * std::numbers::pi / fastest;
}

template <class Controlled>
std::vector<BogoliubovState> run(const Dynamics& dyn, Controlled stepper, const IntegrationSpec& spec,
                                 const std::vector<double>& times) {
    State x = dyn.initial();
    std::vector<BogoliubovState> out;
    out.reserve(times.size());
    double t = 0.0;
    const double hmax = spec.max_step > 0.0 ? spec.max_step : default_max_step(dyn);
    double dt = std::min(hmax, 1e-3 * hmax + 1e-6);
    long steps = 0;
    for (double target : times) {
        while (target - t > 1e-14 * std::max(1.0, target)) {
            double h = std::min(dt, target - t);
            const bool clipped = h < dt;
            // on success try_step advances t and writes the suggested next step into h
            if (stepper.try_step(std::cref(dyn), x, t, h) == odeint::success) {
                if (!clipped) dt = std::min(h, hmax);
                if (++steps > spec.max_steps) throw ToleranceNotMet("step budget exhausted before t_final");
            } else {
                dt = h;
                if (dt < 1e-14 * std::max(1.0, std::abs(t)))
                    throw StepSizeUnderflow("step size underflow at t=" + std::to_string(t));
            }
        }
        t = target;
        for (double v : x)
            if (!std::isfinite(v)) throw ToleranceNotMet("non-finite state at t=" + std::to_string(t));
        out.push_back(dyn.unpack(x, t));
    }
    return out;
}

}  // namespace

std::vector<BogoliubovState> integrate_sampled(const IntegrationSpec& spec, const CavityConfig& cfg,
                                               const std::vector<double>& times) {
    spec.validate();
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || times[i] > spec.t_final * (1 + 1e-12) || (i > 0 && times[i] < times[i - 1]))
            throw ConfigError("sample times must be ascending within [0, t_final]");
    }
    Dynamics dyn(spec.basis, cfg, spec.method);
    if (spec.stepper == Stepper::Fehlberg78) {
        auto c = odeint::make_controlled(spec.abs_tol, spec.rel_tol, odeint::runge_kutta_fehlberg78<State>());
        return run(dyn, c, spec, times);
    }
    auto c = odeint::make_controlled(spec.abs_tol, spec.rel_tol, odeint::runge_kutta_dopri5<State>());
    return run(dyn, c, spec, times);
}

namespace {
BogoliubovState final_state(IntegrationSpec spec, const CavityConfig& cfg, Method m) {
    spec.method = m;
    return integrate_sampled(spec, cfg, {spec.t_final}).back();
}
}  // namespace

BogoliubovState integrate_first_order(const IntegrationSpec& spec, const CavityConfig& cfg) {
    return final_state(spec, cfg, Method::FirstOrder);
}

BogoliubovState integrate_second_order(const IntegrationSpec& spec, const CavityConfig& cfg) {
    return final_state(spec, cfg, Method::SecondOrder);
}

BogoliubovState integrate_full(const IntegrationSpec& spec, const CavityConfig& cfg) {
    return final_state(spec, cfg, Method::Full);
}

double particle_number(const BogoliubovState& s, std::size_t column) {
    return s.beta.col(static_cast<Eigen::Index>(column)).squaredNorm();
}

double particle_number(const BogoliubovState& s, const ModeBasis& basis, const ModeIndex& k) {
    return particle_number(s, basis.index_of(k));
}

std::vector<double> unitarity_defect(const BogoliubovState& s) {
    std::vector<double> d(static_cast<std::size_t>(s.alpha.cols()));
    for (Eigen::Index k = 0; k < s.alpha.cols(); ++k)
        d[k] = std::abs(s.alpha.col(k).squaredNorm() - s.beta.col(k).squaredNorm() - 1.0);
    return d;
}

double max_unitarity_defect(const BogoliubovState& s) {
    auto d = unitarity_defect(s);
    return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

double growth_rate(const std::vector<double>& t, const std::vector<double>& N, double window) {
    if (t.size() != N.size() || t.size() < 4) throw ConfigError("growth_rate needs >= 4 matched samples");
    if (!(window > 0.0 && window <= 1.0)) throw ConfigError("growth_rate window must be in (0, 1]");
    const std::size_t first = t.size() - std::max<std::size_t>(2, static_cast<std::size_t>(window * t.size()));
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double m = static_cast<double>(t.size() - first);
    for (std::size_t i = first; i < t.size(); ++i) {
        const double y = std::asinh(std::sqrt(std::max(N[i], 0.0)));
        st += t[i];
        sy += y;
        stt += t[i] * t[i];
        sty += t[i] * y;
    }
    return (m * sty - st * sy) / (m * stt - st * st);
}

std::vector<double> sample_grid(double t_final, int count) {
    if (count < 1) throw ConfigError("sample count must be >= 1");
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = t_final * (i + 1) / count;
    v.back() = t_final;
    return v;
}

}  // namespace dce

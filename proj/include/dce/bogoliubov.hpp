#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "dce/cavity.hpp"
#include "dce/coupling.hpp"

namespace dce {

// alpha(j,k), beta(j,k): coefficient of the initial a_j, a_j^dagger in the
// instantaneous a_k(t).
struct BogoliubovState {
    Eigen::MatrixXcd alpha;
    Eigen::MatrixXcd beta;
    double t = 0.0;

    static BogoliubovState vacuum(std::size_t n);
};

enum class Method { FirstOrder, SecondOrder, Full };
enum class Stepper { Fehlberg78, DormandPrince5 };

struct IntegrationSpec {
    Method method = Method::Full;
    Stepper stepper = Stepper::Fehlberg78;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;  // 0: a quarter of the shortest period in the problem
    ModeBasis basis = ModeBasis({ModeIndex{}});
    double t_final = 1.0;
    long max_steps = 200'000'000;

    void validate() const;  // throws ConfigError
};

BogoliubovState integrate_first_order(const IntegrationSpec& spec, const CavityConfig& cfg);
BogoliubovState integrate_second_order(const IntegrationSpec& spec, const CavityConfig& cfg);
BogoliubovState integrate_full(const IntegrationSpec& spec, const CavityConfig& cfg);

// Dispatch on spec.method and record the state at every requested time
// (ascending, within [0, t_final]).
std::vector<BogoliubovState> integrate_sampled(const IntegrationSpec& spec, const CavityConfig& cfg,
                                               const std::vector<double>& times);

double particle_number(const BogoliubovState& s, std::size_t column);
double particle_number(const BogoliubovState& s, const ModeBasis& basis, const ModeIndex& k);
std::vector<double> unitarity_defect(const BogoliubovState& s);
double max_unitarity_defect(const BogoliubovState& s);

// Least-squares slope of asinh(sqrt(N)) against t over the last `window`
// fraction of the samples.
double growth_rate(const std::vector<double>& t, const std::vector<double>& N, double window = 0.5);

// Evenly spaced sample times in (0, t_final].
std::vector<double> sample_grid(double t_final, int count);

}  // namespace dce

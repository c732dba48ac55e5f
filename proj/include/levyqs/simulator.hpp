#pragma once

#include <cstdint>
#include <vector>

#include "levyqs/closed_forms.hpp"
#include "levyqs/model.hpp"
#include "levyqs/rng.hpp"

namespace levyqs {

struct SimulationConfig {
    LevyModel model;
    double horizon_t = 1.0;
    std::uint64_t n_paths = 1;
    std::uint64_t seed = 0;
    double brownian_dt = 1e-3;  // grid step for diffusion paths
    unsigned workers = 1;
};

// Monte Carlo sample of (Q(0), Q(t)) over surviving paths {T > t}, with the
// launch count kept so that survival_estimate is unbiased for P_pi(T > t).
struct EmpiricalConditional {
    struct Pair {
        std::uint64_t path_index;
        double q0;
        double qt;
    };
    std::vector<Pair> pairs;
    std::uint64_t n_total = 0;
    double survival_estimate = 0.0;
    double std_error = 0.0;
    std::vector<std::string> warnings;

    std::vector<double> q0_sample() const;
    std::vector<double> qt_sample() const;
};

// Exact event-driven simulation for compound Poisson input (either jump
// direction, no diffusion part). Deterministic given (seed, n_paths),
// invariant to the worker count.
EmpiricalConditional simulate_cp(const SimulationConfig& config);

// Grid simulation for linear Brownian input with Brownian-bridge kill
// probabilities between grid points (the segment law is exact, so the
// triple (Q(0), Q(t), {T>t}) is sampled without discretization bias).
EmpiricalConditional simulate_brownian(const SimulationConfig& config);

// Dispatch on the model kind.
EmpiricalConditional simulate(const SimulationConfig& config);

struct MasterEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

// MC estimate of the double transform at (vartheta, alpha, beta) via an
// independent exponential clock per path:
//   (1/vartheta) E[e^{-alpha Q(0) - beta Q(e)} 1{e < T}], e ~ Exp(vartheta).
MasterEstimate estimate_master_transform(const SimulationConfig& config, double vartheta,
                                         double alpha, double beta);

// Sup-norm distance between the empirical CDF of `sample` and `cdf`.
double ks_distance(const std::vector<double>& sample, const RealFn& cdf);

std::string empirical_to_csv(const EmpiricalConditional& ec);
std::string summary_json(const SimulationConfig& config, const EmpiricalConditional& ec);

namespace engine {

struct PathOutcome {
    bool survived;
    double q_end;
};

// One compound-Poisson path from workload q0 to `horizon`; lambda == 0
// degenerates to the deterministic drain (spectrally positive case).
PathOutcome cp_path(double q0, double drift, double lambda, double nu, int jump_sign,
                    double horizon, SplitMix64& rng);

PathOutcome brownian_path(double q0, double drift, double sigma, double dt, double horizon,
                          SplitMix64& rng);

} // namespace engine

} // namespace levyqs

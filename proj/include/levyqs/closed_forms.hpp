#pragma once

#include <functional>

#include "levyqs/density.hpp"
#include "levyqs/model.hpp"
#include "levyqs/rng.hpp"

namespace levyqs {

enum class Marginal { QsLeft, QsRight, Stationary };

std::string to_string(Marginal m);

using RealFn = std::function<double(double)>;

// Both quasi-stationary marginals of reflected linear Brownian motion with
// unit negative drift: Erlang(2) with per-stage rate 1/sigma^2.
RealFn brownian_qs_density(double sigma, Marginal marginal);
RealFn brownian_qs_cdf(double sigma, Marginal marginal);

// M/M/1 left marginal: the workload at time 0, a negative-binomial(2,
// sqrt(rho)) number of Exp(sqrt(lambda nu)) stages.
struct Mm1QsLeftSampler {
    double stage_rate;  // sqrt(lambda nu)
    double nb_p;        // sqrt(rho)
    double operator()(SplitMix64& rng) const;
};
Mm1QsLeftSampler mm1_qs_left_sampler(double lambda, double nu);

// P(M = m) = (m-1) (sqrt(rho))^{m-2} (1-sqrt(rho))^2 for m >= 2, else 0.
double mm1_qs_left_pmf_check(double lambda, double nu, int m);

// CDF of the left marginal via the truncated negative-binomial mixture of
// Erlang CDFs (independent of the sampler and of the transform route).
RealFn mm1_qs_left_cdf(double lambda, double nu);

// M/M/1 right marginal: (1-sqrt(rho)) Exp(r) + sqrt(rho) Erlang(2, r),
// r = nu - sqrt(lambda nu).
RealFn mm1_qs_right_density(double lambda, double nu);
RealFn mm1_qs_right_cdf(double lambda, double nu);

// Q(0) given a long busy period decomposes into three independent pieces:
// two copies of the theta*-tilted stationary workload plus a third with
// transform psi_over_eta_d1(theta*+a)/psi_over_eta_d1(theta*). Closed-form
// sampling exists for the diffusionless compound Poisson and pure Brownian
// cases.
struct RemarkDecompositionSampler {
    enum class Kind { CompoundPoisson, Brownian } kind;
    // CP: tilted pieces Geom(p)-many Exp(b), third Erlang(2, b)
    // Brownian: tilted pieces Exp(b), third 0
    double b;
    double p;
    double operator()(SplitMix64& rng) const;
};
RemarkDecompositionSampler remark_decomposition_sampler(const LevyModel& m);

// Stationary workload CDF (atom at zero included for the compound Poisson
// case).
RealFn stationary_cdf(const LevyModel& m);

// Closed-form evaluation onto a grid.
DensityTable tabulate(const RealFn& f, const std::vector<double>& grid,
                      const std::string& model_id, const std::string& marginal,
                      const std::string& method);

} // namespace levyqs

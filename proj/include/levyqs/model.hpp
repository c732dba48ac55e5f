#pragma once

#include <complex>
#include <optional>
#include <string>

#include "levyqs/errors.hpp"

namespace levyqs {

using Complex = std::complex<double>;

// Value of a Laplace transform / Laplace exponent at a complex point.
using TransformValue = Complex;

enum class ModelKind {
    SpectrallyPositiveCP,  // compound Poisson, upward Exp(nu) jumps, drift < 0
    SpectrallyNegativeCP,  // compound Poisson, downward Exp(nu) jumps, drift > 0
    LinearBrownian,        // sigma B(t) + drift t, no jumps
};

std::string to_string(ModelKind k);

// Parametric description of a spectrally one-sided Levy input process.
// Immutable after construction; shape parameters are validated eagerly,
// the drift condition E X(1) < 0 is checked by the operations that need it
// (dual models of stable inputs are legitimately unstable).
struct LevyModel {
    ModelKind kind;
    double drift;       // workload units per time
    double sigma;       // Brownian coefficient, >= 0
    double jump_rate;   // Poisson rate lambda, >= 0 (0 for LinearBrownian)
    double jump_param;  // Exp jump-size rate nu, > 0 where jumps exist

    static LevyModel spectrally_positive_cp(double drift, double lambda, double nu,
                                            double sigma = 0.0);
    static LevyModel spectrally_negative_cp(double drift, double lambda, double nu,
                                            double sigma = 0.0);
    static LevyModel linear_brownian(double sigma, double drift);

    // +1 upward jumps, -1 downward jumps, 0 none.
    int jump_sign() const;

    // E X(1) = psi'(0)
    double mean() const;
    bool is_stable() const { return mean() < 0.0; }

    // Finiteness domain Theta of the Laplace exponent, as an open interval.
    double theta_lo() const;
    double theta_hi() const;

    bool operator==(const LevyModel&) const = default;
};

// Model of -X: drift negated, jump direction flipped.
LevyModel dual(const LevyModel& m);

// psi(eta) = drift*eta + sigma^2 eta^2/2 + lambda (nu/(nu -+ eta) - 1),
// sign per jump direction. Exact closed form; DomainError if Re(eta) is
// outside Theta.
TransformValue laplace_exponent(const LevyModel& m, Complex eta);
double laplace_exponent(const LevyModel& m, double eta);

// Derivatives of psi at eta (orders 0..3), same domain rules.
struct ExponentDerivs {
    double psi, d1, d2, d3;
};
ExponentDerivs laplace_exponent_derivs(const LevyModel& m, double eta);
Complex laplace_exponent_d1(const LevyModel& m, Complex eta);

// psi(eta)/eta, evaluated without cancellation (the removable zero of psi
// at 0 never enters). Needed by the Pollaczek-Khintchine kernels.
double psi_over_eta(const LevyModel& m, double eta);
Complex psi_over_eta(const LevyModel& m, Complex eta);

// d/du [psi(u)/u] = sigma^2/2 + lambda/(nu -+ u)^2; also the factored
// residue of psi(u) - u psi'(u) = -u^2 * psi_over_eta_d1(u).
double psi_over_eta_d1(const LevyModel& m, double u);
Complex psi_over_eta_d1(const LevyModel& m, Complex u);

// (psi(u) - u psi'(u)) / psi(u)^2, the P-K tilt kernel, in exact factored
// form -psi_over_eta_d1(u) / (psi(u)/u)^2, so the u -> 0 singularity is
// removable by construction.
double pk_kernel(const LevyModel& m, double u);

// How to sample/evaluate the stationary workload law pi.
struct StationaryLaw {
    enum class Kind { ExponentialRate, GeometricCompound } kind;
    // ExponentialRate: pi(dx) = rate e^{-rate x} dx
    double rate = 0.0;
    // GeometricCompound: Geom(rho)-many Exp(jump_param) summands, atom 1-rho at 0
    double rho = 0.0;
    double jump_param = 0.0;

    // Laplace transform of the law at s >= 0.
    double transform(double s) const;
    double mean() const;
};

// StabilityError if E X(1) >= 0; CapabilityError for jump-diffusion inputs
// whose stationary law is not one of the two supported representations.
StationaryLaw stationary_law(const LevyModel& m);

// JSON ingestion: exactly the fields kind, drift, sigma, jump_rate,
// jump_param; unknown fields rejected (ParameterError with a diagnostic).
LevyModel model_from_json_text(const std::string& text);
LevyModel model_from_json_file(const std::string& path);
std::string model_to_json_text(const LevyModel& m);

} // namespace levyqs

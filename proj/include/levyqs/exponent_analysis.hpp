#pragma once

#include "levyqs/model.hpp"

namespace levyqs {

enum class SpectralSide { SpectrallyPositive, SpectrallyNegative };

// The analytic fingerprint of a model: critical points of the relevant
// exponent (the dual exponent for spectrally positive input and linear
// Brownian motion, the model's own exponent for spectrally negative input).
struct CriticalPoints {
    SpectralSide side;
    double theta_star;      // minimizer of the relevant exponent
    double zeta_star;       // value at the minimum, strictly negative
    double k_star;          // sqrt(2 / E''(theta_star))
    double phi_zero;        // largest root of the model's own psi (0 for SP CP)
    double psi_prime_zero;  // E'(0+): dual mean for SP side, E X(1) for SN side
};

SpectralSide spectral_side(const LevyModel& m);

// Model whose own exponent is the relevant one for the asymptotics:
// dual(m) on the spectrally positive side, m itself on the negative side.
LevyModel relevant_exponent_model(const LevyModel& m);

// AssumptionViolation if E X(1) >= 0 or the exponent minimum is not
// strictly negative (conditions of the one-sided asymptotic regime).
CriticalPoints critical_points(const LevyModel& m);

// Start of the increasing branch of the model's own exponent (its argmin).
double increasing_branch_start(const LevyModel& m);

// Phi(s) = sup{eta >= branch start : psi(eta) = s} for the model's own
// exponent; psi(Phi(s)) = s to 1e-12 relative. BelowSingularity if s is
// left of the exponent's minimum value, ConvergenceError on failure.
double right_inverse_phi(const LevyModel& m, double s);

// Analytic continuation of Phi off the branch cut (-inf, zeta], via Newton
// continuation along a circular arc around the dominant singularity; the
// principal square-root expansion seeds the start point.
Complex right_inverse_phi(const LevyModel& m, Complex s);

// psi_eta(beta) = psi(eta + beta) - psi(eta)
TransformValue tilt_exponent(const LevyModel& m, double eta, Complex beta);

// Two-term branch-point approximation theta* + k* sqrt(vt - zeta*) of the
// right inverse of the relevant exponent.
double square_root_expansion(const LevyModel& m, double vartheta);
double square_root_expansion(const CriticalPoints& cp, double vartheta);

namespace detail {

// Meromorphic continuation of the closed-form exponent and friends; no
// finiteness-domain check (the inversion contours legitimately leave it).
Complex exponent_analytic(const LevyModel& m, Complex eta);
Complex exponent_analytic_d1(const LevyModel& m, Complex eta);
Complex psi_over_eta_analytic(const LevyModel& m, Complex eta);
Complex psi_over_eta_d1_analytic(const LevyModel& m, Complex eta);
Complex pk_kernel_analytic(const LevyModel& m, Complex eta);

} // namespace detail

} // namespace levyqs

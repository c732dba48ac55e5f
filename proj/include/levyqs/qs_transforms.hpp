#pragma once

#include <functional>

#include "levyqs/exponent_analysis.hpp"

namespace levyqs {

// Double transform int_0^inf e^{-vt t} E_pi[e^{-a Q(0) - b Q(t)}, T > t] dt
// for spectrally positive input, evaluated through the dual exponent and
// its right inverse. Analytic on C minus the cut (-inf, zeta*]; the
// removable singularities (a+b = 0, vt = dual_psi(b)) are evaluated by
// exact kernels / midpoint-derivative limits rather than raw quotients.
TransformValue master_transform_sp(const LevyModel& m, Complex vartheta, double alpha,
                                   double beta);

// Same object for spectrally negative input (Brownian input qualifies for
// both sides).
TransformValue master_transform_sn(const LevyModel& m, Complex vartheta, double alpha,
                                   double beta);

// Limiting quasi-stationary transform pair: the joint limit factorizes as
// mu~(a, b) = A(a) B(b) with A(0) = B(0) = 1.
struct QsTransformPair {
    SpectralSide side;
    CriticalPoints cp;
    std::function<double(double)> a_factor;   // transform of mu_L^QS
    std::function<double(double)> b_factor;   // transform of mu_R^QS
    std::function<Complex(Complex)> a_factor_c;  // continuations for inversion
    std::function<Complex(Complex)> b_factor_c;
};

QsTransformPair qs_transform(const LevyModel& m);

// Three-factor decomposition of the left QS transform (spectrally positive
// side): a_factor == tilted_stationary^2 * third pointwise. The third
// factor reduces to psi_over_eta_d1(theta*+a)/psi_over_eta_d1(theta*).
struct RemarkFactors {
    std::function<double(double)> tilted_stationary;
    std::function<double(double)> third;
};
RemarkFactors remark_factors(const LevyModel& m);

// Leading-order busy-period tail C t^{-3/2} e^{zeta* t}, with the constant
// combined to a positive value (|Gamma(-1/2)| = 2 sqrt(pi)).
double busy_period_tail(const LevyModel& m, double t);
double busy_period_tail(const CriticalPoints& cp, double t);

// Exact P_pi(T > t) for linear Brownian input with unit negative drift;
// general sigma through the time scaling T(sigma) = sigma^2 T(1).
double brownian_exact_tail(double sigma, double t);

} // namespace levyqs

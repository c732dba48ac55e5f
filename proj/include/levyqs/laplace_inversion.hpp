#pragma once

#include <functional>

#include "levyqs/density.hpp"
#include "levyqs/model.hpp"

namespace levyqs {

using TransformFn = std::function<Complex(Complex)>;

// One-dimensional numerical Laplace inversion. Primary scheme: fixed-Talbot
// contour; cross-check: Euler-accelerated Bromwich series. A value is
// accepted only when the order-refined Talbot result and the Euler result
// agree; disagreement raises OscillationError.
struct InversionSpec {
    TransformFn transform;
    double abscissa = 0.0;        // singularities strictly left of this
    std::vector<double> grid;     // strictly increasing, x >= 0
    int scheme_order = 32;        // Talbot node count M (>= 8)
};

DensityTable invert(const InversionSpec& spec);

// Point evaluation used by invert(); exposed for tests and tail studies.
double invert_at(const TransformFn& f, double x, int order = 32, double abscissa = 0.0,
                 double* err_estimate = nullptr);

// f(x) = C/Gamma(-s) x^{-s-1} e^{zeta* x}; Gamma(-1/2) = -2 sqrt(pi) is
// hard-coded for the half-integer case used throughout.
struct HeavisideAsymptote {
    double zeta_star;     // dominant singularity, < 0
    double s_exponent;    // non-integer, > 0 (1/2 here)
    double c_coefficient; // amplitude of the (z - zeta*)^s term
    double k_constant;    // transform value at the singularity
};

double heaviside_tail(const HeavisideAsymptote& h, double x);

// Estimates K and C of f~(z) = K - C (z - zeta*)^s + o(...) for s = 1/2 by
// slope extrapolation at zeta* + eps, eps in {1e-4, 1e-6, 1e-8}, with
// Richardson extrapolation in sqrt(eps). FitError when the slopes disagree
// by more than 5% (no square-root singular part).
HeavisideAsymptote fit_singularity(const std::function<double(double)>& transform,
                                   double zeta_star);

} // namespace levyqs

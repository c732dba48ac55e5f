#include "levyqs/exponent_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace levyqs {

namespace {

constexpr double kTol = 1e-13;
constexpr int kMaxIter = 200;

double deriv1(const LevyModel& m, double eta) { return laplace_exponent_derivs(m, eta).d1; }

// Safeguarded Newton on a function with known bracket [lo, hi] and sign
// change f(lo) <= 0 <= f(hi). Bisection step whenever Newton leaves the
// bracket or stalls.
template <class F, class DF>
double newton_bracketed(F f, DF df, double lo, double hi, double scale) {
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < kMaxIter; ++it) {
        const double fx = f(x);
        if (std::abs(fx) <= kTol * scale && (hi - lo) <= 1e-10 * (1.0 + std::abs(x)))
            return x;
        if (fx > 0.0) hi = x; else lo = x;
        const double d = df(x);
        double xn = (d != 0.0) ? x - fx / d : x;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (xn == x) {
            if (hi - lo <= 4e-16 * (1.0 + std::abs(x))) return x;
            xn = 0.5 * (lo + hi);
        }
        x = xn;
    }
    if (std::abs(f(x)) <= 1e-9 * scale) return x;
    throw ConvergenceError("root finder failed to converge");
}

// Argmin of the model's own exponent: the zero of psi' on the interior of
// Theta. Requires a sign change; callers interpret failure.
double exponent_argmin(const LevyModel& m) {
    // locate lo with psi'(lo) < 0
    double lo, hi;
    if (m.mean() < 0.0) {
        lo = 0.0;
        // find hi with psi'(hi) > 0, respecting a finite right endpoint
        if (std::isfinite(m.theta_hi())) {
            const double edge = m.theta_hi();
            hi = 0.5 * edge;
            for (int k = 0; k < 200 && deriv1(m, hi) <= 0.0; ++k) hi = edge - 0.5 * (edge - hi);
            if (deriv1(m, hi) <= 0.0)
                throw AssumptionViolation("exponent attains no interior minimum");
        } else {
            hi = 1.0;
            for (int k = 0; k < 400 && deriv1(m, hi) <= 0.0; ++k) hi *= 2.0;
            if (deriv1(m, hi) <= 0.0)
                throw AssumptionViolation("exponent attains no interior minimum");
        }
    } else {
        hi = 0.0;
        if (std::isfinite(m.theta_lo())) {
            const double edge = m.theta_lo();
            lo = 0.5 * edge;
            for (int k = 0; k < 200 && deriv1(m, lo) >= 0.0; ++k) lo = edge - 0.5 * (edge - lo);
            if (deriv1(m, lo) >= 0.0)
                throw AssumptionViolation("exponent attains no interior minimum");
        } else {
            lo = -1.0;
            for (int k = 0; k < 400 && deriv1(m, lo) >= 0.0; ++k) lo *= 2.0;
            if (deriv1(m, lo) >= 0.0)
                throw AssumptionViolation("exponent attains no interior minimum");
        }
    }
    auto f = [&](double x) { return deriv1(m, x); };
    auto df = [&](double x) { return laplace_exponent_derivs(m, x).d2; };
    const double scale = std::max(1.0, std::abs(deriv1(m, 0.5 * (lo + hi))));
    return newton_bracketed(f, df, lo, hi, scale);
}

} // namespace

SpectralSide spectral_side(const LevyModel& m) {
    return m.kind == ModelKind::SpectrallyNegativeCP ? SpectralSide::SpectrallyNegative
                                                     : SpectralSide::SpectrallyPositive;
}

LevyModel relevant_exponent_model(const LevyModel& m) {
    return spectral_side(m) == SpectralSide::SpectrallyPositive ? dual(m) : m;
}

CriticalPoints critical_points(const LevyModel& m) {
    if (!m.is_stable()) {
        std::ostringstream os;
        os << "stability condition E X(1) < 0 violated (E X(1) = " << m.mean() << ")";
        throw AssumptionViolation(os.str());
    }
    const SpectralSide side = spectral_side(m);
    const LevyModel em = relevant_exponent_model(m);
    const double theta = exponent_argmin(em);
    const auto d = laplace_exponent_derivs(em, theta);
    if (!(d.psi < 0.0))
        throw AssumptionViolation("exponent minimum is not strictly negative");
    if (side == SpectralSide::SpectrallyPositive && !(theta < 0.0))
        throw AssumptionViolation("dual exponent minimizer must be negative");
    if (side == SpectralSide::SpectrallyNegative && !(theta > 0.0))
        throw AssumptionViolation("exponent minimizer must be positive");
    CriticalPoints cp;
    cp.side = side;
    cp.theta_star = theta;
    cp.zeta_star = d.psi;
    cp.k_star = std::sqrt(2.0 / d.d2);
    cp.psi_prime_zero = laplace_exponent_derivs(em, 0.0).d1;
    cp.phi_zero =
        (m.kind == ModelKind::SpectrallyPositiveCP) ? 0.0 : right_inverse_phi(m, 0.0);
    return cp;
}

double increasing_branch_start(const LevyModel& m) { return exponent_argmin(m); }

double right_inverse_phi(const LevyModel& m, double s) {
    const double theta = exponent_argmin(m);
    const double zeta = laplace_exponent(m, theta);
    if (s < zeta - 1e-12 * std::max(1.0, std::abs(zeta))) {
        std::ostringstream os;
        os << "s = " << s << " below the exponent minimum " << zeta;
        throw BelowSingularity(os.str());
    }
    if (s <= zeta) return theta;
    // bracket on the increasing branch
    double lo = theta, hi;
    if (std::isfinite(m.theta_hi())) {
        const double edge = m.theta_hi();
        hi = theta + 0.5 * (edge - theta);
        for (int k = 0; k < 200 && laplace_exponent(m, hi) < s; ++k)
            hi = edge - 0.5 * (edge - hi);
    } else {
        hi = theta + 1.0;
        for (int k = 0; k < 400 && laplace_exponent(m, hi) < s; ++k)
            hi = theta + 2.0 * (hi - theta);
    }
    if (laplace_exponent(m, hi) < s) throw ConvergenceError("right inverse: no upper bracket");
    auto f = [&](double x) { return laplace_exponent(m, x) - s; };
    auto df = [&](double x) { return laplace_exponent_derivs(m, x).d1; };
    return newton_bracketed(f, df, lo, hi, std::max(1.0, std::abs(s)));
}

namespace detail {

Complex exponent_analytic(const LevyModel& m, Complex eta) {
    Complex v = m.drift * eta + 0.5 * m.sigma * m.sigma * eta * eta;
    if (m.jump_rate > 0.0) {
        const double s = m.jump_sign();
        v += m.jump_rate * s * eta / (m.jump_param - s * eta);
    }
    return v;
}

Complex exponent_analytic_d1(const LevyModel& m, Complex eta) {
    Complex v = m.drift + m.sigma * m.sigma * eta;
    if (m.jump_rate > 0.0) {
        const double s = m.jump_sign();
        const Complex w = m.jump_param - s * eta;
        v += m.jump_rate * m.jump_param * s / (w * w);
    }
    return v;
}

Complex psi_over_eta_analytic(const LevyModel& m, Complex eta) {
    Complex v = m.drift + 0.5 * m.sigma * m.sigma * eta;
    if (m.jump_rate > 0.0) {
        const double s = m.jump_sign();
        v += m.jump_rate * s / (m.jump_param - s * eta);
    }
    return v;
}

Complex psi_over_eta_d1_analytic(const LevyModel& m, Complex eta) {
    Complex v = 0.5 * m.sigma * m.sigma;
    if (m.jump_rate > 0.0) {
        const Complex w = m.jump_param - double(m.jump_sign()) * eta;
        v += m.jump_rate / (w * w);
    }
    return v;
}

Complex pk_kernel_analytic(const LevyModel& m, Complex eta) {
    const Complex h = psi_over_eta_analytic(m, eta);
    return -psi_over_eta_d1_analytic(m, eta) / (h * h);
}

} // namespace detail

Complex right_inverse_phi(const LevyModel& m, Complex s) {
    if (s.imag() == 0.0) {
        const double theta = exponent_argmin(m);
        const double zeta = laplace_exponent(m, theta);
        if (s.real() >= zeta) return Complex(right_inverse_phi(m, s.real()), 0.0);
        // on the cut itself: undefined
        throw BelowSingularity("right inverse requested on the branch cut");
    }
    const double theta = exponent_argmin(m);
    const auto dmin = laplace_exponent_derivs(m, theta);
    const double zeta = dmin.psi;
    const double kstar = std::sqrt(2.0 / dmin.d2);

    const Complex rel = s - zeta;
    const double rho = std::abs(rel);
    const double phi_t = std::arg(rel);

    // start on the real axis at the same distance from the singularity
    Complex eta(right_inverse_phi(m, zeta + rho), 0.0);

    int nseg = std::max(1, (int)std::ceil(std::abs(phi_t) / 0.25));
    for (; nseg <= 4096; nseg *= 2) {
        Complex e = eta;
        bool ok = true;
        for (int j = 1; j <= nseg && ok; ++j) {
            const Complex target = zeta + std::polar(rho, phi_t * j / nseg);
            // expansion seed keeps Newton on the right sheet near the branch point
            if (rho < 1e-3 * std::max(1.0, std::abs(zeta)))
                e = theta + kstar * std::sqrt(target - zeta);
            ok = false;
            for (int it = 0; it < 60; ++it) {
                const Complex f = detail::exponent_analytic(m, e) - target;
                if (std::abs(f) <= kTol * std::max(1.0, std::abs(target))) {
                    ok = true;
                    break;
                }
                const Complex d = detail::exponent_analytic_d1(m, e);
                if (d == Complex(0.0, 0.0)) break;
                e -= f / d;
            }
        }
        if (ok) return e;
    }
    throw ConvergenceError("complex right inverse: Newton continuation failed");
}

TransformValue tilt_exponent(const LevyModel& m, double eta, Complex beta) {
    const Complex a = laplace_exponent(m, Complex(eta, 0.0));
    const Complex b = laplace_exponent(m, eta + beta);
    return b - a;
}

double square_root_expansion(const CriticalPoints& cp, double vartheta) {
    if (vartheta <= cp.zeta_star)
        throw BelowSingularity("argument at or below the dominant singularity");
    return cp.theta_star + cp.k_star * std::sqrt(vartheta - cp.zeta_star);
}

double square_root_expansion(const LevyModel& m, double vartheta) {
    return square_root_expansion(critical_points(m), vartheta);
}

} // namespace levyqs

#include "levyqs/qs_transforms.hpp"

#include <cmath>

namespace levyqs {

namespace {

constexpr double kPoleTol = 1e-8;

void require_nonneg(double alpha, double beta) {
    if (!(alpha >= 0.0) || !(beta >= 0.0))
        throw DomainError("transform arguments alpha, beta must be >= 0");
}

void check_cut(Complex vt, double zeta) {
    if (vt.imag() == 0.0 && vt.real() <= zeta)
        throw DomainError("vartheta on the branch cut (-inf, zeta*]");
}

Complex phi_of(const LevyModel& m, Complex s) {
    if (s.imag() == 0.0) return Complex(right_inverse_phi(m, s.real()), 0.0);
    return right_inverse_phi(m, s);
}

} // namespace

TransformValue master_transform_sp(const LevyModel& m, Complex vt, double alpha,
                                   double beta) {
    if (spectral_side(m) != SpectralSide::SpectrallyPositive)
        throw DomainError("master_transform_sp requires spectrally positive input");
    require_nonneg(alpha, beta);
    const CriticalPoints cp = critical_points(m);
    check_cut(vt, cp.zeta_star);
    const LevyModel em = relevant_exponent_model(m);
    const double dmean = cp.psi_prime_zero;  // dual psi'(0+) > 0
    const double psib = laplace_exponent(em, beta);

    // bracket term 1/h(a+b) with h(u) = dual_psi(u)/u; exact at a+b=0
    const Complex g_ab = 1.0 / Complex(psi_over_eta(em, alpha + beta), 0.0);

    const Complex delta = vt - psib;
    if (std::abs(delta) < kPoleTol * std::max(1.0, std::abs(psib))) {
        // removable: [B(vt)-B(vt0)]/(vt-vt0) -> B'(midpoint), B = -1/h(a+Phi(.))
        const Complex mid = 0.5 * (vt + psib);
        const Complex phimid = phi_of(em, mid);
        const Complex u = alpha + phimid;
        const Complex h = detail::psi_over_eta_analytic(em, u);
        const Complex hp = detail::psi_over_eta_d1_analytic(em, u);
        const Complex dphi = 1.0 / detail::exponent_analytic_d1(em, phimid);
        return dmean * hp / (h * h) * dphi;
    }
    const Complex u = alpha + phi_of(em, vt);
    const Complex g_aphi = 1.0 / detail::psi_over_eta_analytic(em, u);
    return dmean / delta * (g_ab - g_aphi);
}

TransformValue master_transform_sn(const LevyModel& m, Complex vt, double alpha,
                                   double beta) {
    if (m.kind == ModelKind::SpectrallyPositiveCP)
        throw DomainError("master_transform_sn requires spectrally negative input");
    require_nonneg(alpha, beta);
    const double theta_own = increasing_branch_start(m);
    const double zeta = laplace_exponent(m, theta_own);
    check_cut(vt, zeta);
    const double phi0 = right_inverse_phi(m, 0.0);
    const double u = alpha + phi0;
    const double psiu = laplace_exponent(m, u);
    const double mass = phi0 / (alpha + beta + phi0);

    const Complex delta = vt - psiu;
    if (std::abs(delta) < kPoleTol * std::max(1.0, std::abs(psiu))) {
        // removable: (Phi(vt) - u)/(vt - psi(u)) -> Phi'(midpoint)
        const Complex mid = 0.5 * (vt + psiu);
        const Complex phimid = phi_of(m, mid);
        const Complex dphi = 1.0 / detail::exponent_analytic_d1(m, phimid);
        return dphi / (phimid + beta) * mass;
    }
    const Complex phivt = phi_of(m, vt);
    return (phivt - u) / (phivt + beta) * mass / delta;
}

QsTransformPair qs_transform(const LevyModel& m) {
    QsTransformPair p;
    p.cp = critical_points(m);
    p.side = p.cp.side;
    const CriticalPoints cp = p.cp;
    if (p.side == SpectralSide::SpectrallyPositive) {
        const LevyModel em = relevant_exponent_model(m);
        p.a_factor = [em, cp](double a) {
            return cp.zeta_star * pk_kernel(em, a + cp.theta_star);
        };
        p.b_factor = [em, cp](double b) {
            return cp.zeta_star / (cp.zeta_star - laplace_exponent(em, b));
        };
        p.a_factor_c = [em, cp](Complex a) {
            return cp.zeta_star * detail::pk_kernel_analytic(em, a + cp.theta_star);
        };
        p.b_factor_c = [em, cp](Complex b) {
            return cp.zeta_star / (cp.zeta_star - detail::exponent_analytic(em, b));
        };
    } else {
        const LevyModel own = m;
        const double phi0 = cp.phi_zero;
        p.a_factor = [own, cp, phi0](double a) {
            return -cp.zeta_star / (laplace_exponent(own, a + phi0) - cp.zeta_star);
        };
        p.b_factor = [cp](double b) {
            const double r = cp.theta_star / (cp.theta_star + b);
            return r * r;
        };
        p.a_factor_c = [own, cp, phi0](Complex a) {
            return -cp.zeta_star / (detail::exponent_analytic(own, a + phi0) - cp.zeta_star);
        };
        p.b_factor_c = [cp](Complex b) {
            const Complex r = cp.theta_star / (cp.theta_star + b);
            return r * r;
        };
    }
    return p;
}

RemarkFactors remark_factors(const LevyModel& m) {
    const CriticalPoints cp = critical_points(m);
    if (cp.side != SpectralSide::SpectrallyPositive)
        throw DomainError("the three-factor decomposition applies to the spectrally positive side");
    const LevyModel em = relevant_exponent_model(m);
    RemarkFactors f;
    f.tilted_stationary = [em, cp](double a) {
        // (a+t*)/psi(a+t*) * zeta*/t*, cancellation-free via psi/eta
        return (cp.zeta_star / cp.theta_star) / psi_over_eta(em, a + cp.theta_star);
    };
    f.third = [em, cp](double a) {
        return psi_over_eta_d1(em, a + cp.theta_star) / psi_over_eta_d1(em, cp.theta_star);
    };
    return f;
}

double busy_period_tail(const CriticalPoints& cp, double t) {
    const double twosqrtpi = 2.0 * std::sqrt(M_PI);
    double amp;
    if (cp.side == SpectralSide::SpectrallyPositive) {
        amp = cp.psi_prime_zero * cp.k_star / (cp.zeta_star * cp.zeta_star * twosqrtpi);
    } else {
        amp = cp.phi_zero * cp.k_star /
              (cp.theta_star * cp.theta_star * (-cp.zeta_star) * twosqrtpi);
    }
    return amp * std::pow(t, -1.5) * std::exp(cp.zeta_star * t);
}

double busy_period_tail(const LevyModel& m, double t) {
    return busy_period_tail(critical_points(m), t);
}

double brownian_exact_tail(double sigma, double t) {
    if (!(sigma > 0.0) || !(t >= 0.0))
        throw DomainError("brownian_exact_tail requires sigma > 0, t >= 0");
    const double tau = t / (sigma * sigma);
    if (tau == 0.0) return 1.0;
    const double st = std::sqrt(tau);
    // Phi_N(-x) = erfc(x/sqrt2)/2; both terms carry full relative accuracy,
    // so the cancellation at large tau stays benign.
    const double cdf_neg = 0.5 * std::erfc(st / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * tau) / std::sqrt(2.0 * M_PI);
    return 2.0 * (1.0 + tau) * cdf_neg - 2.0 * st * pdf;
}

} // namespace levyqs

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levyqs/qs_transforms.hpp"

using namespace levyqs;

namespace {
const LevyModel kMm1 = LevyModel::spectrally_positive_cp(-1.0, 1.0, 2.0);
const LevyModel kBrownian = LevyModel::linear_brownian(1.0, -1.0);
const LevyModel kSnCp = LevyModel::spectrally_negative_cp(1.0, 3.0, 2.0);
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

double normal_upper(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// independent quadrature oracle for the Brownian survival probability:
// integrate P_q(T > t) against pi(dq) = 2 e^{-2q} dq (unit sigma/drift)
double brownian_tail_quadrature(double t) {
    const double st = std::sqrt(t);
    auto integrand = [&](double q) {
        const double pq = normal_upper((t - q) / st) -
                          std::exp(2.0 * q) * normal_upper((t + q) / st);
        return 2.0 * std::exp(-2.0 * q) * pq;
    };
    // Simpson on [0, 30]
    const int n = 20000;
    const double h = 30.0 / n;
    double acc = integrand(0.0) + integrand(30.0);
    for (int i = 1; i < n; ++i) acc += integrand(i * h) * ((i & 1) ? 4.0 : 2.0);
    return acc * h / 3.0;
}
} // namespace

TEST_CASE("spectrally positive master transform: M/M/1 values") {
    // alpha = beta = 0: L(vt;0,0) = 1/vt - psi'(0+) Phi(vt)/vt^2; at vt = 1 this
    // is 1 - sqrt(2)/2 since Phi(1) = sqrt(2)
    const double l100 = master_transform_sp(kMm1, Complex(1, 0), 0, 0).real();
    CHECK(l100 == doctest::Approx(1.0 - kSqrt2 / 2.0).epsilon(1e-13));
    // regression anchors (independently re-derived in the MC suite)
    CHECK(master_transform_sp(kMm1, Complex(1, 0), 0.5, 1.0).real() ==
          doctest::Approx(0.08528137423857029).epsilon(1e-12));
    CHECK(master_transform_sp(kMm1, Complex(2, 0), 1.0, 0.25).real() ==
          doctest::Approx(0.06050709425790257).epsilon(1e-12));
}

TEST_CASE("vt L(vt;0,0) limits") {
    // vt -> inf: mass of pi without its atom (rho for M/M/1, 1 for Brownian)
    const double big = 1e6;
    CHECK(big * master_transform_sp(kMm1, Complex(big, 0), 0, 0).real() ==
          doctest::Approx(0.5).epsilon(1e-4));
    CHECK(big * master_transform_sp(kBrownian, Complex(big, 0), 0, 0).real() ==
          doctest::Approx(1.0).epsilon(2e-3));
    // vt -> 0+: busy periods are a.s. finite, so vt L -> 0
    CHECK(1e-6 * master_transform_sp(kMm1, Complex(1e-6, 0), 0, 0).real() < 1e-4);
}

TEST_CASE("spectrally negative master transform: Brownian closed form") {
    // Phi(1) = 1 + sqrt(3); L(1;0,0) = (sqrt3-1)/(sqrt3+1) = 2 - sqrt3
    const double v = master_transform_sn(kBrownian, Complex(1, 0), 0, 0).real();
    CHECK(v == doctest::Approx(2.0 - kSqrt3).epsilon(1e-13));
    // transform of a finite measure decays in beta
    CHECK(std::abs(master_transform_sn(kBrownian, Complex(1, 0), 0.0, 1e8).real()) < 1e-6);
}

TEST_CASE("Brownian input satisfies both one-sided formulas") {
    for (double vt : {0.3, 1.0, 2.7}) {
        for (double a : {0.0, 0.5, 2.0}) {
            for (double b : {0.0, 0.4, 1.5}) {
                const double sp = master_transform_sp(kBrownian, Complex(vt, 0), a, b).real();
                const double sn = master_transform_sn(kBrownian, Complex(vt, 0), a, b).real();
                CHECK(sp == doctest::Approx(sn).epsilon(1e-11));
            }
        }
    }
    // and for complex arguments off the real axis
    const Complex z(-0.2, 0.9);
    const Complex sp = master_transform_sp(kBrownian, z, 0.3, 0.7);
    const Complex sn = master_transform_sn(kBrownian, z, 0.3, 0.7);
    CHECK(std::abs(sp - sn) < 1e-11);
}

TEST_CASE("removable pole at vt = psi_dual(beta)") {
    const LevyModel md = dual(kMm1);
    const double beta = 0.8;
    const double vt0 = laplace_exponent(md, beta);
    const double limit = master_transform_sp(kMm1, Complex(vt0, 0), 0.4, beta).real();
    for (double eps : {1e-4, 1e-6}) {
        const double near = master_transform_sp(kMm1, Complex(vt0 + eps, 0), 0.4, beta).real();
        CHECK(near == doctest::Approx(limit).epsilon(1e-3 * eps / 1e-6 + 1e-4));
    }
    // same on the spectrally negative side: vt = psi(alpha + Phi(0))
    const double alpha = 0.6;
    const double u = alpha + right_inverse_phi(kSnCp, 0.0);
    const double vt1 = laplace_exponent(kSnCp, u);
    const double lim2 = master_transform_sn(kSnCp, Complex(vt1, 0), alpha, 0.3).real();
    const double near2 = master_transform_sn(kSnCp, Complex(vt1 + 1e-5, 0), alpha, 0.3).real();
    CHECK(near2 == doctest::Approx(lim2).epsilon(1e-4));
}

TEST_CASE("domain guards") {
    CHECK_THROWS_AS(master_transform_sp(kSnCp, Complex(1, 0), 0, 0), DomainError);
    CHECK_THROWS_AS(master_transform_sn(kMm1, Complex(1, 0), 0, 0), DomainError);
    CHECK_THROWS_AS(master_transform_sp(kMm1, Complex(1, 0), -0.5, 0), DomainError);
    const CriticalPoints cp = critical_points(kMm1);
    CHECK_THROWS_AS(master_transform_sp(kMm1, Complex(cp.zeta_star - 0.1, 0), 0, 0),
                    DomainError);
}

TEST_CASE("QS transform pair: Brownian is Erlang(2) on both sides") {
    const QsTransformPair p = qs_transform(kBrownian);
    for (int i = 0; i <= 40; ++i) {
        const double a = 0.25 * i;
        const double erl = 1.0 / ((1.0 + a) * (1.0 + a));
        CHECK(p.a_factor(a) == doctest::Approx(erl).epsilon(1e-11));
        CHECK(p.b_factor(a) == doctest::Approx(erl).epsilon(1e-11));
    }
}

TEST_CASE("QS transform pair: M/M/1 closed forms") {
    const QsTransformPair p = qs_transform(kMm1);
    const double l = 1.0, n = 2.0;
    const double rA = std::sqrt(l * n) - l;            // left law: Erlang(2, sqrt(ln)-l)
    const double rB = std::sqrt(n) * (std::sqrt(n) - std::sqrt(l));
    for (int i = 0; i <= 50; ++i) {
        const double s = 0.2 * i;
        CHECK(p.a_factor(s) ==
              doctest::Approx(rA * rA / ((s + rA) * (s + rA))).epsilon(1e-11));
        const double want_b = (n + s) * std::pow((std::sqrt(n) - std::sqrt(l)) / (s + rB), 2);
        CHECK(p.b_factor(s) == doctest::Approx(want_b).epsilon(1e-11));
    }
    // the removable point alpha = -theta* is finite and consistent
    const double a0 = -p.cp.theta_star;
    CHECK(p.a_factor(a0) == doctest::Approx(rA * rA / ((a0 + rA) * (a0 + rA))).epsilon(1e-10));
}

TEST_CASE("QS normalization and monotonicity") {
    for (const auto& m : {kMm1, kBrownian, kSnCp}) {
        const QsTransformPair p = qs_transform(m);
        CHECK(p.a_factor(0.0) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(p.b_factor(0.0) == doctest::Approx(1.0).epsilon(1e-10));
        // completely-monotone-compatible at order 2
        const double h = 1e-3;
        for (auto& f : {p.a_factor, p.b_factor}) {
            for (int i = 1; i <= 30; ++i) {
                const double s = 0.2 * i;
                CHECK(f(s + h) - f(s - h) <= 1e-12);
                CHECK(f(s + h) - 2 * f(s) + f(s - h) >= -1e-12);
            }
        }
    }
}

TEST_CASE("three-factor decomposition multiplies back to the left transform") {
    for (const auto& m :
         {kMm1, kBrownian, LevyModel::spectrally_positive_cp(-2.0, 1.0, 1.0)}) {
        const QsTransformPair p = qs_transform(m);
        const RemarkFactors f = remark_factors(m);
        CHECK(f.tilted_stationary(0.0) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(f.third(0.0) == doctest::Approx(1.0).epsilon(1e-12));
        for (int i = 0; i <= 50; ++i) {
            const double a = 0.15 * i;
            const double t = f.tilted_stationary(a);
            CHECK(t * t * f.third(a) == doctest::Approx(p.a_factor(a)).epsilon(1e-10));
        }
    }
    // Brownian third factor is identically 1 (the third summand is 0)
    const RemarkFactors fb = remark_factors(kBrownian);
    for (double a : {0.3, 1.0, 4.0}) CHECK(fb.third(a) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(remark_factors(kSnCp), DomainError);
}

TEST_CASE("singular amplitude ratios reproduce the QS factors") {
    // (L(zeta*+eps) - L(zeta*)) / sqrt(eps) tends to -C(a,b) with C proportional
    // to A(a) B(b); ratios across argument pairs converge to the factor ratios
    for (const auto& m : {kMm1, kBrownian}) {
        const CriticalPoints cp = critical_points(m);
        const QsTransformPair p = qs_transform(m);
        const double pairs[2][2] = {{0.3, 0.6}, {1.1, 0.2}};
        double prev_err = 1e300;
        for (double eps : {1e-4, 1e-6, 1e-8}) {
            double amp[2];
            for (int i = 0; i < 2; ++i) {
                const double a = pairs[i][0], b = pairs[i][1];
                const double lz =
                    master_transform_sp(m, Complex(cp.zeta_star, 0) + 1e-13, a, b).real();
                const double le =
                    master_transform_sp(m, Complex(cp.zeta_star + eps, 0), a, b).real();
                amp[i] = (lz - le) / std::sqrt(eps);
            }
            const double want = (p.a_factor(pairs[0][0]) * p.b_factor(pairs[0][1])) /
                                (p.a_factor(pairs[1][0]) * p.b_factor(pairs[1][1]));
            const double err = std::abs(amp[0] / amp[1] - want);
            CHECK(err < std::max(1e-4, prev_err));
            prev_err = err;
        }
    }
}

TEST_CASE("busy-period tail asymptote") {
    // Brownian: 4/(t sqrt t) e^{-t/2} / sqrt(2 pi)
    for (double t : {2.0, 8.0, 20.0}) {
        const double want = 4.0 / (t * std::sqrt(t)) * std::exp(-0.5 * t) /
                            std::sqrt(2.0 * M_PI);
        CHECK(busy_period_tail(kBrownian, t) == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(busy_period_tail(kBrownian, 8.0) == doctest::Approx(1.2917e-3).epsilon(1e-4));
    // positive on both sides
    CHECK(busy_period_tail(kSnCp, 5.0) > 0.0);
    CHECK(busy_period_tail(kMm1, 5.0) > 0.0);
}

TEST_CASE("Brownian exact tail: frozen values and the quadrature oracle") {
    CHECK(brownian_exact_tail(1.0, 0.0) == 1.0);
    CHECK(brownian_exact_tail(1.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(brownian_exact_tail(1.0, 1.0) ==
          doctest::Approx(0.150679566688).epsilon(1e-11));
    CHECK(brownian_exact_tail(1.0, 8.0) ==
          doctest::Approx(7.65644121241e-4).epsilon(1e-11));
    CHECK(brownian_exact_tail(1.0, 50.0) ==
          doctest::Approx(5.61168607431e-14).epsilon(1e-9));
    // independent quadrature over the stationary law
    CHECK(brownian_exact_tail(1.0, 1.0) ==
          doctest::Approx(brownian_tail_quadrature(1.0)).epsilon(1e-8));
    CHECK(brownian_exact_tail(1.0, 8.0) ==
          doctest::Approx(brownian_tail_quadrature(8.0)).epsilon(1e-8));
    // general sigma via time scaling
    CHECK(brownian_exact_tail(2.0, 8.0) ==
          doctest::Approx(brownian_exact_tail(1.0, 2.0)).epsilon(1e-14));
}

TEST_CASE("asymptote-to-exact ratio: measured finite-t gap") {
    // the leading-order asymptote approaches the exact tail from above with a
    // 1 + 6/t + O(1/t^2) correction; at t = 50 the gap is still 11.7%
    auto ratio = [](double t) {
        return busy_period_tail(kBrownian, t) / brownian_exact_tail(1.0, t);
    };
    CHECK(ratio(8.0) == doctest::Approx(1.6870587).epsilon(1e-5));
    CHECK(ratio(50.0) == doctest::Approx(1.1170166).epsilon(1e-5));
    CHECK(ratio(150.0) == doctest::Approx(1.0396262).epsilon(1e-4));
    CHECK(ratio(150.0) < 1.05);
    CHECK(ratio(400.0) < 1.016);
    // monotone approach to 1
    CHECK(ratio(8.0) > ratio(20.0));
    CHECK(ratio(20.0) > ratio(50.0));
    CHECK(ratio(50.0) > ratio(150.0));
}

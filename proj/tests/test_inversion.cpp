#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levyqs/closed_forms.hpp"
#include "levyqs/laplace_inversion.hpp"
#include "levyqs/qs_transforms.hpp"

using namespace levyqs;

namespace {
const LevyModel kMm1 = LevyModel::spectrally_positive_cp(-1.0, 1.0, 2.0);
const LevyModel kBrownian = LevyModel::linear_brownian(1.0, -1.0);

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}
} // namespace

TEST_CASE("known transform pairs invert to 1e-8 on [0, 10]") {
    struct Pair {
        const char* name;
        TransformFn tf;
        std::function<double(double)> f;
    };
    const std::vector<Pair> pairs = {
        {"exp(-x)", [](Complex z) { return 1.0 / (z + 1.0); },
         [](double x) { return std::exp(-x); }},
        {"x exp(-x)", [](Complex z) { return 1.0 / ((z + 1.0) * (z + 1.0)); },
         [](double x) { return x * std::exp(-x); }},
        {"x^2 exp(-x)/2", [](Complex z) { return 1.0 / std::pow(z + 1.0, 3); },
         [](double x) { return 0.5 * x * x * std::exp(-x); }},
        {"exp(-2x)", [](Complex z) { return 1.0 / (z + 2.0); },
         [](double x) { return std::exp(-2.0 * x); }},
        {"x exp(-2x)", [](Complex z) { return 1.0 / ((z + 2.0) * (z + 2.0)); },
         [](double x) { return x * std::exp(-2.0 * x); }},
        {"exp(-x) - exp(-2x)", [](Complex z) { return 1.0 / ((z + 1.0) * (z + 2.0)); },
         [](double x) { return std::exp(-x) - std::exp(-2.0 * x); }},
        {"exp(-x/2)", [](Complex z) { return 1.0 / (z + 0.5); },
         [](double x) { return std::exp(-0.5 * x); }},
        {"Erlang(3,2) density", [](Complex z) { return 8.0 / std::pow(z + 2.0, 3); },
         [](double x) { return 4.0 * x * x * std::exp(-2.0 * x); }},
        {"exp(-x) cos x", [](Complex z) { return (z + 1.0) / ((z + 1.0) * (z + 1.0) + 1.0); },
         [](double x) { return std::exp(-x) * std::cos(x); }},
        {"exp(-x) sin x", [](Complex z) { return 1.0 / ((z + 1.0) * (z + 1.0) + 1.0); },
         [](double x) { return std::exp(-x) * std::sin(x); }},
    };
    for (const auto& p : pairs) {
        InversionSpec spec{p.tf, 0.0, grid(0.05, 10.0, 120), 32};
        const DensityTable t = invert(spec);
        double maxerr = 0.0;
        for (size_t i = 0; i < t.x.size(); ++i)
            maxerr = std::max(maxerr, std::abs(t.f[i] - p.f(t.x[i])));
        INFO(p.name);
        CHECK(maxerr < 1e-8);
    }
}

TEST_CASE("point examples") {
    const double e2 = invert_at([](Complex z) { return 1.0 / (z + 1.0); }, 2.0);
    CHECK(e2 == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
    const double e1 = invert_at([](Complex z) { return 1.0 / ((z + 1.0) * (z + 1.0)); }, 1.0);
    CHECK(e1 == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    // x = 0 goes through the initial-value limit
    InversionSpec spec{[](Complex z) { return 1.0 / (z + 1.0); }, 0.0, {0.0, 1.0}, 32};
    const DensityTable t = invert(spec);
    CHECK(t.f[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("QS factor inversion matches closed-form densities") {
    // M/M/1 right marginal on [0, 10] within 1e-6
    const QsTransformPair p = qs_transform(kMm1);
    InversionSpec spec{p.b_factor_c, 0.0, grid(0.05, 10.0, 120), 32};
    const DensityTable t = invert(spec);
    const RealFn mix = mm1_qs_right_density(1.0, 2.0);
    for (size_t i = 0; i < t.x.size(); ++i) CHECK(std::abs(t.f[i] - mix(t.x[i])) < 1e-6);

    // Brownian: both factors give x e^{-x}
    const QsTransformPair pb = qs_transform(kBrownian);
    for (auto tf : {pb.a_factor_c, pb.b_factor_c}) {
        InversionSpec sb{tf, 0.0, grid(0.05, 10.0, 120), 32};
        const DensityTable tb = invert(sb);
        for (size_t i = 0; i < tb.x.size(); ++i)
            CHECK(std::abs(tb.f[i] - tb.x[i] * std::exp(-tb.x[i])) < 1e-6);
    }
}

TEST_CASE("inverted left QS density is a probability density") {
    for (const auto& m : {kMm1, kBrownian}) {
        const QsTransformPair p = qs_transform(m);
        // 40 mean-multiples with the left-law rate
        const double rate =
            (m.kind == ModelKind::LinearBrownian) ? 1.0 : std::sqrt(2.0) - 1.0;
        InversionSpec spec{p.a_factor_c, 0.0, grid(1e-3, 40.0 / rate, 3000), 32};
        const DensityTable t = invert(spec);
        for (double f : t.f) CHECK(f >= -1e-9);
        CHECK(t.trapezoid_mass() == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("scheme disagreement raises OscillationError") {
    // e^{-z} grows without bound on the left arms of the Talbot contour while
    // the Euler contour stays in the right half plane: the schemes cannot agree
    InversionSpec spec{[](Complex z) { return std::exp(-z) / (z + 1.0); }, 0.0, {2.0}, 32};
    CHECK_THROWS_AS(invert(spec), OscillationError);
}

TEST_CASE("heaviside_tail evaluation") {
    // constants cancel: C = -2 sqrt(pi), s = 1/2 -> x^{-3/2} e^{zeta x}
    const HeavisideAsymptote h{-0.5, 0.5, -2.0 * std::sqrt(M_PI), 0.0};
    CHECK(heaviside_tail(h, 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    // monotone decay past 3/|zeta*|
    double prev = heaviside_tail(h, 6.0);
    for (double x : {7.0, 9.0, 14.0}) {
        const double v = heaviside_tail(h, x);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(heaviside_tail(h, 0.0), DomainError);
    CHECK_THROWS_AS(heaviside_tail(HeavisideAsymptote{-0.5, 1.0, 1.0, 0.0}, 1.0), DomainError);
}

TEST_CASE("busy_period_tail equals heaviside_tail with the analytic constants") {
    const CriticalPoints cp = critical_points(kBrownian);
    // transform-side amplitude C = psi'(0+) k*/(zeta*)^2; the tail carries -C/Gamma(-1/2)
    const double c_analytic = cp.psi_prime_zero * cp.k_star / (cp.zeta_star * cp.zeta_star);
    const HeavisideAsymptote h{cp.zeta_star, 0.5, -c_analytic, 0.0};
    for (double x : {5.0, 10.0, 20.0}) {
        CHECK(heaviside_tail(h, x) ==
              doctest::Approx(busy_period_tail(kBrownian, x)).epsilon(1e-12));
    }
}

TEST_CASE("fit_singularity") {
    // exact square root: K = 0, C = -1
    const double zs = -0.5;
    const auto h = fit_singularity([zs](double v) { return std::sqrt(v - zs); }, zs);
    CHECK(std::abs(h.k_constant) < 1e-10);
    CHECK(h.c_coefficient == doctest::Approx(-1.0).epsilon(1e-6));

    // no singular part
    CHECK_THROWS_AS(fit_singularity([](double v) { return v; }, -0.5), FitError);

    // Brownian survival transform: C = psi'(0+) k* /(zeta*)^2 = 4 sqrt(2)
    const CriticalPoints cb = critical_points(kBrownian);
    const auto hb = fit_singularity(
        [](double v) { return master_transform_sp(kBrownian, Complex(v, 0), 0, 0).real(); },
        cb.zeta_star);
    CHECK(hb.c_coefficient ==
          doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(0.01));

    // M/M/1
    const CriticalPoints cm = critical_points(kMm1);
    const double want = cm.psi_prime_zero * cm.k_star / (cm.zeta_star * cm.zeta_star);
    const auto hm = fit_singularity(
        [](double v) { return master_transform_sp(kMm1, Complex(v, 0), 0, 0).real(); },
        cm.zeta_star);
    CHECK(hm.c_coefficient == doctest::Approx(want).epsilon(0.01));
}

TEST_CASE("heaviside asymptote vs inverted tail at large t") {
    // invert the shifted survival transform of Brownian input and compare with
    // the fitted asymptote; the ratio reaches 5% agreement around t = 150
    const CriticalPoints cp = critical_points(kBrownian);
    // shift the singularity to -0.01 so the shifted inverse stays at a
    // representable scale out to t = 150
    const double shift = cp.zeta_star + 0.01;
    const TransformFn shifted = [shift](Complex z) {
        return master_transform_sp(kBrownian, z + shift, 0.0, 0.0);
    };
    const auto hfit = fit_singularity(
        [](double v) { return master_transform_sp(kBrownian, Complex(v, 0), 0, 0).real(); },
        cp.zeta_star);
    const HeavisideAsymptote tail{cp.zeta_star, 0.5, -hfit.c_coefficient, hfit.k_constant};
    double prev = 1e300;
    for (double t : {50.0, 100.0, 150.0}) {
        const double inv = invert_at(shifted, t) * std::exp(shift * t);
        CHECK(inv == doctest::Approx(brownian_exact_tail(1.0, t)).epsilon(1e-6));
        const double ratio = heaviside_tail(tail, t) / inv;
        CHECK(ratio < prev);
        prev = ratio;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(0.05));  // within 5% at t = 150
}

TEST_CASE("csv rendering is deterministic with 17 significant digits") {
    DensityTable t;
    t.x = {0.1, 0.2};
    t.f = {1.0 / 3.0, 2.0 / 3.0};
    const std::string a = density_to_csv(t), b = density_to_csv(t);
    CHECK(a == b);
    CHECK(a.substr(0, 4) == "x,f\n");
    CHECK(a.find("0.33333333333333331") != std::string::npos);
}

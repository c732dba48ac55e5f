#include "levyqs/closed_forms.hpp"

#include <cmath>

#include "levyqs/exponent_analysis.hpp"

namespace levyqs {

std::string to_string(Marginal m) {
    switch (m) {
        case Marginal::QsLeft: return "QS_left";
        case Marginal::QsRight: return "QS_right";
        case Marginal::Stationary: return "stationary";
    }
    return "?";
}

namespace {

double erlang2_cdf(double rate, double x) {
    if (x <= 0.0) return 0.0;
    return 1.0 - std::exp(-rate * x) * (1.0 + rate * x);
}

void require_subcritical(double lambda, double nu) {
    if (!(lambda > 0.0) || !(nu > 0.0) || !(lambda / nu < 1.0))
        throw ParameterError("requires rho = lambda/nu < 1");
}

} // namespace

RealFn brownian_qs_density(double sigma, Marginal marginal) {
    if (!(sigma > 0.0)) throw ParameterError("sigma must be > 0");
    if (marginal == Marginal::Stationary)
        throw ParameterError("stationary marginal is exponential, not a QS law");
    const double r = 1.0 / (sigma * sigma);
    return [r](double x) { return x <= 0.0 ? 0.0 : r * r * x * std::exp(-r * x); };
}

RealFn brownian_qs_cdf(double sigma, Marginal marginal) {
    if (!(sigma > 0.0)) throw ParameterError("sigma must be > 0");
    (void)marginal;
    const double r = 1.0 / (sigma * sigma);
    return [r](double x) { return erlang2_cdf(r, x); };
}

double Mm1QsLeftSampler::operator()(SplitMix64& rng) const {
    const std::uint64_t m = 2 + rng.geometric(nb_p) + rng.geometric(nb_p);
    double s = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) s += rng.exponential(stage_rate);
    return s;
}

Mm1QsLeftSampler mm1_qs_left_sampler(double lambda, double nu) {
    require_subcritical(lambda, nu);
    return Mm1QsLeftSampler{std::sqrt(lambda * nu), std::sqrt(lambda / nu)};
}

double mm1_qs_left_pmf_check(double lambda, double nu, int m) {
    require_subcritical(lambda, nu);
    if (m < 2) return 0.0;
    const double q = std::sqrt(lambda / nu);
    return (m - 1) * std::pow(q, m - 2) * (1.0 - q) * (1.0 - q);
}

RealFn mm1_qs_left_cdf(double lambda, double nu) {
    require_subcritical(lambda, nu);
    const double c = std::sqrt(lambda * nu);
    // truncate the NB mixture where the residual mass drops below 1e-14
    std::vector<double> w;  // w[k] = P(M = k + 2)
    double tail = 1.0;
    for (int m = 2; m < 10000 && tail > 1e-14; ++m) {
        const double pm = mm1_qs_left_pmf_check(lambda, nu, m);
        w.push_back(pm);
        tail -= pm;
    }
    return [c, w](double x) {
        if (x <= 0.0) return 0.0;
        if (c * x > 500.0) return 1.0;
        // Erlang(m, c) CDF = 1 - e^{-cx} sum_{j<m} (cx)^j/j!, built up in m
        const double ecx = std::exp(-c * x);
        double term = 1.0;  // (cx)^j/j! at j = 0
        double psum = 1.0;  // sum over j < m, starting at m = 1
        double cdf = 0.0;
        for (size_t k = 0; k < w.size(); ++k) {
            const int m = static_cast<int>(k) + 2;
            term *= c * x / (m - 1);
            psum += term;
            cdf += w[k] * (1.0 - ecx * psum);
        }
        return std::min(1.0, std::max(0.0, cdf));
    };
}

RealFn mm1_qs_right_density(double lambda, double nu) {
    require_subcritical(lambda, nu);
    const double q = std::sqrt(lambda / nu);
    const double r = nu - std::sqrt(lambda * nu);
    return [q, r](double y) {
        if (y < 0.0) return 0.0;  // exponential component is positive at y = 0
        return (1.0 - q) * r * std::exp(-r * y) + q * r * r * y * std::exp(-r * y);
    };
}

RealFn mm1_qs_right_cdf(double lambda, double nu) {
    require_subcritical(lambda, nu);
    const double q = std::sqrt(lambda / nu);
    const double r = nu - std::sqrt(lambda * nu);
    return [q, r](double y) {
        if (y <= 0.0) return 0.0;
        return (1.0 - q) * (1.0 - std::exp(-r * y)) + q * erlang2_cdf(r, y);
    };
}

double RemarkDecompositionSampler::operator()(SplitMix64& rng) const {
    if (kind == Kind::Brownian) return rng.exponential(b) + rng.exponential(b);
    double s = 0.0;
    const std::uint64_t n1 = rng.geometric(p), n2 = rng.geometric(p);
    for (std::uint64_t i = 0; i < n1 + n2 + 2; ++i) s += rng.exponential(b);
    return s;
}

RemarkDecompositionSampler remark_decomposition_sampler(const LevyModel& m) {
    const CriticalPoints cp = critical_points(m);
    if (cp.side != SpectralSide::SpectrallyPositive)
        throw DomainError("decomposition sampler requires spectrally positive input");
    if (m.kind == ModelKind::LinearBrownian) {
        // tilted stationary pieces Exp(|drift|/sigma^2); third piece is 0
        return RemarkDecompositionSampler{RemarkDecompositionSampler::Kind::Brownian,
                                          -m.drift / (m.sigma * m.sigma), 0.0};
    }
    if (m.sigma != 0.0)
        throw CapabilityError("decomposition sampler supports diffusionless compound "
                              "Poisson and pure Brownian input");
    const double b = m.jump_param + cp.theta_star;  // = sqrt(lambda nu / |drift|)
    const double p = m.jump_rate / (-m.drift * b);
    return RemarkDecompositionSampler{RemarkDecompositionSampler::Kind::CompoundPoisson, b, p};
}

RealFn stationary_cdf(const LevyModel& m) {
    const StationaryLaw law = stationary_law(m);
    if (law.kind == StationaryLaw::Kind::ExponentialRate) {
        const double r = law.rate;
        return [r](double x) { return x < 0.0 ? 0.0 : 1.0 - std::exp(-r * x); };
    }
    const double rho = law.rho;
    const double decay = law.jump_param * (1.0 - law.rho);
    return [rho, decay](double x) { return x < 0.0 ? 0.0 : 1.0 - rho * std::exp(-decay * x); };
}

DensityTable tabulate(const RealFn& f, const std::vector<double>& grid,
                      const std::string& model_id, const std::string& marginal,
                      const std::string& method) {
    DensityTable t;
    t.x = grid;
    t.f.reserve(grid.size());
    for (double x : grid) t.f.push_back(f(x));
    t.meta = {model_id, marginal, method};
    return t;
}

} // namespace levyqs

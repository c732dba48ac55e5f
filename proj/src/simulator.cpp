#include "levyqs/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "levyqs/errors.hpp"

namespace levyqs {

namespace engine {

PathOutcome cp_path(double q0, double drift, double lambda, double nu, int jump_sign,
                    double horizon, SplitMix64& rng) {
    double q = q0, s = 0.0;
    if (q <= 0.0) return {false, 0.0};
    if (jump_sign >= 0) {
        // downward drift, upward jumps: level can only hit zero between jumps
        const double c = -drift;
        while (true) {
            const double gap = (lambda > 0.0) ? rng.exponential(lambda)
                                              : std::numeric_limits<double>::infinity();
            const double t_dead = s + q / c;
            if (t_dead <= std::min(s + gap, horizon)) return {false, 0.0};
            if (s + gap >= horizon) return {true, q - c * (horizon - s)};
            q -= c * gap;
            q += rng.exponential(nu);
            s += gap;
        }
    }
    // upward drift, downward jumps: level can only hit zero at a jump
    const double c = drift;
    while (true) {
        const double gap = rng.exponential(lambda);
        if (s + gap >= horizon) return {true, q + c * (horizon - s)};
        s += gap;
        q += c * gap - rng.exponential(nu);
        if (q <= 0.0) return {false, 0.0};
    }
}

PathOutcome brownian_path(double q0, double drift, double sigma, double dt, double horizon,
                          SplitMix64& rng) {
    double q = q0, s = 0.0;
    if (q <= 0.0) return {false, 0.0};
    const double s2dt_inv = 1.0 / (sigma * sigma);
    while (s < horizon) {
        const double h = std::min(dt, horizon - s);
        const double qn = q + drift * h + sigma * std::sqrt(h) * rng.normal();
        if (qn <= 0.0) return {false, 0.0};
        // bridge minimum law: P(min <= 0 | endpoints) = exp(-2 q qn / (sigma^2 h))
        const double expo = 2.0 * q * qn * s2dt_inv / h;
        if (expo < 40.0 && rng.uniform() < std::exp(-expo)) return {false, 0.0};
        q = qn;
        s += h;
    }
    return {true, q};
}

} // namespace engine

namespace {

struct PathLaunch {
    // draws Q(0) and runs one path; q0 == 0 counts as an immediate death
    const LevyModel& model;
    const StationaryLaw& law;
    double dt;

    std::pair<double, engine::PathOutcome> operator()(double horizon, SplitMix64& rng) const {
        double q0;
        if (law.kind == StationaryLaw::Kind::ExponentialRate) {
            q0 = rng.exponential(law.rate);
        } else {
            const std::uint64_t n = rng.geometric(law.rho);
            q0 = 0.0;
            for (std::uint64_t i = 0; i < n; ++i) q0 += rng.exponential(law.jump_param);
        }
        if (q0 <= 0.0) return {q0, {false, 0.0}};
        if (model.kind == ModelKind::LinearBrownian)
            return {q0, engine::brownian_path(q0, model.drift, model.sigma, dt, horizon, rng)};
        return {q0, engine::cp_path(q0, model.drift, model.jump_rate, model.jump_param,
                                    model.jump_sign(), horizon, rng)};
    }
};

void validate_common(const SimulationConfig& c) {
    if (!(c.horizon_t > 0.0)) throw ConfigError("horizon_t must be > 0");
    if (c.n_paths < 1) throw ConfigError("n_paths must be >= 1");
    if (!c.model.is_stable()) throw StabilityError("E X(1) >= 0: busy periods need not end");
}

EmpiricalConditional run_conditional(const SimulationConfig& c) {
    const StationaryLaw law = stationary_law(c.model);
    const PathLaunch launch{c.model, law, c.brownian_dt};
    const unsigned workers = std::max(1u, c.workers);
    const std::uint64_t n = c.n_paths;

    std::vector<std::vector<EmpiricalConditional::Pair>> parts(workers);
    auto work = [&](unsigned w) {
        const std::uint64_t lo = n * w / workers, hi = n * (w + 1) / workers;
        auto& out = parts[w];
        for (std::uint64_t i = lo; i < hi; ++i) {
            SplitMix64 rng = path_stream(c.seed, i);
            const auto [q0, res] = launch(c.horizon_t, rng);
            if (res.survived) out.push_back({i, q0, res.q_end});
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> ths;
        for (unsigned w = 0; w < workers; ++w) ths.emplace_back(work, w);
        for (auto& t : ths) t.join();
    }

    EmpiricalConditional ec;
    ec.n_total = n;
    for (auto& p : parts)
        ec.pairs.insert(ec.pairs.end(), p.begin(), p.end());
    // contiguous blocks arrive in index order already; keep the contract explicit
    std::sort(ec.pairs.begin(), ec.pairs.end(),
              [](const auto& a, const auto& b) { return a.path_index < b.path_index; });
    const double p = double(ec.pairs.size()) / double(n);
    ec.survival_estimate = p;
    ec.std_error = std::sqrt(std::max(0.0, p * (1.0 - p) / double(n)));
    if (ec.pairs.size() < 1000)
        ec.warnings.push_back("fewer than 1000 surviving paths; estimates are underpowered");
    return ec;
}

} // namespace

std::vector<double> EmpiricalConditional::q0_sample() const {
    std::vector<double> v;
    v.reserve(pairs.size());
    for (const auto& p : pairs) v.push_back(p.q0);
    return v;
}

std::vector<double> EmpiricalConditional::qt_sample() const {
    std::vector<double> v;
    v.reserve(pairs.size());
    for (const auto& p : pairs) v.push_back(p.qt);
    return v;
}

EmpiricalConditional simulate_cp(const SimulationConfig& c) {
    validate_common(c);
    if (c.model.kind == ModelKind::LinearBrownian || c.model.sigma != 0.0)
        throw ConfigError("simulate_cp requires compound Poisson input without diffusion");
    return run_conditional(c);
}

EmpiricalConditional simulate_brownian(const SimulationConfig& c) {
    validate_common(c);
    if (c.model.kind != ModelKind::LinearBrownian)
        throw ConfigError("simulate_brownian requires LinearBrownian input");
    if (!(c.brownian_dt > 0.0) || c.brownian_dt > c.horizon_t / 100.0)
        throw ConfigError("brownian_dt must lie in (0, horizon_t/100]");
    EmpiricalConditional ec = run_conditional(c);
    if (c.brownian_dt > 1e-2)
        ec.warnings.insert(ec.warnings.begin(),
                           "brownian_dt > 1e-2 (BiasWarning): bridge kill is exact for "
                           "linear drift, but coarse grids weaken diagnostics");
    return ec;
}

EmpiricalConditional simulate(const SimulationConfig& c) {
    return c.model.kind == ModelKind::LinearBrownian ? simulate_brownian(c) : simulate_cp(c);
}

MasterEstimate estimate_master_transform(const SimulationConfig& c, double vartheta,
                                         double alpha, double beta) {
    validate_common(c);
    if (!(vartheta > 0.0)) throw ConfigError("vartheta must be > 0");
    if (c.model.kind != ModelKind::LinearBrownian && c.model.sigma != 0.0)
        throw ConfigError("estimate_master_transform supports CP and Brownian input");
    const StationaryLaw law = stationary_law(c.model);
    const PathLaunch launch{c.model, law, c.brownian_dt};
    const unsigned workers = std::max(1u, c.workers);
    const std::uint64_t n = c.n_paths;

    // per-path contributions kept in path order so the reduction is
    // independent of the worker split
    std::vector<double> y(n, 0.0);
    auto work = [&](unsigned w) {
        const std::uint64_t lo = n * w / workers, hi = n * (w + 1) / workers;
        for (std::uint64_t i = lo; i < hi; ++i) {
            SplitMix64 rng = path_stream(c.seed, i);
            const double clock = rng.exponential(vartheta);  // drawn before the path
            const auto [q0, res] = launch(clock, rng);
            if (res.survived) y[i] = std::exp(-alpha * q0 - beta * res.q_end);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> ths;
        for (unsigned w = 0; w < workers; ++w) ths.emplace_back(work, w);
        for (auto& t : ths) t.join();
    }
    double sum = 0.0, sumsq = 0.0;
    for (double v : y) {
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / double(n);
    const double var = std::max(0.0, sumsq / double(n) - mean * mean);
    MasterEstimate est;
    est.n = n;
    est.value = mean / vartheta;
    est.std_error = std::sqrt(var / double(n)) / vartheta;
    return est;
}

double ks_distance(const std::vector<double>& sample, const RealFn& cdf) {
    if (sample.empty()) throw EmptySample("ks_distance: empty sample");
    std::vector<double> s(sample);
    std::sort(s.begin(), s.end());
    const double n = double(s.size());
    double d = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        const double F = cdf(s[i]);
        d = std::max(d, std::max((double(i) + 1.0) / n - F, F - double(i) / n));
    }
    return d;
}

std::string empirical_to_csv(const EmpiricalConditional& ec) {
    std::ostringstream os;
    os << "path_index,q0,qt\n";
    char buf[96];
    for (const auto& p : ec.pairs) {
        std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n",
                      static_cast<unsigned long long>(p.path_index), p.q0, p.qt);
        os << buf;
    }
    return os.str();
}

std::string summary_json(const SimulationConfig& c, const EmpiricalConditional& ec) {
    nlohmann::json j{
        {"n_total", ec.n_total},
        {"n_survivors", ec.pairs.size()},
        {"survival_estimate", ec.survival_estimate},
        {"std_error", ec.std_error},
        {"seed", c.seed},
        {"dt", c.brownian_dt},
        {"model", nlohmann::json::parse(model_to_json_text(c.model))},
        {"rng", "splitmix64; path i state = seed + (i+1)*0x9E3779B97F4A7C15"},
        {"warnings", ec.warnings},
    };
    return j.dump(2);
}

} // namespace levyqs

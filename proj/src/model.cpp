#include "levyqs/model.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace levyqs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_shape(const LevyModel& m) {
    if (!std::isfinite(m.drift))
        throw ParameterError("drift must be finite");
    if (!(m.sigma >= 0.0) || !std::isfinite(m.sigma))
        throw ParameterError("sigma must be finite and >= 0");
    if (!(m.jump_rate >= 0.0) || !std::isfinite(m.jump_rate))
        throw ParameterError("jump_rate must be finite and >= 0");
    switch (m.kind) {
        case ModelKind::LinearBrownian:
            if (m.jump_rate != 0.0)
                throw ParameterError("LinearBrownian admits no jumps (jump_rate must be 0)");
            if (m.sigma <= 0.0)
                throw ParameterError("LinearBrownian requires sigma > 0");
            break;
        case ModelKind::SpectrallyPositiveCP:
        case ModelKind::SpectrallyNegativeCP:
            if (m.jump_rate > 0.0 && !(m.jump_param > 0.0))
                throw ParameterError("jump_param must be > 0 when jump_rate > 0");
            if (m.sigma == 0.0 && m.jump_rate == 0.0)
                throw ParameterError("sigma and jump_rate must not both be zero");
            break;
    }
}

} // namespace

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::SpectrallyPositiveCP: return "SpectrallyPositiveCP";
        case ModelKind::SpectrallyNegativeCP: return "SpectrallyNegativeCP";
        case ModelKind::LinearBrownian: return "LinearBrownian";
    }
    return "?";
}

LevyModel LevyModel::spectrally_positive_cp(double drift, double lambda, double nu,
                                            double sigma) {
    LevyModel m{ModelKind::SpectrallyPositiveCP, drift, sigma, lambda, nu};
    validate_shape(m);
    return m;
}

LevyModel LevyModel::spectrally_negative_cp(double drift, double lambda, double nu,
                                            double sigma) {
    LevyModel m{ModelKind::SpectrallyNegativeCP, drift, sigma, lambda, nu};
    validate_shape(m);
    return m;
}

LevyModel LevyModel::linear_brownian(double sigma, double drift) {
    LevyModel m{ModelKind::LinearBrownian, drift, sigma, 0.0, 1.0};
    validate_shape(m);
    return m;
}

int LevyModel::jump_sign() const {
    if (jump_rate == 0.0) return 0;
    return kind == ModelKind::SpectrallyPositiveCP ? +1 : -1;
}

double LevyModel::mean() const {
    return drift + jump_sign() * jump_rate / jump_param;
}

double LevyModel::theta_lo() const {
    return jump_sign() < 0 ? -jump_param : -kInf;
}

double LevyModel::theta_hi() const {
    return jump_sign() > 0 ? jump_param : kInf;
}

LevyModel dual(const LevyModel& m) {
    LevyModel d = m;
    d.drift = -m.drift;
    if (m.kind == ModelKind::SpectrallyPositiveCP)
        d.kind = ModelKind::SpectrallyNegativeCP;
    else if (m.kind == ModelKind::SpectrallyNegativeCP)
        d.kind = ModelKind::SpectrallyPositiveCP;
    return d;
}

namespace {

void check_domain(const LevyModel& m, double re) {
    if (!(re > m.theta_lo() && re < m.theta_hi())) {
        std::ostringstream os;
        os << "Re(eta)=" << re << " outside the finiteness domain ("
           << m.theta_lo() << ", " << m.theta_hi() << ")";
        throw DomainError(os.str());
    }
}

} // namespace

TransformValue laplace_exponent(const LevyModel& m, Complex eta) {
    check_domain(m, eta.real());
    Complex v = m.drift * eta + 0.5 * m.sigma * m.sigma * eta * eta;
    if (m.jump_rate > 0.0) {
        const double s = m.jump_sign();
        // lambda (nu/(nu - s eta) - 1) = lambda s eta / (nu - s eta)
        v += m.jump_rate * s * eta / (m.jump_param - s * eta);
    }
    return v;
}

double laplace_exponent(const LevyModel& m, double eta) {
    check_domain(m, eta);
    double v = m.drift * eta + 0.5 * m.sigma * m.sigma * eta * eta;
    if (m.jump_rate > 0.0) {
        const double s = m.jump_sign();
        v += m.jump_rate * s * eta / (m.jump_param - s * eta);
    }
    return v;
}

ExponentDerivs laplace_exponent_derivs(const LevyModel& m, double eta) {
    check_domain(m, eta);
    const double s2 = m.sigma * m.sigma;
    ExponentDerivs d{m.drift * eta + 0.5 * s2 * eta * eta, m.drift + s2 * eta, s2, 0.0};
    if (m.jump_rate > 0.0) {
        // jump term lambda(nu/w - 1), w = nu - s eta: each d/deta brings a factor s
        const double s = m.jump_sign();
        const double w = m.jump_param - s * eta;
        const double lnu = m.jump_rate * m.jump_param;
        d.psi += m.jump_rate * s * eta / w;
        d.d1 += lnu * s / (w * w);
        d.d2 += 2.0 * lnu / (w * w * w);
        d.d3 += 6.0 * lnu * s / (w * w * w * w);
    }
    return d;
}

Complex laplace_exponent_d1(const LevyModel& m, Complex eta) {
    check_domain(m, eta.real());
    Complex v = m.drift + m.sigma * m.sigma * eta;
    if (m.jump_rate > 0.0) {
        const double s = m.jump_sign();
        const Complex w = m.jump_param - s * eta;
        v += m.jump_rate * m.jump_param * s / (w * w);
    }
    return v;
}

double psi_over_eta(const LevyModel& m, double eta) {
    check_domain(m, eta);
    double v = m.drift + 0.5 * m.sigma * m.sigma * eta;
    if (m.jump_rate > 0.0) {
        const double s = m.jump_sign();
        v += m.jump_rate * s / (m.jump_param - s * eta);
    }
    return v;
}

Complex psi_over_eta(const LevyModel& m, Complex eta) {
    check_domain(m, eta.real());
    Complex v = m.drift + 0.5 * m.sigma * m.sigma * eta;
    if (m.jump_rate > 0.0) {
        const double s = m.jump_sign();
        v += m.jump_rate * s / (m.jump_param - s * eta);
    }
    return v;
}

double psi_over_eta_d1(const LevyModel& m, double u) {
    check_domain(m, u);
    double v = 0.5 * m.sigma * m.sigma;
    if (m.jump_rate > 0.0) {
        const double w = m.jump_param - m.jump_sign() * u;
        v += m.jump_rate / (w * w);
    }
    return v;
}

Complex psi_over_eta_d1(const LevyModel& m, Complex u) {
    check_domain(m, u.real());
    Complex v = 0.5 * m.sigma * m.sigma;
    if (m.jump_rate > 0.0) {
        const Complex w = m.jump_param - double(m.jump_sign()) * u;
        v += m.jump_rate / (w * w);
    }
    return v;
}

double pk_kernel(const LevyModel& m, double u) {
    // psi(u) - u psi'(u) = -u^2 psi_over_eta_d1(u), exactly.
    const double h = psi_over_eta(m, u);
    return -psi_over_eta_d1(m, u) / (h * h);
}

double StationaryLaw::transform(double s) const {
    if (kind == Kind::ExponentialRate) return rate / (rate + s);
    // (1-rho) / (1 - rho * nu/(nu+s))
    return (1.0 - rho) * (jump_param + s) / (jump_param + s - rho * jump_param);
}

double StationaryLaw::mean() const {
    if (kind == Kind::ExponentialRate) return 1.0 / rate;
    return rho / (jump_param * (1.0 - rho));
}

StationaryLaw stationary_law(const LevyModel& m) {
    if (!m.is_stable())
        throw StabilityError("E X(1) >= 0: no stationary workload distribution");
    if (m.kind == ModelKind::SpectrallyPositiveCP) {
        if (m.sigma != 0.0)
            throw CapabilityError(
                "stationary law of a spectrally positive jump diffusion is not "
                "representable as a geometric compound");
        // utilization rho = lambda/(nu |drift|); P-K geometric compound of Exp(nu)
        const double rho = m.jump_rate / (m.jump_param * -m.drift);
        return StationaryLaw{StationaryLaw::Kind::GeometricCompound, 0.0, rho, m.jump_param};
    }
    // Spectrally negative (incl. Brownian): pi(dx) = Phi(0) e^{-Phi(0)x} dx.
    // Phi(0) is the positive root of psi on the increasing branch; for the
    // supported families it solves a linear/quadratic equation.
    double phi0;
    if (m.kind == ModelKind::LinearBrownian) {
        phi0 = -2.0 * m.drift / (m.sigma * m.sigma);
    } else {
        // c eta + sigma^2 eta^2/2 - lambda eta/(nu+eta) = 0, largest root
        const double c = m.drift, s2 = m.sigma * m.sigma;
        if (s2 == 0.0) {
            // c (nu + eta) = lambda  =>  eta = lambda/c - nu
            phi0 = m.jump_rate / c - m.jump_param;
        } else {
            // quadratic in eta: s2/2 eta^2 + (c + s2 nu/2) eta + (c nu - lambda) = 0
            const double a = 0.5 * s2;
            const double b = c + 0.5 * s2 * m.jump_param;
            const double q = c * m.jump_param - m.jump_rate;
            phi0 = (-b + std::sqrt(b * b - 4.0 * a * q)) / (2.0 * a);
        }
    }
    return StationaryLaw{StationaryLaw::Kind::ExponentialRate, phi0, 0.0, 0.0};
}

LevyModel model_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError(std::string("model JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ParameterError("model JSON must be an object");
    static const char* allowed[] = {"kind", "drift", "sigma", "jump_rate", "jump_param"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ParameterError("unknown model field: " + it.key());
    }
    for (const char* a : allowed) {
        if (!j.contains(a)) throw ParameterError(std::string("missing model field: ") + a);
    }
    const std::string kind = j.at("kind").get<std::string>();
    const double drift = j.at("drift").get<double>();
    const double sigma = j.at("sigma").get<double>();
    const double jump_rate = j.at("jump_rate").get<double>();
    const double jump_param = j.at("jump_param").get<double>();
    if (kind == "SpectrallyPositiveCP")
        return LevyModel::spectrally_positive_cp(drift, jump_rate, jump_param, sigma);
    if (kind == "SpectrallyNegativeCP")
        return LevyModel::spectrally_negative_cp(drift, jump_rate, jump_param, sigma);
    if (kind == "LinearBrownian") {
        if (jump_rate != 0.0) throw ParameterError("LinearBrownian requires jump_rate = 0");
        return LevyModel::linear_brownian(sigma, drift);
    }
    throw ParameterError("unknown model kind: " + kind);
}

LevyModel model_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json_text(ss.str());
}

std::string model_to_json_text(const LevyModel& m) {
    nlohmann::json j{{"kind", to_string(m.kind)},
                     {"drift", m.drift},
                     {"sigma", m.sigma},
                     {"jump_rate", m.jump_rate},
                     {"jump_param", m.jump_param}};
    return j.dump();
}

} // namespace levyqs

#include "levyqs/laplace_inversion.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "levyqs/errors.hpp"

namespace levyqs {

double DensityTable::trapezoid_mass() const {
    double m = 0.0;
    for (size_t i = 1; i < x.size(); ++i) m += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    return m;
}

std::string density_to_csv(const DensityTable& t) {
    std::ostringstream os;
    os << "x,f\n";
    char buf[64];
    for (size_t i = 0; i < t.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,", t.x[i]);
        os << buf;
        std::snprintf(buf, sizeof buf, "%.17g\n", t.f[i]);
        os << buf;
    }
    return os.str();
}

namespace {

// Fixed-Talbot rule with M nodes (Abate & Valko). The contour wraps the
// negative real axis, staying off it except at the real starting node.
double talbot(const TransformFn& f, double x, int M) {
    const double r = 2.0 * M / (5.0 * x);
    double acc = 0.5 * std::exp(r * x) * f(Complex(r, 0.0)).real();
    for (int k = 1; k < M; ++k) {
        const double th = k * M_PI / M;
        const double cot = std::cos(th) / std::sin(th);
        const Complex z(r * th * cot, r * th);
        // weight 1 + i sigma(th), sigma = th (1 + cot^2) - cot
        const Complex w(1.0, th * (1.0 + cot * cot) - cot);
        const Complex ez =
            std::exp(z.real() * x) * Complex(std::cos(z.imag() * x), std::sin(z.imag() * x));
        acc += (w * f(z) * ez).real();
    }
    return acc * r / M;
}

// Euler-accelerated Bromwich series (Abate & Whitt). Assumes f real-valued.
double euler(const TransformFn& f, double x) {
    constexpr double A = 24.0;
    constexpr int n = 42, m = 12;
    const double h = M_PI / x;
    const double base = std::exp(0.5 * A) / x;
    double term0 = 0.5 * base * f(Complex(A / (2.0 * x), 0.0)).real();
    std::vector<double> s(n + m + 1);
    double acc = term0;
    for (int k = 1; k <= n + m; ++k) {
        const Complex z(A / (2.0 * x), k * h);
        const double b = base * f(z).real();
        acc += ((k & 1) ? -1.0 : 1.0) * b;
        s[k] = acc;
    }
    // binomial average of s[n..n+m]
    double num = 0.0, den = 0.0, c = 1.0;
    for (int k = 0; k <= m; ++k) {
        num += c * s[n + k];
        den += c;
        c = c * (m - k) / (k + 1.0);
    }
    return num / den;
}

} // namespace

double invert_at(const TransformFn& f, double x, int order, double abscissa,
                 double* err_estimate) {
    if (!(x >= 0.0)) throw DomainError("inversion abscissa x must be >= 0");
    TransformFn g = f;
    double shift = 0.0;
    if (abscissa > 0.0) {
        // move singularities into the left half plane, undo by e^{shift x}
        shift = abscissa;
        g = [f, shift](Complex z) { return f(z + shift); };
    }
    if (x == 0.0) {
        // initial value theorem: f(0+) = lim z f~(z)
        const double v = (g(Complex(1e10, 0.0)) * 1e10).real();
        if (err_estimate) *err_estimate = std::abs(v - (g(Complex(1e8, 0.0)) * 1e8).real());
        return v;
    }
    const double t1 = talbot(g, x, order);
    const double t2 = talbot(g, x, order + 8);
    const double e1 = euler(g, x);
    const double err = std::max(std::abs(t1 - t2), std::abs(t2 - e1));
    if (err_estimate) *err_estimate = err;
    return t2 * std::exp(shift * x);
}

DensityTable invert(const InversionSpec& spec) {
    if (spec.scheme_order < 8) throw ParameterError("scheme_order must be >= 8");
    if (spec.grid.empty()) throw ParameterError("inversion grid is empty");
    for (size_t i = 0; i < spec.grid.size(); ++i) {
        if (!(spec.grid[i] >= 0.0)) throw ParameterError("inversion grid must be nonnegative");
        if (i > 0 && !(spec.grid[i] > spec.grid[i - 1]))
            throw ParameterError("inversion grid must be strictly increasing");
    }
    DensityTable out;
    out.meta.method = "inversion";
    out.x = spec.grid;
    out.f.resize(spec.grid.size());
    for (size_t i = 0; i < spec.grid.size(); ++i) {
        double err = 0.0;
        out.f[i] = invert_at(spec.transform, spec.grid[i], spec.scheme_order, spec.abscissa,
                             &err);
        if (!(err <= 1e-6)) {  // NaN-safe: non-finite estimates must also reject
            std::ostringstream os;
            os << "inversion schemes disagree at x = " << spec.grid[i] << " (estimate " << err
               << ")";
            throw OscillationError(os.str());
        }
    }
    return out;
}

double heaviside_tail(const HeavisideAsymptote& h, double x) {
    if (!(x > 0.0)) throw DomainError("heaviside_tail requires x > 0");
    if (!(h.s_exponent > 0.0) || h.s_exponent == std::floor(h.s_exponent))
        throw DomainError("s must be a positive non-integer");
    const double gamma_ms = (h.s_exponent == 0.5) ? -2.0 * std::sqrt(M_PI)
                                                  : std::tgamma(-h.s_exponent);
    return h.c_coefficient / gamma_ms * std::pow(x, -h.s_exponent - 1.0) *
           std::exp(h.zeta_star * x);
}

HeavisideAsymptote fit_singularity(const std::function<double(double)>& transform,
                                   double zeta_star) {
    const double eps[3] = {1e-4, 1e-6, 1e-8};
    double fv[3], sq[3];
    for (int i = 0; i < 3; ++i) {
        fv[i] = transform(zeta_star + eps[i]);
        sq[i] = std::sqrt(eps[i]);
        if (!std::isfinite(fv[i])) throw FitError("transform not finite near the singularity");
    }
    // K: extrapolate f(zeta*+eps) to eps = 0 linearly in sqrt(eps)
    const double K = fv[2] + (fv[2] - fv[1]) * sq[2] / (sq[1] - sq[2]);
    double slope[3];
    double maxabs = 0.0;
    for (int i = 0; i < 3; ++i) {
        slope[i] = (K - fv[i]) / sq[i];
        maxabs = std::max(maxabs, std::abs(slope[i]));
    }
    const double scale = std::max(1.0, std::abs(K));
    if (maxabs < 1e-10 * scale)
        throw FitError("no square-root singular part detected");
    const double spread =
        (std::max({slope[0], slope[1], slope[2]}) - std::min({slope[0], slope[1], slope[2]}));
    if (spread > 0.05 * maxabs)
        throw FitError("slope estimates disagree by more than 5%");
    // Richardson in sqrt(eps) (ratio 10 between levels)
    const double C = (10.0 * slope[2] - slope[1]) / 9.0;
    return HeavisideAsymptote{zeta_star, 0.5, C, K};
}

} // namespace levyqs

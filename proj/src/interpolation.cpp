#include "twbeta/interpolation.hpp"

#include <cmath>
#include <numbers>

#include "twbeta/error.hpp"

namespace tw {

std::string_view to_string(InterpolantKind kind) { return kind == InterpolantKind::Cdf ? "cdf" : "pdf"; }

ChebyshevInterpolant::ChebyshevInterpolant(InterpolantKind kind, double a, double b, std::vector<double> coefficients)
    : kind_(kind), a_(a), b_(b), coeffs_(std::move(coefficients)) {
    if (!(b_ > a_)) throw InvalidParameter("interpolant domain must satisfy a < b");
    if (coeffs_.empty()) throw InvalidParameter("interpolant needs at least one coefficient");
}

std::vector<double> ChebyshevInterpolant::nodes(std::size_t K, double a, double b) {
    std::vector<double> x(K);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t k = 0; k < K; ++k) {
        x[k] = mid + half * std::cos(std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(K));
    }
    return x;
}

ChebyshevInterpolant ChebyshevInterpolant::fit(InterpolantKind kind, double a, double b,
                                               std::span<const double> values) {
    const std::size_t K = values.size();
    if (K < 2) throw InvalidParameter("Chebyshev fit needs K >= 2");
    // cos(jπ(2k+1)/(2K)) only depends on j(2k+1) mod 4K
    std::vector<double> table(4 * K);
    for (std::size_t i = 0; i < 4 * K; ++i) {
        table[i] = std::cos(std::numbers::pi * static_cast<double>(i) / (2.0 * static_cast<double>(K)));
    }
    std::vector<double> c(K);
    for (std::size_t j = 0; j < K; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) acc += values[k] * table[(j * (2 * k + 1)) % (4 * K)];
        c[j] = 2.0 * acc / static_cast<double>(K);
    }
    c[0] *= 0.5;
    return ChebyshevInterpolant(kind, a, b, std::move(c));
}

double ChebyshevInterpolant::series(double x) const {
    const double t = (2.0 * x - a_ - b_) / (b_ - a_);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = coeffs_.size(); j-- > 1;) {
        const double b0 = 2.0 * t * b1 - b2 + coeffs_[j];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + coeffs_[0];
}

ChebyshevInterpolant::Evaluation ChebyshevInterpolant::evaluate(double x) const {
    if (x < a_) return {0.0, true};
    if (x > b_) return {kind_ == InterpolantKind::Cdf ? 1.0 : 0.0, true};
    return {series(x), false};
}

ChebyshevInterpolant ChebyshevInterpolant::derivative() const {
    const std::size_t K = coeffs_.size();
    std::vector<double> d(std::max<std::size_t>(K, 2), 0.0);
    // d_{j−1} = d_{j+1} + 2j c_j
    for (std::size_t j = K - 1; j >= 1; --j) {
        d[j - 1] = (j + 1 < K ? d[j + 1] : 0.0) + 2.0 * static_cast<double>(j) * coeffs_[j];
    }
    d[0] *= 0.5;
    if (K > 1) d.resize(K - 1);
    const double scale = 2.0 / (b_ - a_);
    for (auto& v : d) v *= scale;
    return ChebyshevInterpolant(InterpolantKind::Pdf, a_, b_, std::move(d));
}

double ChebyshevInterpolant::integral() const {
    double acc = 0.0;
    for (std::size_t j = 0; j < coeffs_.size(); j += 2) {
        const double jd = static_cast<double>(j);
        acc += coeffs_[j] * 2.0 / (1.0 - jd * jd);
    }
    return 0.5 * (b_ - a_) * acc;
}

nlohmann::json ChebyshevInterpolant::to_json() const {
    return {
        {"format", "twbeta-interpolant"},
        {"version", 1},
        {"kind", std::string(to_string(kind_))},
        {"a", a_},
        {"b", b_},
        {"K", coeffs_.size()},
        {"coefficients", coeffs_},
    };
}

ChebyshevInterpolant ChebyshevInterpolant::from_json(const nlohmann::json& doc) {
    try {
        const auto kind_name = doc.at("kind").get<std::string>();
        if (kind_name != "cdf" && kind_name != "pdf") throw InvalidParameter("unknown interpolant kind " + kind_name);
        auto coeffs = doc.at("coefficients").get<std::vector<double>>();
        if (doc.contains("K") && doc.at("K").get<std::size_t>() != coeffs.size()) {
            throw InvalidParameter("interpolant K does not match the coefficient count");
        }
        return ChebyshevInterpolant(kind_name == "cdf" ? InterpolantKind::Cdf : InterpolantKind::Pdf,
                                    doc.at("a").get<double>(), doc.at("b").get<double>(), std::move(coeffs));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("malformed interpolant: ") + e.what());
    }
}

double periodizer(double x) { return 0.5 * (std::erf(x) + 1.0); }

std::vector<double> periodize(const XGrid& xs, std::span<const double> cdf_values) {
    if (xs.size() != cdf_values.size()) throw InvalidParameter("periodize: length mismatch");
    std::vector<double> g(cdf_values.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = cdf_values[i] - periodizer(xs.points[i]);
    return g;
}

double trig_interpolate(std::span<const double> samples, double start, double spacing, double x) {
    const std::size_t N = samples.size();
    if (N == 0) throw InvalidParameter("trig_interpolate: no samples");
    if (N == 1) return samples[0];
    const double period = spacing * static_cast<double>(N);
    const bool odd = N % 2 == 1;
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double arg = std::numbers::pi * (x - (start + static_cast<double>(j) * spacing)) / period;
        const double s = std::sin(arg);
        if (std::abs(s) < 1e-14) return samples[j];
        const double w = (j % 2 == 0 ? 1.0 : -1.0) * (odd ? 1.0 / s : std::cos(arg) / s);
        num += w * samples[j];
        den += w;
    }
    return num / den;
}

namespace {

void require_uniform(const XGrid& xs) {
    if (xs.size() < 3) throw InvalidParameter("interpolation needs at least 3 grid points");
    const double tol = 1e-9 * std::abs(xs.dx) + 1e-12;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (std::abs(xs.points[i] - xs.points[i - 1] - xs.dx) > tol) {
            throw InvalidParameter("interpolation needs a uniform grid");
        }
    }
}

}  // namespace

ChebyshevInterpolant build_interpolant(const XGrid& xs, std::span<const double> values, std::size_t K,
                                       InterpolantKind kind) {
    require_uniform(xs);
    if (values.size() != xs.size()) throw InvalidParameter("interpolation: length mismatch");
    if (K < 2) throw InvalidParameter("K must be at least 2");
    const std::size_t N = xs.size() - 1;
    // x_1..x_N in increasing order: x_N, x_{N−1}, ..., x_1
    std::vector<double> samples(N);
    for (std::size_t j = 0; j < N; ++j) {
        const std::size_t n = N - j;
        samples[j] = values[n] - (kind == InterpolantKind::Cdf ? periodizer(xs.points[n]) : 0.0);
    }
    const double a = xs.back();
    const double b = xs.front();
    const double spacing = -xs.dx;
    const auto cheb = ChebyshevInterpolant::nodes(K, a, b);
    std::vector<double> resampled(K);
    for (std::size_t k = 0; k < K; ++k) {
        resampled[k] = trig_interpolate(samples, a, spacing, cheb[k]) +
                       (kind == InterpolantKind::Cdf ? periodizer(cheb[k]) : 0.0);
    }
    return ChebyshevInterpolant::fit(kind, a, b, resampled);
}

DistributionApproximation build_interpolants(const XGrid& xs, std::span<const double> cdf_values,
                                             std::span<const double> pdf_values, std::size_t K) {
    return {build_interpolant(xs, cdf_values, K, InterpolantKind::Cdf),
            build_interpolant(xs, pdf_values, K, InterpolantKind::Pdf)};
}

}  // namespace tw

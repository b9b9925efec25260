#include "twbeta/initial_condition.hpp"

#include <cmath>
#include <numbers>

namespace tw {

namespace {

// Φ argument and cotθ; only meaningful for 0 < θ < π/2
struct Argument {
    double cot;
    double g;
};

Argument argument(double x0, double beta, double theta) {
    const double c = std::cos(theta) / std::sin(theta);
    return {c, (x0 - c * c) / std::sqrt(4.0 * c / beta)};
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double initial_value(double x0, double beta, double theta) {
    if (theta <= 0.0) return 0.0;
    if (theta >= 0.5 * std::numbers::pi) return 1.0;
    const auto [c, g] = argument(x0, beta, theta);
    if (!(c > 0.0)) return 1.0;
    return normal_cdf(g);
}

std::vector<double> initial_profile(double x0, double beta, std::span<const double> thetas) {
    std::vector<double> out;
    out.reserve(thetas.size());
    for (double t : thetas) out.push_back(initial_value(x0, beta, t));
    return out;
}

double initial_density(double x0, double beta, double theta) {
    if (theta <= 0.0 || theta >= 0.5 * std::numbers::pi) return 0.0;
    const auto [c, g] = argument(x0, beta, theta);
    if (!(c > 0.0) || !std::isfinite(g) || std::abs(g) > 40.0) return 0.0;
    const double phi = std::exp(-0.5 * g * g) / std::sqrt(2.0 * std::numbers::pi);
    const double dg = (1.0 + c * c) / std::sqrt(4.0 * c / beta) * (2.0 * c + (x0 - c * c) / (2.0 * c));
    return phi * dg;
}

}  // namespace tw

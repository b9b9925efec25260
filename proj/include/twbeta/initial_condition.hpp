#pragma once

#include <span>
#include <vector>

namespace tw {

/// Standard normal cdf.
double normal_cdf(double z);

/// Gaussian asymptotic initial condition H(x0, θ) for x0 > 0:
/// Φ((x0 − cot²θ)/√((4/β)cotθ)) on (0, π/2), 1 for θ ≥ π/2, 0 at θ ≤ 0.
double initial_value(double x0, double beta, double theta);
std::vector<double> initial_profile(double x0, double beta, std::span<const double> thetas);

/// ρ(x0, θ) = ∂H(x0, θ)/∂θ, analytic; zero outside (0, π/2).
double initial_density(double x0, double beta, double theta);

}  // namespace tw

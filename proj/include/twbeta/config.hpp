#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tw {

enum class Method { FiniteDifference, Spectral };

enum class Stepper { Trapezoidal, BDF3, BDF4, BDF5, BDF6 };

std::string_view to_string(Method m);
std::string_view to_string(Stepper s);
Method parse_method(std::string_view name);
Stepper parse_stepper(std::string_view name);

/// Every parameter of one distribution computation.
///
/// The θ domain is stored as a whole number of half-turns (`theta_over_pi`),
/// so θ_M = theta_over_pi·π is exact in the integer sense and level lookups
/// (θ = kπ) never depend on floating-point division.
struct SolverConfig {
    double beta = 2.0;
    double x0 = 9.0;
    double xN = -10.0;
    double dx = -1e-3;
    int theta_over_pi = 1;
    std::size_t M = 1000;
    std::size_t K = 1000;
    Method method = Method::FiniteDifference;
    Stepper stepper = Stepper::Trapezoidal;
    bool want_pdf = true;
    std::vector<int> levels{1};
    /// Permit Δx inside a stepper's known instability window.
    bool force = false;

    /// Diagnostics attached by `validated` (β outside the stable range, moved xN).
    std::vector<std::string> warnings;

    double theta_max() const;
    int max_level() const;
    std::size_t steps() const;

    bool operator==(const SolverConfig&) const = default;
};

/// Uniform time-like grid x_0 > x_1 > ... > x_N.
struct XGrid {
    std::vector<double> points;
    double dx = 0.0;

    std::size_t size() const { return points.size(); }
    double front() const { return points.front(); }
    double back() const { return points.back(); }
};

/// Defaults of the reference implementation: x0 = ⌊13/√β⌋, xN = −10, Δx = −1e-3,
/// K = 1000; FD uses θ_M = π, M = 1000, trapezoidal; spectral uses θ_M = 20π,
/// M = 8000, BDF5.
SolverConfig default_config(double beta, Method method);

/// 13/β^{2/3} (asymptotically tight) or 13/β^{1/2} (conservative).
double recommended_x0(double beta, bool conservative);

/// FD resolution coupled to the step, M = ⌊−1/Δx⌋.
std::size_t coupled_fd_resolution(double dx);

/// Checks invariants and returns the normalized configuration: xN snapped
/// inward onto the grid, θ_M widened to cover all FD levels, warnings attached.
/// Throws InvalidParameter on anything unrecoverable.
SolverConfig validated(SolverConfig config);

XGrid make_grid(const SolverConfig& config);

nlohmann::json to_json(const SolverConfig& config);
/// Omitted fields take the defaults for the given β and method.
SolverConfig config_from_json(const nlohmann::json& doc);

}  // namespace tw

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "twbeta/config.hpp"
#include "twbeta/time_integrators.hpp"

namespace tw::stability {

using Complex = std::complex<double>;

/// Roots ξ_i of π(ξ; z) = Σ (α_j − zβ_j) ξ^j via companion-matrix eigenvalues.
std::vector<Complex> stability_roots(const StepperSpec& spec, Complex z);

/// max_i |ξ_i(z)|.
double stability_polynomial_maxroot(const StepperSpec& spec, Complex z);

/// Absolute stability: all |ξ_i| ≤ 1 (+tol) and repeated roots (separation
/// below cluster_tol) strictly inside the unit circle.
bool in_stability_region(const StepperSpec& spec, Complex z, double tol = 1e-12, double cluster_tol = 1e-8);

/// z with a root ξ = e^{iφ}: Σ α_j e^{ijφ} / Σ β_j e^{ijφ}.
Complex boundary_locus(const StepperSpec& spec, double phi);
std::vector<Complex> boundary_locus_polyline(const StepperSpec& spec, std::size_t samples);

struct GrowthRecord {
    double x = 0.0;
    double mu_l = 0.0;
    double mu_r = 0.0;
    double delta_l = 0.0;
    double delta_r = 0.0;
    // positive part of max_j (max_i|ξ_i| − 1)/|Δx|; zero when every z_j is stable
    double growth_l = 0.0;
    double growth_r = 0.0;
};

struct StabilityReport {
    Stepper stepper = Stepper::Trapezoidal;
    Method method = Method::FiniteDifference;
    double beta = 2.0;
    double dx = 0.0;
    std::size_t M = 0;
    std::vector<GrowthRecord> per_x;
    double mean_mu_l = 0.0;
    double mean_mu_r = 0.0;
    double mean_delta_l = 0.0;
    double mean_delta_r = 0.0;
    double mean_growth_l = 0.0;
    double mean_growth_r = 0.0;
};

/// x = −10, −9, ..., ⌊13/√β⌋.
std::vector<double> averaging_points(double beta);

/// All eigenvalues of the configured semi-discrete operator at x
/// (T + U(x) for finite differences, A + xB for the spectral method).
std::vector<Complex> operator_eigenvalues(const SolverConfig& config, double x);

/// μ and δ of one eigenvalue set; δ counts over all eigenvalues.
GrowthRecord growth_statistics(const StepperSpec& spec, const std::vector<Complex>& eigenvalues, double x, double dx);

/// Per-x scan with arithmetic means over xs; x values are scanned on `threads` workers.
StabilityReport eigen_scan(const SolverConfig& config, double dx, const std::vector<double>& xs,
                           std::size_t threads = 1);

struct WindowSample {
    double dx = 0.0;
    double error = 0.0;  // |cdf − reference| at the end of the sweep; +inf on failure
    bool failed = false;
    bool flagged = false;
    std::string message;
};

/// Error at x = −2 for each Δx candidate against a fine-Δx reference of the
/// same discretization; a candidate is flagged when its solve fails, its error
/// exceeds 1e-1, or it is 10× worse than the best candidate with larger |Δx|.
std::vector<WindowSample> window_sweep(Stepper stepper, const SolverConfig& config,
                                       const std::vector<double>& dx_candidates, double reference_dx = -1e-3);

/// The flagged subset of window_sweep.
std::vector<double> instability_window(Stepper stepper, const SolverConfig& config,
                                       const std::vector<double>& dx_candidates);

/// Candidates used when no sweep list is given.
std::vector<double> default_dx_sweep(Stepper stepper);

nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const std::vector<WindowSample>& sweep);

/// CSV rows "re,im,stable" on an n_re × n_im grid, followed by nothing else.
std::string region_csv(const StepperSpec& spec, double re_lo, double re_hi, double im_lo, double im_hi,
                       std::size_t n_re, std::size_t n_im);
/// CSV rows "phi,re,im" of the boundary locus.
std::string locus_csv(const StepperSpec& spec, std::size_t samples);

}  // namespace tw::stability

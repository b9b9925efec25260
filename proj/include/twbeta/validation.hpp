#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "twbeta/interpolation.hpp"

namespace tw::validation {

// ---------------------------------------------------------------- β = 2 oracle

/// Gauss–Legendre nodes and weights on [−1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n);

/// det(I − K_Ai) on L²(x, ∞) by Nyström discretization with `order`
/// Gauss–Legendre nodes mapped to the half-line. No convergence check.
double fredholm_f2(double x, std::size_t order);

/// F₂(x), checked against the doubled quadrature order; throws OracleFailure
/// when the two disagree by more than 1e-13.
double fredholm_reference(double x, std::size_t quadrature_order = 60);

/// Chebyshev model of F₂ built from Fredholm reference samples; the density is
/// its Chebyshev derivative.
class F2Oracle {
public:
    explicit F2Oracle(double a = -12.0, double b = 11.0, std::size_t nodes = 256);

    double cdf(double x) const { return cdf_(x); }
    double pdf(double x) const { return pdf_(x); }
    const ChebyshevInterpolant& cdf_model() const { return cdf_; }

private:
    ChebyshevInterpolant cdf_;
    ChebyshevInterpolant pdf_;
};

struct OracleRow {
    double x;
    double F2;
    double F2_pdf;
};

/// Tabulation at `points` equispaced x in [lo, hi].
std::vector<OracleRow> oracle_table(std::size_t points = 2001, double lo = -10.0, double hi = 9.0);

/// Argument rescaling for β = 4 tables that use the other variance convention.
double beta4_argument_rescale(double x);

// ---------------------------------------------------------------- β-Hermite Monte Carlo

struct HermiteSample {
    std::size_t n = 0;
    double beta = 0.0;
    double lambda_max = 0.0;
    double rescaled = 0.0;  // n^{1/6}(λ_max − 2√n)
};

/// Largest eigenvalue of the symmetric tridiagonal matrix (diag, offdiag) by
/// Sturm-count bisection.
double largest_eigenvalue(std::span<const double> diag, std::span<const double> offdiag, double tol = 1e-10);

/// Number of eigenvalues strictly below sigma.
std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag, double sigma);

/// One draw of the β-Hermite tridiagonal model; deterministic in `seed`.
HermiteSample sample_hermite(std::size_t n, double beta, std::uint64_t seed);

/// Independent draws for seeds seed0, seed0+1, ...; `threads` workers.
std::vector<HermiteSample> sample_hermite_batch(std::size_t n, double beta, std::uint64_t seed0,
                                                std::size_t count, std::size_t threads = 1);

/// Kolmogorov–Smirnov distance between the empirical cdf of `samples` and `cdf`.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

// ---------------------------------------------------------------- β = ∞

struct AiryCharacteristic {
    double x;
    double omega_tilde;  // Ai′(x)/Ai(x)
    double theta;        // in (0, π), ω̃ = −cot θ
};

/// Throws InvalidParameter at (numerical) zeros of Ai.
AiryCharacteristic airy_characteristic(double x);

enum class StepValue { Zero, One, Undefined };

/// Limiting F(x, ω) as β → ∞: 0 below the characteristic ω = Ai′/Ai, 1 above.
StepValue beta_infinity_solution(double x, double omega);

/// cot θ + Ai′(x)/Ai(x): the c₂ = 0 characteristic family as a level set.
double characteristic_residual(double x, double theta);

/// x positions in [lo, hi], right to left, where the zero-level characteristic
/// reaches θ = π.
std::vector<double> characteristic_pi_crossings(double lo, double hi, std::size_t max_count);

}  // namespace tw::validation

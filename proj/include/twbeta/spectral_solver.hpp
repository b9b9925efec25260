#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "twbeta/config.hpp"
#include "twbeta/solution.hpp"

namespace tw::spectral {

using Complex = std::complex<double>;

/// Operator of the form Σ_s diag(c_s)·S_{+s} on a cyclic index set of size n,
/// i.e. (Op a)_p = Σ_s c_s[p]·a[(p + s) mod n].
///
/// S_{+1} maps e_j to e_{j−1}, S_{−1} is its inverse. Products of diagonals and
/// shifts stay in this form, which is how the Fourier-space operators are
/// assembled without ever forming dense matrices.
class ShiftOperator {
public:
    explicit ShiftOperator(std::size_t n) : n_(n) {}

    static ShiftOperator identity(std::size_t n);
    static ShiftOperator diagonal(std::vector<Complex> d);
    /// Unit-coefficient shift S_{power}.
    static ShiftOperator shift(std::size_t n, long power);

    std::size_t size() const { return n_; }
    /// Terms keyed by shift normalized into (−n/2, n/2].
    const std::map<long, std::vector<Complex>>& terms() const { return terms_; }

    ShiftOperator& operator+=(const ShiftOperator& rhs);
    ShiftOperator& operator-=(const ShiftOperator& rhs);
    ShiftOperator& operator*=(Complex s);
    friend ShiftOperator operator+(ShiftOperator a, const ShiftOperator& b) { return a += b; }
    friend ShiftOperator operator-(ShiftOperator a, const ShiftOperator& b) { return a -= b; }
    friend ShiftOperator operator*(Complex s, ShiftOperator a) { return a *= s; }
    friend ShiftOperator operator*(double s, ShiftOperator a) { return a *= Complex(s); }
    /// Composition (this applied after rhs).
    friend ShiftOperator operator*(const ShiftOperator& a, const ShiftOperator& b);

    void apply(std::span<const Complex> in, std::span<Complex> out) const;
    /// Dense row-major n×n matrix; for tests and diagnostics.
    std::vector<Complex> dense() const;

    long normalize(long shift) const;

private:
    void add_term(long shift, const std::vector<Complex>& c, Complex scale);

    std::size_t n_;
    std::map<long, std::vector<Complex>> terms_;
};

/// Circulant shift S_{power} (S_{+k} = S_{+1}^k).
ShiftOperator build_shift(long power, std::size_t size);

/// Mode number m for storage position p: m = p − ⌊M/2⌋.
long mode_number(std::size_t position, std::size_t M);

/// Coefficient vector a_m(x) for m = −⌊M/2⌋, ..., ⌊(M−1)/2⌋ on θ ∈ [0, lπ).
struct FourierState {
    std::vector<Complex> coeffs;
    int l = 20;
    double x = 0.0;

    /// Σ a_m e^{2imθ/l}
    Complex density(double theta) const;
    /// ∫_0^θ of the density.
    Complex cumulative(double theta) const;
};

/// dv/dx = (A + x·B) v in Fourier-coefficient space.
class SpectralOperators {
public:
    using value_type = Complex;

    SpectralOperators(ShiftOperator A, ShiftOperator B, int l);

    const ShiftOperator& A() const { return A_; }
    const ShiftOperator& B() const { return B_; }
    int l() const { return l_; }
    std::size_t size() const { return A_.size(); }

    void apply(double x, std::span<const Complex> in, std::span<Complex> out) const;
    /// (a·I − b·(A + xB)) y = rhs. The operator only couples positions that
    /// differ by multiples of the base shift, so the system splits into
    /// independent cyclic banded blocks.
    bool solve_shifted(double x, double a, double b, std::span<Complex> rhs) const;

    /// Independent index cycles; positions of each block in cyclic order.
    const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
    /// Dense (A + xB) restricted to one block, row-major.
    std::vector<Complex> block_matrix(std::size_t block, double x) const;

private:
    ShiftOperator A_, B_;
    int l_;
    long base_shift_;
    std::size_t bandwidth_;
    std::vector<std::vector<std::size_t>> blocks_;
    std::vector<long> shifts_;  // union of A and B shift keys
};

/// Diagonal D₁ with entries 2im/l.
ShiftOperator build_d1(std::size_t M, int l);

/// A and B for a given β, mode count M and domain scale l (θ_M = lπ, l even).
SpectralOperators build_operators(double beta, std::size_t M, int l);
SpectralOperators build_operators(const SolverConfig& config);

/// Fourier coefficients of ρ(x, ·) by the uniform discrete transform on θ_j = j·lπ/M.
FourierState startup_state(double x, double beta, std::size_t M, int l);
/// Exact startup history for the configured stepper: index i holds the state at
/// x0 − iΔx, one entry per stepper step (five for BDF5).
std::vector<FourierState> startup_states(const SolverConfig& config);

/// ∫_0^{kπ} e^{2imθ/l} dθ per storage position; m = 0 gives kπ.
std::vector<Complex> recovery_weights(std::size_t M, int l, int k);

/// Δx range in which a BDF stepper on the spectral discretization is known to blow up.
struct DxWindow {
    double lo;  // most negative
    double hi;
    bool contains(double dx) const { return dx >= lo && dx <= hi; }
};
std::optional<DxWindow> published_instability_window(Stepper stepper);

/// Full spectral solve with recovery at θ = kπ. Refuses Δx inside the stepper's
/// instability window unless config.force is set.
SolveResult solve_spectral(const SolverConfig& config);

/// Same march, also returning the final Fourier state (for diagnostics).
SolveResult solve_spectral(const SolverConfig& config, FourierState* final_state);

}  // namespace tw::spectral

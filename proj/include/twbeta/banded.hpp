#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tw {

/// General banded matrix in LAPACK band storage, factorized in place with
/// partial pivoting (gbtrf) and solved with gbtrs.
template <typename T>
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

    std::size_t size() const { return n_; }
    std::size_t lower() const { return kl_; }
    std::size_t upper() const { return ku_; }

    /// Entry (i, j); |i − j| must lie inside the band.
    T& at(std::size_t i, std::size_t j);
    T at(std::size_t i, std::size_t j) const;

    void set_zero();
    /// y = A x, valid only before `factorize`.
    void multiply(std::span<const T> x, std::span<T> y) const;

    /// Returns false when a zero pivot is met.
    bool factorize();
    /// Solves in place for `nrhs` right-hand sides stored column-major.
    void solve(std::span<T> rhs, std::size_t nrhs = 1) const;

private:
    std::size_t n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
    std::vector<T> ab_;
    std::vector<int> ipiv_;
    bool factored_ = false;
};

/// Solver for cyclic banded systems: entry (i, (i + t) mod n) for |t| ≤ bw.
/// The wrap-around corners are handled with a Woodbury correction on top of a
/// banded LU, so the cost stays linear in n.
class CyclicBandedSolver {
public:
    using Complex = std::complex<double>;

    CyclicBandedSolver(std::size_t n, std::size_t bandwidth);

    std::size_t size() const { return n_; }

    /// Sets the coefficient of the (i, (i + offset) mod n) entry.
    void set(std::size_t row, int offset, Complex value);
    void set_zero();

    bool factorize();
    void solve(std::span<Complex> rhs) const;

private:
    std::size_t n_, bw_;
    bool dense_;
    BandedMatrix<Complex> band_;
    std::vector<Complex> dense_matrix_;  // used when n is too small for a band split
    std::vector<int> dense_pivots_;
    std::vector<std::size_t> corner_rows_;
    // corner entries per corner row: (column, value)
    std::vector<std::vector<std::pair<std::size_t, Complex>>> corners_;
    std::vector<Complex> z_;         // B^{-1} U, n × p column-major
    std::vector<Complex> capacitance_;  // LU of I + Vᵀ Z
    std::vector<int> cap_pivots_;
};

}  // namespace tw

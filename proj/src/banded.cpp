#include "twbeta/banded.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace tw {

namespace {

int gbtrf(int n, int kl, int ku, double* ab, int ldab, int* ipiv) {
    return LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, ab, ldab, ipiv);
}
int gbtrf(int n, int kl, int ku, std::complex<double>* ab, int ldab, int* ipiv) {
    return LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, ab, ldab, ipiv);
}
int gbtrs(int n, int kl, int ku, int nrhs, const double* ab, int ldab, const int* ipiv, double* b) {
    return LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, nrhs, ab, ldab, ipiv, b, n);
}
int gbtrs(int n, int kl, int ku, int nrhs, const std::complex<double>* ab, int ldab, const int* ipiv,
          std::complex<double>* b) {
    return LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, nrhs, ab, ldab, ipiv, b, n);
}

}  // namespace

template <typename T>
BandedMatrix<T>::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(ldab_ * n), ipiv_(n) {}

template <typename T>
T& BandedMatrix<T>::at(std::size_t i, std::size_t j) {
    assert(i + ku_ >= j && j + kl_ >= i);
    return ab_[kl_ + ku_ + i - j + j * ldab_];
}

template <typename T>
T BandedMatrix<T>::at(std::size_t i, std::size_t j) const {
    if (i + ku_ < j || j + kl_ < i) return T{};
    return ab_[kl_ + ku_ + i - j + j * ldab_];
}

template <typename T>
void BandedMatrix<T>::set_zero() {
    std::fill(ab_.begin(), ab_.end(), T{});
    factored_ = false;
}

template <typename T>
void BandedMatrix<T>::multiply(std::span<const T> x, std::span<T> y) const {
    assert(!factored_);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t lo = i > kl_ ? i - kl_ : 0;
        const std::size_t hi = std::min(n_ - 1, i + ku_);
        T acc{};
        for (std::size_t j = lo; j <= hi; ++j) acc += ab_[kl_ + ku_ + i - j + j * ldab_] * x[j];
        y[i] = acc;
    }
}

template <typename T>
bool BandedMatrix<T>::factorize() {
    const int info = gbtrf(static_cast<int>(n_), static_cast<int>(kl_), static_cast<int>(ku_), ab_.data(),
                           static_cast<int>(ldab_), ipiv_.data());
    factored_ = info == 0;
    return factored_;
}

template <typename T>
void BandedMatrix<T>::solve(std::span<T> rhs, std::size_t nrhs) const {
    if (!factored_) throw std::logic_error("BandedMatrix::solve before successful factorize");
    assert(rhs.size() >= n_ * nrhs);
    gbtrs(static_cast<int>(n_), static_cast<int>(kl_), static_cast<int>(ku_), static_cast<int>(nrhs), ab_.data(),
          static_cast<int>(ldab_), ipiv_.data(), rhs.data());
}

template class BandedMatrix<double>;
template class BandedMatrix<std::complex<double>>;

CyclicBandedSolver::CyclicBandedSolver(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(bandwidth), dense_(n < 4 * bandwidth + 2) {
    if (dense_) {
        dense_matrix_.assign(n * n, Complex{});
        dense_pivots_.resize(n);
        return;
    }
    band_ = BandedMatrix<Complex>(n, bw_, bw_);
    for (std::size_t i = 0; i < bw_; ++i) corner_rows_.push_back(i);
    for (std::size_t i = n_ - bw_; i < n_; ++i) corner_rows_.push_back(i);
    corners_.resize(corner_rows_.size());
}

void CyclicBandedSolver::set_zero() {
    if (dense_) {
        std::fill(dense_matrix_.begin(), dense_matrix_.end(), Complex{});
        return;
    }
    band_.set_zero();
    for (auto& c : corners_) c.clear();
}

void CyclicBandedSolver::set(std::size_t row, int offset, Complex value) {
    const auto n = static_cast<long long>(n_);
    const long long raw = static_cast<long long>(row) + offset;
    const auto col = static_cast<std::size_t>(((raw % n) + n) % n);
    if (dense_) {
        dense_matrix_[row + col * n_] += value;
        return;
    }
    if (raw >= 0 && raw < n) {
        band_.at(row, col) += value;
        return;
    }
    const std::size_t slot = row < bw_ ? row : bw_ + (row - (n_ - bw_));
    auto& entries = corners_[slot];
    for (auto& [c, v] : entries) {
        if (c == col) {
            v += value;
            return;
        }
    }
    entries.emplace_back(col, value);
}

bool CyclicBandedSolver::factorize() {
    if (dense_) {
        const int n = static_cast<int>(n_);
        return LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, dense_matrix_.data(), n, dense_pivots_.data()) == 0;
    }
    if (!band_.factorize()) return false;
    const std::size_t p = corner_rows_.size();
    z_.assign(n_ * p, Complex{});
    for (std::size_t k = 0; k < p; ++k) z_[corner_rows_[k] + k * n_] = 1.0;
    band_.solve(z_, p);
    capacitance_.assign(p * p, Complex{});
    for (std::size_t k = 0; k < p; ++k) {
        for (std::size_t l = 0; l < p; ++l) {
            Complex acc = k == l ? Complex{1.0} : Complex{};
            for (const auto& [col, v] : corners_[k]) acc += v * z_[col + l * n_];
            capacitance_[k + l * p] = acc;
        }
    }
    cap_pivots_.resize(p);
    const int pi = static_cast<int>(p);
    return LAPACKE_zgetrf(LAPACK_COL_MAJOR, pi, pi, capacitance_.data(), pi, cap_pivots_.data()) == 0;
}

void CyclicBandedSolver::solve(std::span<Complex> rhs) const {
    if (dense_) {
        const int n = static_cast<int>(n_);
        LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, 1, dense_matrix_.data(), n, dense_pivots_.data(), rhs.data(), n);
        return;
    }
    band_.solve(rhs);
    const std::size_t p = corner_rows_.size();
    std::vector<Complex> w(p);
    for (std::size_t k = 0; k < p; ++k) {
        Complex acc{};
        for (const auto& [col, v] : corners_[k]) acc += v * rhs[col];
        w[k] = acc;
    }
    const int pi = static_cast<int>(p);
    LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', pi, 1, capacitance_.data(), pi, cap_pivots_.data(), w.data(), pi);
    for (std::size_t l = 0; l < p; ++l) {
        if (w[l] == Complex{}) continue;
        const Complex* zl = z_.data() + l * n_;
        for (std::size_t i = 0; i < n_; ++i) rhs[i] -= zl[i] * w[l];
    }
}

}  // namespace tw

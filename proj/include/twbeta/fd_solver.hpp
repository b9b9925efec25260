#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "twbeta/banded.hpp"
#include "twbeta/config.hpp"
#include "twbeta/initial_condition.hpp"
#include "twbeta/solution.hpp"

namespace tw {

namespace fd {

/// H at θ_1..θ_M (θ_m = m·h); H_0 ≡ 0 is implied.
struct ThetaProfile {
    std::vector<double> values;
    double h = 0.0;
};

/// Method-of-lines operator L(x) = T + U(x) on θ_1..θ_M.
///
/// T = diag(−2 sin⁴θ_m /(βh²))·tridiag[1, −2, 1] and
/// U(x) = diag(((x + (2/β) sin2θ_m) sin²θ_m − cos²θ_m)/(2h))·Ǔ, with Ǔ the
/// centered [1, 0, −1] stencil whose last row is the one-sided [−1, 4, −3].
/// The x dependence is affine, so U(x) = U_A + x·U_B with both diagonals kept.
class FdOperators {
public:
    using value_type = double;

    FdOperators(double beta, std::size_t M, double theta_max);

    std::size_t size() const { return M_; }
    double h() const { return h_; }
    std::span<const double> thetas() const { return thetas_; }

    /// Row scalings: diffusion t_m and advection u_m(x) = ua_m + x·ub_m.
    double diffusion_scale(std::size_t m) const { return t_[m]; }
    double advection_scale(std::size_t m, double x) const { return ua_[m] + x * ub_[m]; }

    /// L(x) as a banded matrix (2 sub-diagonals because of the last Ǔ row).
    BandedMatrix<double> matrix(double x) const;
    /// Dense L(x), row-major M×M; for diagnostics.
    std::vector<double> dense(double x) const;

    void apply(double x, std::span<const double> in, std::span<double> out) const;
    bool solve_shifted(double x, double a, double b, std::span<double> rhs) const;

private:
    std::size_t M_;
    double h_;
    std::vector<double> thetas_, t_, ua_, ub_;
};

FdOperators build_operators(const SolverConfig& config);

/// Full finite-difference solve; traces at θ = kπ for every configured level.
SolveResult solve_fd(const SolverConfig& config);

}  // namespace fd
}  // namespace tw

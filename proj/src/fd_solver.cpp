#include "twbeta/fd_solver.hpp"

#include <cmath>
#include <numbers>

#include "twbeta/error.hpp"
#include "twbeta/time_integrators.hpp"

namespace tw::fd {

namespace {

// (L(x) H)_i, reading H_0 = 0 below the first node
double row_apply(const FdOperators& op, std::size_t i, double x, std::span<const double> v) {
    const std::size_t M = op.size();
    const double t = op.diffusion_scale(i);
    const double u = op.advection_scale(i, x);
    if (i + 1 < M) {
        const double below = i > 0 ? v[i - 1] : 0.0;
        return (t + u) * below - 2.0 * t * v[i] + (t - u) * v[i + 1];
    }
    return -u * v[i - 2] + (t + 4.0 * u) * v[i - 1] + (-2.0 * t - 3.0 * u) * v[i];
}

}  // namespace

FdOperators::FdOperators(double beta, std::size_t M, double theta_max)
    : M_(M), h_(theta_max / static_cast<double>(M)), thetas_(M), t_(M), ua_(M), ub_(M) {
    if (M < 3) throw InvalidParameter("FD grid needs at least 3 nodes");
    for (std::size_t m = 0; m < M; ++m) {
        const double th = static_cast<double>(m + 1) * h_;
        const double s = std::sin(th);
        const double c = std::cos(th);
        const double s2 = s * s;
        thetas_[m] = th;
        t_[m] = -2.0 * s2 * s2 / (beta * h_ * h_);
        ua_[m] = ((2.0 / beta) * std::sin(2.0 * th) * s2 - c * c) / (2.0 * h_);
        ub_[m] = s2 / (2.0 * h_);
    }
}

BandedMatrix<double> FdOperators::matrix(double x) const {
    BandedMatrix<double> L(M_, 2, 1);
    for (std::size_t i = 0; i + 1 < M_; ++i) {
        const double t = t_[i];
        const double u = ua_[i] + x * ub_[i];
        if (i > 0) L.at(i, i - 1) = t + u;
        L.at(i, i) = -2.0 * t;
        L.at(i, i + 1) = t - u;
    }
    const std::size_t i = M_ - 1;
    const double t = t_[i];
    const double u = ua_[i] + x * ub_[i];
    L.at(i, i - 2) = -u;
    L.at(i, i - 1) = t + 4.0 * u;
    L.at(i, i) = -2.0 * t - 3.0 * u;
    return L;
}

std::vector<double> FdOperators::dense(double x) const {
    const auto L = matrix(x);
    std::vector<double> out(M_ * M_, 0.0);
    for (std::size_t i = 0; i < M_; ++i) {
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        const std::size_t hi = std::min(M_ - 1, i + 1);
        for (std::size_t j = lo; j <= hi; ++j) out[i * M_ + j] = L.at(i, j);
    }
    return out;
}

void FdOperators::apply(double x, std::span<const double> in, std::span<double> out) const {
    for (std::size_t i = 0; i < M_; ++i) out[i] = row_apply(*this, i, x, in);
}

bool FdOperators::solve_shifted(double x, double a, double b, std::span<double> rhs) const {
    auto L = matrix(x);
    for (std::size_t i = 0; i < M_; ++i) {
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        const std::size_t hi = std::min(M_ - 1, i + 1);
        for (std::size_t j = lo; j <= hi; ++j) L.at(i, j) *= -b;
        L.at(i, i) += a;
    }
    if (!L.factorize()) return false;
    L.solve(rhs);
    return true;
}

FdOperators build_operators(const SolverConfig& config) {
    if (config.method != Method::FiniteDifference) {
        throw InvalidParameter("build_operators(fd) called with a spectral configuration");
    }
    return FdOperators(config.beta, config.M, config.theta_max());
}

SolveResult solve_fd(const SolverConfig& input) {
    const SolverConfig config = validated(input);
    if (config.method != Method::FiniteDifference) throw InvalidParameter("solve_fd needs method = finite");

    const FdOperators op = build_operators(config);
    const StepperSpec spec = stepper_spec(config.stepper);

    SolveResult result;
    result.config = config;
    result.grid = make_grid(config);
    result.levels = config.levels;
    result.warnings = config.warnings;

    std::vector<std::size_t> index;
    for (int k : config.levels) {
        index.push_back(config.M * static_cast<std::size_t>(k) / static_cast<std::size_t>(config.theta_over_pi) - 1);
    }
    const std::size_t points = result.grid.size();
    result.cdf.assign(index.size(), std::vector<double>(points));
    result.pdf.assign(index.size(), config.want_pdf ? std::vector<double>(points) : std::vector<double>{});

    const std::function<std::vector<double>(double)> exact = [&](double x) {
        return initial_profile(x, config.beta, op.thetas());
    };
    auto startup = bootstrap(spec, exact, config.x0, config.dx);

    integrate(spec, std::move(startup), op, result.grid, [&](std::size_t n, double x, const std::vector<double>& H) {
        for (std::size_t l = 0; l < index.size(); ++l) {
            result.cdf[l][n] = H[index[l]];
            if (config.want_pdf) result.pdf[l][n] = row_apply(op, index[l], x, H);
        }
    });
    return result;
}

}  // namespace tw::fd

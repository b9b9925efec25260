#include "twbeta/stability_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "twbeta/error.hpp"
#include "twbeta/fd_solver.hpp"
#include "twbeta/spectral_solver.hpp"

namespace tw::stability {

std::vector<Complex> stability_roots(const StepperSpec& spec, Complex z) {
    const auto r = static_cast<Eigen::Index>(spec.steps);
    std::vector<Complex> c(static_cast<std::size_t>(r) + 1);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = spec.alpha[j] - z * spec.beta[j];
    const Complex lead = c.back();
    if (std::abs(lead) < 1e-14 * std::max(1.0, std::abs(spec.alpha.back()))) {
        throw InvalidParameter("stability polynomial has a vanishing leading coefficient");
    }
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(r, r);
    for (Eigen::Index i = 1; i < r; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < r; ++i) companion(i, r - 1) = -c[static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw SolverError("companion eigen-solve failed", 0.0);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double stability_polynomial_maxroot(const StepperSpec& spec, Complex z) {
    double m = 0.0;
    for (const auto& xi : stability_roots(spec, z)) m = std::max(m, std::abs(xi));
    return m;
}

bool in_stability_region(const StepperSpec& spec, Complex z, double tol, double cluster_tol) {
    const auto roots = stability_roots(spec, z);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double mag = std::abs(roots[i]);
        if (mag > 1.0 + tol) return false;
        if (mag < 1.0 - tol) continue;
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (j != i && std::abs(roots[i] - roots[j]) < cluster_tol) return false;
        }
    }
    return true;
}

Complex boundary_locus(const StepperSpec& spec, double phi) {
    Complex num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < spec.alpha.size(); ++j) {
        const Complex e = std::polar(1.0, static_cast<double>(j) * phi);
        num += spec.alpha[j] * e;
        den += spec.beta[j] * e;
    }
    return num / den;
}

std::vector<Complex> boundary_locus_polyline(const StepperSpec& spec, std::size_t samples) {
    std::vector<Complex> out;
    out.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
        out.push_back(boundary_locus(spec, phi));
    }
    return out;
}

std::vector<double> averaging_points(double beta) {
    if (!(beta > 0.0)) throw InvalidParameter("beta must be positive");
    const int top = static_cast<int>(std::floor(13.0 / std::sqrt(beta)));
    std::vector<double> xs;
    for (int x = -10; x <= top; ++x) xs.push_back(x);
    return xs;
}

std::vector<Complex> operator_eigenvalues(const SolverConfig& config, double x) {
    if (config.method == Method::FiniteDifference) {
        const auto op = fd::FdOperators(config.beta, config.M, config.theta_max());
        const auto n = static_cast<Eigen::Index>(op.size());
        const auto dense = op.dense(x);
        const Eigen::MatrixXd L = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            dense.data(), n, n);
        Eigen::EigenSolver<Eigen::MatrixXd> solver(L, false);
        if (solver.info() != Eigen::Success) throw SolverError("eigen-solve failed", x);
        const auto& ev = solver.eigenvalues();
        return {ev.data(), ev.data() + ev.size()};
    }
    const auto op = spectral::build_operators(config.beta, config.M, config.theta_over_pi);
    std::vector<Complex> out;
    out.reserve(op.size());
    for (std::size_t b = 0; b < op.blocks().size(); ++b) {
        const auto n = static_cast<Eigen::Index>(op.blocks()[b].size());
        const auto dense = op.block_matrix(b, x);
        const Eigen::MatrixXcd A =
            Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(dense.data(), n, n);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A, false);
        if (solver.info() != Eigen::Success) throw SolverError("eigen-solve failed", x);
        const auto& ev = solver.eigenvalues();
        out.insert(out.end(), ev.data(), ev.data() + ev.size());
    }
    return out;
}

GrowthRecord growth_statistics(const StepperSpec& spec, const std::vector<Complex>& eigenvalues, double x,
                               double dx) {
    if (eigenvalues.empty()) throw InvalidParameter("no eigenvalues");
    GrowthRecord rec;
    rec.x = x;
    std::size_t left = 0, right = 0;
    for (const auto& lambda : eigenvalues) {
        const Complex z = dx * lambda;
        const double xi = stability_polynomial_maxroot(spec, z);
        const double growth = std::abs((xi - 1.0) / dx);
        const double rate = std::max(0.0, (xi - 1.0) / std::abs(dx));
        const bool unstable = xi > 1.0 + 1e-12;
        if (z.real() < 0.0) {
            rec.mu_l = std::max(rec.mu_l, growth);
            rec.growth_l = std::max(rec.growth_l, rate);
            if (unstable) ++left;
        } else if (z.real() > 0.0) {
            rec.mu_r = std::max(rec.mu_r, growth);
            rec.growth_r = std::max(rec.growth_r, rate);
            if (unstable) ++right;
        }
    }
    const auto n = static_cast<double>(eigenvalues.size());
    rec.delta_l = static_cast<double>(left) / n;
    rec.delta_r = static_cast<double>(right) / n;
    return rec;
}

StabilityReport eigen_scan(const SolverConfig& config, double dx, const std::vector<double>& xs,
                           std::size_t threads) {
    if (!(dx < 0.0)) throw InvalidParameter("dx must be negative");
    if (xs.empty()) throw InvalidParameter("no x values to scan");
    const auto spec = stepper_spec(config.stepper);
    StabilityReport report;
    report.stepper = config.stepper;
    report.method = config.method;
    report.beta = config.beta;
    report.dx = dx;
    report.M = config.M;
    report.per_x.resize(xs.size());

    std::vector<std::string> errors(xs.size());
    threads = std::max<std::size_t>(1, std::min(threads, xs.size()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < xs.size(); i += threads) {
                    try {
                        report.per_x[i] = growth_statistics(spec, operator_eigenvalues(config, xs[i]), xs[i], dx);
                    } catch (const std::exception& e) {
                        errors[i] = e.what();
                    }
                }
            });
        }
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!errors[i].empty()) throw SolverError("eigen scan: " + errors[i], xs[i]);
    }
    for (const auto& r : report.per_x) {
        report.mean_mu_l += r.mu_l;
        report.mean_mu_r += r.mu_r;
        report.mean_delta_l += r.delta_l;
        report.mean_delta_r += r.delta_r;
        report.mean_growth_l += r.growth_l;
        report.mean_growth_r += r.growth_r;
    }
    const auto n = static_cast<double>(report.per_x.size());
    report.mean_mu_l /= n;
    report.mean_mu_r /= n;
    report.mean_delta_l /= n;
    report.mean_delta_r /= n;
    report.mean_growth_l /= n;
    report.mean_growth_r /= n;
    return report;
}

namespace {

SolveResult run(const SolverConfig& c) {
    return c.method == Method::Spectral ? spectral::solve_spectral(c) : fd::solve_fd(c);
}

double final_cdf(const SolveResult& r) { return r.cdf.front().back(); }

}  // namespace

std::vector<WindowSample> window_sweep(Stepper stepper, const SolverConfig& config,
                                       const std::vector<double>& dx_candidates, double reference_dx) {
    if (dx_candidates.empty()) throw InvalidParameter("empty dx sweep");
    for (double dx : dx_candidates) {
        if (!(dx < 0.0)) throw InvalidParameter("dx candidates must be negative");
    }
    if (!std::is_sorted(dx_candidates.begin(), dx_candidates.end())) {
        throw InvalidParameter("dx candidates must be sorted");
    }
    SolverConfig base = config;
    base.xN = -2.0;
    base.want_pdf = false;
    base.levels = {1};
    base.force = true;

    SolverConfig ref = base;
    ref.stepper = default_config(config.beta, config.method).stepper;
    ref.dx = reference_dx;
    const auto reference = run(validated(ref));

    std::vector<WindowSample> out;
    for (double dx : dx_candidates) {
        WindowSample s;
        s.dx = dx;
        SolverConfig c = base;
        c.stepper = stepper;
        c.dx = dx;
        try {
            const auto r = run(validated(c));
            const double v = final_cdf(r);
            s.error = std::abs(v - reference.cdf_near(r.grid.back(), 1));
            if (!std::isfinite(s.error)) {
                s.failed = true;
                s.message = "non-finite result";
            }
        } catch (const Error& e) {
            s.failed = true;
            s.message = e.what();
        }
        if (s.failed) s.error = std::numeric_limits<double>::infinity();
        out.push_back(s);
    }
    // candidates are sorted ascending, so larger |dx| sit at lower indices
    for (std::size_t i = 0; i < out.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < i; ++j) best = std::min(best, out[j].error);
        out[i].flagged = out[i].failed || out[i].error > 1e-1 || (std::isfinite(best) && out[i].error > 10.0 * best);
    }
    return out;
}

std::vector<double> instability_window(Stepper stepper, const SolverConfig& config,
                                       const std::vector<double>& dx_candidates) {
    std::vector<double> flagged;
    for (const auto& s : window_sweep(stepper, config, dx_candidates)) {
        if (s.flagged) flagged.push_back(s.dx);
    }
    return flagged;
}

std::vector<double> default_dx_sweep(Stepper stepper) {
    switch (stepper) {
        case Stepper::BDF3:
            return {-0.01, -0.005, -0.004, -0.003, -0.002, -0.001, -0.0005};
        case Stepper::BDF4:
            return {-0.02, -0.01, -0.005, -0.004, -0.002, -0.001, -0.0005};
        case Stepper::BDF5:
            return {-0.05, -0.04, -0.02, -0.01, -0.005, -0.004, -0.002, -0.001};
        case Stepper::BDF6:
            return {-0.25, -0.2, -0.1, -0.05, -0.04, -0.02, -0.01, -0.005, -0.004, -0.002};
        case Stepper::Trapezoidal:
            break;
    }
    return {-0.02, -0.01, -0.005, -0.002, -0.001};
}

nlohmann::json to_json(const StabilityReport& report) {
    nlohmann::json per_x = nlohmann::json::array();
    for (const auto& r : report.per_x) {
        per_x.push_back({{"x", r.x}, {"mu_l", r.mu_l}, {"mu_r", r.mu_r}, {"delta_l", r.delta_l}, {"delta_r", r.delta_r},
                         {"growth_l", r.growth_l}, {"growth_r", r.growth_r}});
    }
    return {
        {"format", "twbeta-stability-report"},
        {"version", 1},
        {"stepper", std::string(to_string(report.stepper))},
        {"method", std::string(to_string(report.method))},
        {"beta", report.beta},
        {"dx", report.dx},
        {"M", report.M},
        {"per_x", per_x},
        {"mean_mu_l", report.mean_mu_l},
        {"mean_mu_r", report.mean_mu_r},
        {"mean_delta_l", report.mean_delta_l},
        {"mean_delta_r", report.mean_delta_r},
        {"mean_growth_l", report.mean_growth_l},
        {"mean_growth_r", report.mean_growth_r},
    };
}

nlohmann::json to_json(const std::vector<WindowSample>& sweep) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : sweep) {
        out.push_back({{"dx", s.dx},
                       {"error", std::isfinite(s.error) ? nlohmann::json(s.error) : nlohmann::json(nullptr)},
                       {"failed", s.failed},
                       {"flagged", s.flagged},
                       {"message", s.message}});
    }
    return out;
}

std::string region_csv(const StepperSpec& spec, double re_lo, double re_hi, double im_lo, double im_hi,
                       std::size_t n_re, std::size_t n_im) {
    if (n_re < 2 || n_im < 2) throw InvalidParameter("region grid needs at least 2 points per axis");
    std::ostringstream os;
    os.precision(17);
    os << "re,im,stable\n";
    for (std::size_t i = 0; i < n_re; ++i) {
        const double re = re_lo + (re_hi - re_lo) * static_cast<double>(i) / static_cast<double>(n_re - 1);
        for (std::size_t j = 0; j < n_im; ++j) {
            const double im = im_lo + (im_hi - im_lo) * static_cast<double>(j) / static_cast<double>(n_im - 1);
            bool stable = false;
            try {
                stable = in_stability_region(spec, {re, im});
            } catch (const InvalidParameter&) {
            }
            os << re << ',' << im << ',' << (stable ? 1 : 0) << '\n';
        }
    }
    return os.str();
}

std::string locus_csv(const StepperSpec& spec, std::size_t samples) {
    std::ostringstream os;
    os.precision(17);
    os << "phi,re,im\n";
    for (std::size_t i = 0; i < samples; ++i) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
        const auto z = boundary_locus(spec, phi);
        os << phi << ',' << z.real() << ',' << z.imag() << '\n';
    }
    return os.str();
}

}  // namespace tw::stability

#include "twbeta/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include <Eigen/Dense>
#include <boost/math/special_functions/airy.hpp>

#include "twbeta/error.hpp"

namespace tw::validation {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
    std::vector<double> x(n), w(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p1 = z, p0 = 1.0;
            dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

double fredholm_f2(double s, std::size_t order) {
    const auto [t, w] = gauss_legendre(order);
    const std::size_t n = order;
    std::vector<double> x(n), sw(n), ai(n), aip(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double arg = std::numbers::pi * (t[i] + 1.0) / 4.0;
        const double c = std::cos(arg);
        x[i] = s + 10.0 * std::tan(arg);
        sw[i] = std::sqrt(w[i] * 10.0 * (std::numbers::pi / 4.0) / (c * c));
        ai[i] = boost::math::airy_ai(x[i]);
        aip[i] = boost::math::airy_ai_prime(x[i]);
    }
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double k;
            if (i == j) {
                k = aip[i] * aip[i] - x[i] * ai[i] * ai[i];
            } else {
                k = (ai[i] * aip[j] - aip[i] * ai[j]) / (x[i] - x[j]);
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (i == j ? 1.0 : 0.0) - sw[i] * k * sw[j];
        }
    }
    return m.partialPivLu().determinant();
}

double fredholm_reference(double x, std::size_t quadrature_order) {
    if (quadrature_order < 20) throw InvalidParameter("quadrature order must be at least 20");
    const double coarse = fredholm_f2(x, quadrature_order);
    const double fine = fredholm_f2(x, 2 * quadrature_order);
    if (!std::isfinite(fine) || std::abs(fine - coarse) > 1e-13) {
        throw OracleFailure("Fredholm determinant not converged at x = " + std::to_string(x) +
                            " (difference " + std::to_string(std::abs(fine - coarse)) + ")");
    }
    return fine;
}

F2Oracle::F2Oracle(double a, double b, std::size_t nodes)
    : cdf_(InterpolantKind::Cdf, a, b, {0.0}), pdf_(InterpolantKind::Pdf, a, b, {0.0}) {
    const auto xs = ChebyshevInterpolant::nodes(nodes, a, b);
    std::vector<double> values(nodes);
    for (std::size_t k = 0; k < nodes; ++k) values[k] = fredholm_reference(xs[k]);
    cdf_ = ChebyshevInterpolant::fit(InterpolantKind::Cdf, a, b, values);
    pdf_ = cdf_.derivative();
}

std::vector<OracleRow> oracle_table(std::size_t points, double lo, double hi) {
    if (points < 2) throw InvalidParameter("oracle table needs at least 2 points");
    const F2Oracle oracle(std::min(lo, -12.0), std::max(hi, 11.0));
    std::vector<OracleRow> rows;
    rows.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        rows.push_back({x, fredholm_reference(x), oracle.pdf(x)});
    }
    return rows;
}

double beta4_argument_rescale(double x) { return x / std::pow(2.0, 1.0 / 6.0); }

// ---------------------------------------------------------------- Monte Carlo

std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag, double sigma) {
    const double pivmin = std::numeric_limits<double>::min() * 1e8;
    std::size_t count = 0;
    double q = diag[0] - sigma;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        q = (diag[i] - sigma) - offdiag[i - 1] * offdiag[i - 1] / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

double largest_eigenvalue(std::span<const double> diag, std::span<const double> offdiag, double tol) {
    const std::size_t n = diag.size();
    if (n == 0) throw InvalidParameter("empty matrix");
    if (offdiag.size() + 1 != n) throw InvalidParameter("offdiagonal length must be n - 1");
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(offdiag[i - 1]);
        if (i + 1 < n) r += std::abs(offdiag[i]);
        hi = std::max(hi, diag[i] + r);
    }
    double width = 1.0;
    double lo = hi - width;
    while (sturm_count(diag, offdiag, lo) >= n) {
        width *= 2.0;
        lo = hi - width;
    }
    while (hi - lo > tol * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(diag, offdiag, mid) >= n) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

HermiteSample sample_hermite(std::size_t n, double beta, std::uint64_t seed) {
    if (n == 0) throw InvalidParameter("n must be positive");
    if (!(beta > 0.0)) throw InvalidParameter("beta must be positive");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(seq);
    const double scale = 1.0 / std::sqrt(beta);
    std::vector<double> diag(n), off(n > 0 ? n - 1 : 0);
    std::normal_distribution<double> gauss(0.0, std::numbers::sqrt2);
    for (auto& d : diag) d = scale * gauss(rng);
    for (std::size_t i = 1; i < n; ++i) {
        const double dof = static_cast<double>(n - i) * beta;
        if (!(dof > 0.0)) throw InvalidParameter("chi degrees of freedom must be positive");
        std::gamma_distribution<double> gamma(0.5 * dof, 2.0);
        off[i - 1] = scale * std::sqrt(gamma(rng));
    }
    HermiteSample s;
    s.n = n;
    s.beta = beta;
    s.lambda_max = largest_eigenvalue(diag, off, 1e-12);
    const double nd = static_cast<double>(n);
    s.rescaled = std::pow(nd, 1.0 / 6.0) * (s.lambda_max - 2.0 * std::sqrt(nd));
    return s;
}

std::vector<HermiteSample> sample_hermite_batch(std::size_t n, double beta, std::uint64_t seed0,
                                                std::size_t count, std::size_t threads) {
    std::vector<HermiteSample> out(count);
    threads = std::max<std::size_t>(1, std::min(threads, count));
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += threads) out[i] = sample_hermite(n, beta, seed0 + i);
        });
    }
    pool.clear();
    return out;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw InvalidParameter("no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - F, F - static_cast<double>(i) / n});
    }
    return d;
}

// ---------------------------------------------------------------- β = ∞

AiryCharacteristic airy_characteristic(double x) {
    const double ai = boost::math::airy_ai(x);
    const double aip = boost::math::airy_ai_prime(x);
    if (std::abs(ai) <= 1e-14 * std::abs(aip)) {
        throw InvalidParameter("Ai'(x)/Ai(x) has a pole at x = " + std::to_string(x));
    }
    const double omega = aip / ai;
    return {x, omega, 0.5 * std::numbers::pi + std::atan(omega)};
}

StepValue beta_infinity_solution(double x, double omega) {
    const double curve = airy_characteristic(x).omega_tilde;
    if (std::abs(omega - curve) <= 1e-12 * std::max(1.0, std::abs(curve))) return StepValue::Undefined;
    return omega > curve ? StepValue::One : StepValue::Zero;
}

double characteristic_residual(double x, double theta) {
    return std::cos(theta) / std::sin(theta) + boost::math::airy_ai_prime(x) / boost::math::airy_ai(x);
}

std::vector<double> characteristic_pi_crossings(double lo, double hi, std::size_t max_count) {
    // θ(x) = π/2 + atan(Ai′/Ai) sweeps up to π as x decreases onto a zero of Ai
    // and restarts from 0 beyond it; locate each such jump and bisect it.
    const auto theta = [](double x) {
        return 0.5 * std::numbers::pi + std::atan(boost::math::airy_ai_prime(x) / boost::math::airy_ai(x));
    };
    std::vector<double> out;
    const double step = 1e-2;
    double right = hi;
    double th_right = theta(right);
    while (right > lo && out.size() < max_count) {
        const double left = std::max(lo, right - step);
        const double th_left = theta(left);
        if (th_right > 0.75 * std::numbers::pi && th_left < 0.25 * std::numbers::pi) {
            double a = left, b = right;
            while (b - a > 1e-14 * std::max(1.0, std::abs(b))) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                if (theta(mid) > 0.5 * std::numbers::pi) {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            out.push_back(0.5 * (a + b));
        }
        right = left;
        th_right = th_left;
    }
    return out;
}

}  // namespace tw::validation

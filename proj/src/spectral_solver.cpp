#include "twbeta/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "twbeta/banded.hpp"
#include "twbeta/error.hpp"
#include "twbeta/initial_condition.hpp"
#include "twbeta/time_integrators.hpp"

namespace tw::spectral {

namespace {

constexpr Complex kI{0.0, 1.0};

std::size_t wrap(long p, std::size_t n) {
    const auto nn = static_cast<long>(n);
    return static_cast<std::size_t>(((p % nn) + nn) % nn);
}

}  // namespace

// ---------------------------------------------------------------- ShiftOperator

ShiftOperator ShiftOperator::identity(std::size_t n) {
    ShiftOperator op(n);
    op.terms_[0] = std::vector<Complex>(n, Complex{1.0});
    return op;
}

ShiftOperator ShiftOperator::diagonal(std::vector<Complex> d) {
    ShiftOperator op(d.size());
    op.terms_[0] = std::move(d);
    return op;
}

long ShiftOperator::normalize(long shift) const {
    const auto n = static_cast<long>(n_);
    long r = ((shift % n) + n) % n;
    if (r > n / 2) r -= n;
    return r;
}

void ShiftOperator::add_term(long shift, const std::vector<Complex>& c, Complex scale) {
    auto [it, inserted] = terms_.try_emplace(normalize(shift), n_, Complex{});
    auto& dst = it->second;
    for (std::size_t p = 0; p < n_; ++p) dst[p] += scale * c[p];
}

ShiftOperator& ShiftOperator::operator+=(const ShiftOperator& rhs) {
    if (rhs.n_ != n_) throw InvalidParameter("ShiftOperator size mismatch");
    for (const auto& [s, c] : rhs.terms_) add_term(s, c, 1.0);
    return *this;
}

ShiftOperator& ShiftOperator::operator-=(const ShiftOperator& rhs) {
    if (rhs.n_ != n_) throw InvalidParameter("ShiftOperator size mismatch");
    for (const auto& [s, c] : rhs.terms_) add_term(s, c, -1.0);
    return *this;
}

ShiftOperator& ShiftOperator::operator*=(Complex s) {
    for (auto& [shift, c] : terms_) {
        for (auto& v : c) v *= s;
    }
    return *this;
}

ShiftOperator operator*(const ShiftOperator& a, const ShiftOperator& b) {
    if (a.n_ != b.n_) throw InvalidParameter("ShiftOperator size mismatch");
    const std::size_t n = a.n_;
    ShiftOperator out(n);
    for (const auto& [s, x] : a.terms_) {
        for (const auto& [t, y] : b.terms_) {
            auto [it, inserted] = out.terms_.try_emplace(out.normalize(s + t), n, Complex{});
            auto& dst = it->second;
            for (std::size_t p = 0; p < n; ++p) dst[p] += x[p] * y[wrap(static_cast<long>(p) + s, n)];
        }
    }
    return out;
}

void ShiftOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
    std::fill(out.begin(), out.end(), Complex{});
    const auto n = static_cast<long>(n_);
    for (const auto& [s, c] : terms_) {
        const long r = ((s % n) + n) % n;
        // split the cyclic index range to avoid a modulo per entry
        const std::size_t first = static_cast<std::size_t>(n - r);
        for (std::size_t p = 0; p < first; ++p) out[p] += c[p] * in[p + static_cast<std::size_t>(r)];
        for (std::size_t p = first; p < n_; ++p) out[p] += c[p] * in[p - first];
    }
}

std::vector<Complex> ShiftOperator::dense() const {
    std::vector<Complex> m(n_ * n_, Complex{});
    for (const auto& [s, c] : terms_) {
        for (std::size_t p = 0; p < n_; ++p) m[p * n_ + wrap(static_cast<long>(p) + s, n_)] += c[p];
    }
    return m;
}

ShiftOperator ShiftOperator::shift(std::size_t n, long power) {
    ShiftOperator op(n);
    op.terms_[op.normalize(power)] = std::vector<Complex>(n, Complex{1.0});
    return op;
}

ShiftOperator build_shift(long power, std::size_t size) {
    if (size == 0) throw InvalidParameter("shift size must be positive");
    if (std::abs(power) >= static_cast<long>(size)) throw InvalidParameter("|power| must be below the size");
    return ShiftOperator::shift(size, power);
}

long mode_number(std::size_t position, std::size_t M) {
    return static_cast<long>(position) - static_cast<long>(M / 2);
}

// ---------------------------------------------------------------- FourierState

Complex FourierState::density(double theta) const {
    const std::size_t M = coeffs.size();
    Complex acc{};
    for (std::size_t p = 0; p < M; ++p) {
        const double m = static_cast<double>(mode_number(p, M));
        acc += coeffs[p] * std::exp(kI * (2.0 * m * theta / l));
    }
    return acc;
}

Complex FourierState::cumulative(double theta) const {
    const std::size_t M = coeffs.size();
    Complex acc{};
    for (std::size_t p = 0; p < M; ++p) {
        const long m = mode_number(p, M);
        if (m == 0) {
            acc += coeffs[p] * theta;
        } else {
            const double md = static_cast<double>(m);
            acc += coeffs[p] * (static_cast<double>(l) / (2.0 * kI * md)) *
                   (std::exp(kI * (2.0 * md * theta / l)) - 1.0);
        }
    }
    return acc;
}

// ---------------------------------------------------------------- operators

SpectralOperators::SpectralOperators(ShiftOperator A, ShiftOperator B, int l)
    : A_(std::move(A)), B_(std::move(B)), l_(l), base_shift_(0), bandwidth_(0) {
    if (A_.size() != B_.size()) throw InvalidParameter("A and B sizes differ");
    const std::size_t n = A_.size();
    for (const auto* op : {&A_, &B_}) {
        for (const auto& [s, c] : op->terms()) {
            if (std::find(shifts_.begin(), shifts_.end(), s) == shifts_.end()) shifts_.push_back(s);
        }
    }
    long g = static_cast<long>(n);
    for (long s : shifts_) g = std::gcd(g, std::abs(s));
    base_shift_ = g;
    const std::size_t L = n / static_cast<std::size_t>(g);
    for (long s : shifts_) bandwidth_ = std::max(bandwidth_, static_cast<std::size_t>(std::abs(s) / g));
    for (long r = 0; r < g; ++r) {
        std::vector<std::size_t> cyc(L);
        for (std::size_t q = 0; q < L; ++q) cyc[q] = static_cast<std::size_t>(r) + q * static_cast<std::size_t>(g);
        blocks_.push_back(std::move(cyc));
    }
}

void SpectralOperators::apply(double x, std::span<const Complex> in, std::span<Complex> out) const {
    std::vector<Complex> tmp(out.size());
    A_.apply(in, out);
    B_.apply(in, tmp);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += x * tmp[i];
}

namespace {

const std::vector<Complex>* find_term(const ShiftOperator& op, long s) {
    const auto it = op.terms().find(s);
    return it == op.terms().end() ? nullptr : &it->second;
}

}  // namespace

bool SpectralOperators::solve_shifted(double x, double a, double b, std::span<Complex> rhs) const {
    std::vector<Complex> local;
    for (const auto& cyc : blocks_) {
        const std::size_t L = cyc.size();
        CyclicBandedSolver solver(L, std::max<std::size_t>(bandwidth_, 1));
        for (long s : shifts_) {
            const auto* ca = find_term(A_, s);
            const auto* cb = find_term(B_, s);
            const int t = static_cast<int>(s / base_shift_);
            for (std::size_t q = 0; q < L; ++q) {
                const std::size_t p = cyc[q];
                Complex v{};
                if (ca) v += (*ca)[p];
                if (cb) v += x * (*cb)[p];
                solver.set(q, t, -b * v);
            }
        }
        for (std::size_t q = 0; q < L; ++q) solver.set(q, 0, Complex{a});
        if (!solver.factorize()) return false;
        local.resize(L);
        for (std::size_t q = 0; q < L; ++q) local[q] = rhs[cyc[q]];
        solver.solve(local);
        for (std::size_t q = 0; q < L; ++q) rhs[cyc[q]] = local[q];
    }
    return true;
}

std::vector<Complex> SpectralOperators::block_matrix(std::size_t block, double x) const {
    const auto& cyc = blocks_.at(block);
    const std::size_t L = cyc.size();
    std::vector<Complex> m(L * L, Complex{});
    for (long s : shifts_) {
        const auto* ca = find_term(A_, s);
        const auto* cb = find_term(B_, s);
        const long t = s / base_shift_;
        for (std::size_t q = 0; q < L; ++q) {
            const std::size_t p = cyc[q];
            Complex v{};
            if (ca) v += (*ca)[p];
            if (cb) v += x * (*cb)[p];
            m[q * L + wrap(static_cast<long>(q) + t, L)] += v;
        }
    }
    return m;
}

ShiftOperator build_d1(std::size_t M, int l) {
    std::vector<Complex> d(M);
    for (std::size_t p = 0; p < M; ++p) d[p] = kI * (2.0 * static_cast<double>(mode_number(p, M)) / l);
    return ShiftOperator::diagonal(std::move(d));
}

SpectralOperators build_operators(double beta, std::size_t M, int l) {
    if (l < 2 || l % 2 != 0) throw InvalidParameter("spectral domain scale l must be a positive even integer");
    if (M < 4 * static_cast<std::size_t>(l)) throw InvalidParameter("too few Fourier modes for the operator shifts");
    const long h = l / 2;
    const auto I = ShiftOperator::identity(M);
    const auto S = [&](long k) { return ShiftOperator::shift(M, k); };
    const auto D1 = build_d1(M, l);
    const auto D2 = D1 * D1;
    const Complex inv2i = 1.0 / (2.0 * kI);
    const Complex inv8i = 1.0 / (8.0 * kI);

    // multiplication by trigonometric polynomials in θ; e^{iθ} is S_{−l/2}
    const auto sin1 = inv2i * S(-h) - inv2i * S(h);
    const auto cos1 = 0.5 * S(h) + 0.5 * S(-h);
    const auto sin2 = inv2i * S(-l) - inv2i * S(l);
    const auto cos2 = 0.5 * S(l) + 0.5 * S(-l);
    const auto sinsq = 0.5 * I - 0.25 * S(l) - 0.25 * S(-l);
    const auto cossq = 0.5 * I + 0.25 * S(-l) + 0.25 * S(l);
    const auto sin4 = 0.375 * I - 0.25 * S(-l) - 0.25 * S(l) + 0.0625 * S(2 * l) + 0.0625 * S(-2 * l);
    // sin³θ = (3 sinθ − sin3θ)/4
    const auto sin3 = (-1.0 * inv8i) * S(-3 * h) + inv8i * S(3 * h) + (3.0 * inv8i) * S(-h) - (3.0 * inv8i) * S(h);

    const double c = 2.0 / beta;
    ShiftOperator A = (-c) * (sin4 * D2);
    A += (cossq - c * (sin2 * sinsq)) * D1;
    A -= (4.0 * c) * (sin3 * cos1) * D1;
    A -= (2.0 * c) * (sinsq * cos2);
    A -= (2.0 * c) * (sin1 * cos1 * sin2);
    A -= 2.0 * (sin1 * cos1);

    ShiftOperator B = (-1.0 * sinsq) * D1;
    B -= 2.0 * (sin1 * cos1);
    return SpectralOperators(std::move(A), std::move(B), l);
}

SpectralOperators build_operators(const SolverConfig& config) {
    if (config.method != Method::Spectral) {
        throw InvalidParameter("spectral build_operators called with a finite-difference configuration");
    }
    return build_operators(config.beta, config.M, config.theta_over_pi);
}

// ---------------------------------------------------------------- startup and recovery

FourierState startup_state(double x, double beta, std::size_t M, int l) {
    if (!(x > 0.0)) throw InvalidParameter("spectral startup needs x > 0");
    FourierState st;
    st.l = l;
    st.x = x;
    st.coeffs.assign(M, Complex{});
    const double h = l * std::numbers::pi / static_cast<double>(M);
    const auto Ml = static_cast<long>(M);
    std::vector<double> rho;
    for (std::size_t j = 0; static_cast<double>(j) * h < 0.5 * std::numbers::pi; ++j) {
        rho.push_back(initial_density(x, beta, static_cast<double>(j) * h));
    }
    for (std::size_t p = 0; p < M; ++p) {
        const long m = mode_number(p, M);
        Complex acc{};
        for (std::size_t j = 0; j < rho.size(); ++j) {
            if (rho[j] == 0.0) continue;
            const long k = ((m * static_cast<long>(j)) % Ml + Ml) % Ml;
            acc += rho[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(M));
        }
        st.coeffs[p] = acc / static_cast<double>(M);
    }
    return st;
}

std::vector<FourierState> startup_states(const SolverConfig& config) {
    const auto spec = stepper_spec(config.stepper);
    if (!(config.x0 - 4.0 * -config.dx > 0.0)) throw InvalidParameter("spectral startup needs x0 - 4|dx| > 0");
    std::vector<FourierState> out;
    for (int i = 0; i < spec.steps; ++i) {
        out.push_back(startup_state(config.x0 - i * config.dx, config.beta, config.M, config.theta_over_pi));
    }
    return out;
}

std::vector<Complex> recovery_weights(std::size_t M, int l, int k) {
    std::vector<Complex> w(M);
    for (std::size_t p = 0; p < M; ++p) {
        const long m = mode_number(p, M);
        if (m == 0) {
            w[p] = k * std::numbers::pi;
        } else {
            const double md = static_cast<double>(m);
            w[p] = (static_cast<double>(l) / (2.0 * kI * md)) *
                   (std::exp(kI * (2.0 * md * k * std::numbers::pi / l)) - 1.0);
        }
    }
    return w;
}

std::optional<DxWindow> published_instability_window(Stepper stepper) {
    switch (stepper) {
        case Stepper::BDF3: return DxWindow{-0.004, -0.002};
        case Stepper::BDF4: return DxWindow{-0.01, -0.002};
        case Stepper::BDF5: return DxWindow{-0.02, -0.004};
        case Stepper::BDF6: return DxWindow{-0.1, -0.004};
        case Stepper::Trapezoidal: return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- solve

SolveResult solve_spectral(const SolverConfig& config) { return solve_spectral(config, nullptr); }

SolveResult solve_spectral(const SolverConfig& input, FourierState* final_state) {
    const SolverConfig config = validated(input);
    if (config.method != Method::Spectral) throw InvalidParameter("solve_spectral needs method = spectral");
    if (const auto window = published_instability_window(config.stepper);
        window && window->contains(config.dx) && !config.force) {
        std::ostringstream msg;
        msg << "dx = " << config.dx << " lies in the instability window [" << window->lo << ", " << window->hi
            << "] of " << to_string(config.stepper) << " on the spectral discretization; use force to override";
        throw StabilityRefusal(msg.str());
    }

    const SpectralOperators op = build_operators(config);
    const StepperSpec spec = stepper_spec(config.stepper);
    const std::size_t M = config.M;
    const int l = config.theta_over_pi;

    SolveResult result;
    result.config = config;
    result.grid = make_grid(config);
    result.levels = config.levels;
    result.warnings = config.warnings;
    const std::size_t points = result.grid.size();
    result.cdf.assign(config.levels.size(), std::vector<double>(points));
    result.pdf.assign(config.levels.size(), config.want_pdf ? std::vector<double>(points) : std::vector<double>{});

    std::vector<std::vector<Complex>> weights;
    for (int k : config.levels) weights.push_back(recovery_weights(M, l, k));

    auto states = startup_states(config);
    std::vector<std::vector<Complex>> startup;
    for (auto it = states.rbegin(); it != states.rend(); ++it) startup.push_back(std::move(it->coeffs));

    const std::size_t tail = std::max<std::size_t>(1, M / 50);
    std::vector<Complex> deriv(M);
    std::vector<Complex> last;
    double leak = 0.0;
    double tail_max = 0.0;

    integrate(spec, std::move(startup), op, result.grid, [&](std::size_t n, double x, const std::vector<Complex>& a) {
        if (config.want_pdf) op.apply(x, a, deriv);
        for (std::size_t k = 0; k < weights.size(); ++k) {
            Complex F{}, f{};
            for (std::size_t p = 0; p < M; ++p) F += a[p] * weights[k][p];
            result.cdf[k][n] = F.real();
            leak = std::max(leak, std::abs(F.imag()));
            if (config.want_pdf) {
                for (std::size_t p = 0; p < M; ++p) f += deriv[p] * weights[k][p];
                result.pdf[k][n] = f.real();
                leak = std::max(leak, std::abs(f.imag()));
            }
        }
        for (std::size_t p = 0; p < tail; ++p) {
            tail_max = std::max({tail_max, std::abs(a[p]), std::abs(a[M - 1 - p])});
        }
        if (final_state && n + 1 == points) last = a;
    });

    result.max_imag_leakage = leak;
    result.max_tail_coefficient = tail_max;
    if (tail_max > 1e-6) {
        result.warnings.push_back("trailing Fourier coefficients reached " + std::to_string(tail_max) +
                                  "; the mode count is too small to resolve the density");
    }
    if (final_state) {
        final_state->coeffs = std::move(last);
        final_state->l = l;
        final_state->x = result.grid.back();
    }
    return result;
}

}  // namespace tw::spectral

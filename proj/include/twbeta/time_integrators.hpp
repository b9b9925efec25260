#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "twbeta/config.hpp"
#include "twbeta/error.hpp"

namespace tw {

/// Linear multistep method Σ α_j v^{n+j} = Δx Σ β_j f(x_{n+j}, v^{n+j}), j = 0..r.
///
/// Coefficients are stored with the integer scaling of the classical tables
/// (e.g. BDF5 as 137, −300, ..., with β_r = 60), which is the form the implicit
/// matrices are written in.
struct StepperSpec {
    Stepper kind = Stepper::Trapezoidal;
    int steps = 1;
    std::vector<double> alpha;
    std::vector<double> beta;
};

StepperSpec stepper_spec(Stepper kind);

/// Σα_j = 0 and Σ jα_j = Σβ_j.
bool is_consistent(const StepperSpec& spec, double tol = 1e-12);

/// A family of linear operators L(x) = P + x·Q acting on state vectors.
template <typename Op>
concept AffineOperator = requires(const Op& op, double x, double a, double b,
                                  std::span<const typename Op::value_type> in,
                                  std::span<typename Op::value_type> out) {
    typename Op::value_type;
    { op.size() } -> std::convertible_to<std::size_t>;
    op.apply(x, in, out);
    // (a·I − b·L(x)) y = rhs, solved in place; returns false if singular
    { op.solve_shifted(x, a, b, out) } -> std::same_as<bool>;
};

/// One implicit step to `x_next` from `history` (oldest first, exactly spec.steps
/// states at x_next − r·dx, ..., x_next − dx).
template <AffineOperator Op>
std::vector<typename Op::value_type> advance(const StepperSpec& spec,
                                             const std::deque<std::vector<typename Op::value_type>>& history,
                                             const Op& op, double x_next, double dx) {
    using V = typename Op::value_type;
    const auto r = static_cast<std::size_t>(spec.steps);
    if (history.size() < r) throw InvalidParameter("stepper history shorter than its step count");
    const std::size_t n = op.size();
    const std::size_t base = history.size() - r;

    std::vector<V> rhs(n, V{});
    std::vector<V> f(n);
    for (std::size_t j = 0; j < r; ++j) {
        const auto& v = history[base + j];
        const double a = spec.alpha[j];
        if (a != 0.0) {
            for (std::size_t i = 0; i < n; ++i) rhs[i] -= a * v[i];
        }
        const double b = spec.beta[j];
        if (b != 0.0) {
            const double xj = x_next - static_cast<double>(r - j) * dx;
            op.apply(xj, v, f);
            for (std::size_t i = 0; i < n; ++i) rhs[i] += dx * b * f[i];
        }
    }
    if (!op.solve_shifted(x_next, spec.alpha[r], dx * spec.beta[r], rhs)) {
        throw SolverError("singular implicit matrix", x_next);
    }
    return rhs;
}

/// Startup history evaluated from an exact source at x0 − iΔx, i = r−1, ..., 0
/// (oldest first), never by lower-order stepping.
template <typename State>
std::vector<State> bootstrap(const StepperSpec& spec, const std::function<State(double)>& exact_source, double x0,
                             double dx) {
    std::vector<State> out;
    out.reserve(static_cast<std::size_t>(spec.steps));
    for (int i = spec.steps - 1; i >= 0; --i) out.push_back(exact_source(x0 - i * dx));
    return out;
}

/// Marches `startup` across `grid` and hands every state (x_0 included) to
/// `observe(n, x_n, state)`. Non-finite states abort with a SolverError.
template <AffineOperator Op, typename Observer>
void integrate(const StepperSpec& spec, std::vector<std::vector<typename Op::value_type>> startup, const Op& op,
               const XGrid& grid, Observer&& observe) {
    using V = typename Op::value_type;
    std::deque<std::vector<V>> history(std::make_move_iterator(startup.begin()),
                                       std::make_move_iterator(startup.end()));
    observe(std::size_t{0}, grid.points[0], history.back());
    for (std::size_t n = 1; n < grid.size(); ++n) {
        auto next = advance(spec, history, op, grid.points[n], grid.dx);
        for (const auto& v : next) {
            if (!std::isfinite(std::abs(v))) throw SolverError("non-finite state", grid.points[n]);
        }
        history.push_back(std::move(next));
        if (history.size() > static_cast<std::size_t>(spec.steps)) history.pop_front();
        observe(n, grid.points[n], history.back());
    }
}

}  // namespace tw

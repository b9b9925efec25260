#include <doctest.h>

#include <cmath>
#include <span>
#include <vector>

#include "twbeta/time_integrators.hpp"

using namespace tw;

namespace {

// v' = (p + x q) v on a single component
struct Scalar {
    using value_type = double;
    double p = 1.0, q = 0.0;

    std::size_t size() const { return 1; }
    void apply(double x, std::span<const double> in, std::span<double> out) const { out[0] = (p + x * q) * in[0]; }
    bool solve_shifted(double x, double a, double b, std::span<double> rhs) const {
        const double d = a - b * (p + x * q);
        if (d == 0.0) return false;
        rhs[0] /= d;
        return true;
    }
};

static_assert(AffineOperator<Scalar>);

double global_error(Stepper s, double dx, const Scalar& op, double (*exact)(double)) {
    const auto spec = stepper_spec(s);
    const double x0 = 0.0, x1 = -1.0;
    XGrid grid;
    grid.dx = dx;
    const auto n = static_cast<std::size_t>(std::llround((x1 - x0) / dx));
    for (std::size_t i = 0; i <= n; ++i) grid.points.push_back(x0 + static_cast<double>(i) * dx);
    const auto startup = bootstrap<std::vector<double>>(
        spec, [&](double x) { return std::vector<double>{exact(x)}; }, x0, dx);
    double last = 0.0;
    integrate(spec, startup, op, grid, [&](std::size_t, double, const std::vector<double>& v) { last = v[0]; });
    return std::abs(last - exact(grid.back()));
}

double expo(double x) { return std::exp(x); }
double gauss(double x) { return std::exp(0.5 * x * x - x); }

}  // namespace

TEST_CASE("all steppers are consistent") {
    for (auto s : {Stepper::Trapezoidal, Stepper::BDF3, Stepper::BDF4, Stepper::BDF5, Stepper::BDF6}) {
        const auto spec = stepper_spec(s);
        CHECK(is_consistent(spec));
        CHECK(spec.alpha.size() == static_cast<std::size_t>(spec.steps) + 1);
        CHECK(spec.beta.size() == spec.alpha.size());
    }
    CHECK(stepper_spec(Stepper::BDF5).steps == 5);
    CHECK(stepper_spec(Stepper::BDF5).alpha.back() == 137.0);
    CHECK(stepper_spec(Stepper::BDF5).beta.back() == 60.0);
}

TEST_CASE("bootstrap orders states oldest first") {
    const auto spec = stepper_spec(Stepper::BDF3);
    const auto s = bootstrap<double>(spec, [](double x) { return x; }, 1.0, -0.1);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == doctest::Approx(1.2));
    CHECK(s[1] == doctest::Approx(1.1));
    CHECK(s[2] == doctest::Approx(1.0));
}

TEST_CASE("global convergence orders on v' = v") {
    const Scalar op{1.0, 0.0};
    const struct {
        Stepper s;
        double order;
    } cases[] = {{Stepper::Trapezoidal, 2.0}, {Stepper::BDF3, 3.0}, {Stepper::BDF4, 4.0}, {Stepper::BDF5, 5.0},
                 {Stepper::BDF6, 6.0}};
    for (const auto& c : cases) {
        const double e1 = global_error(c.s, -0.02, op, expo);
        const double e2 = global_error(c.s, -0.01, op, expo);
        CHECK(std::log2(e1 / e2) == doctest::Approx(c.order).epsilon(0.08));
    }
}

TEST_CASE("x-dependent coefficient v' = (x - 1) v") {
    const Scalar op{-1.0, 1.0};
    const double e1 = global_error(Stepper::BDF5, -0.02, op, gauss);
    const double e2 = global_error(Stepper::BDF5, -0.01, op, gauss);
    CHECK(std::log2(e1 / e2) == doctest::Approx(5.0).epsilon(0.08));
    CHECK(e2 < 1e-7);
}

TEST_CASE("non-finite states abort") {
    const Scalar op{-1e300, 0.0};
    const auto spec = stepper_spec(Stepper::Trapezoidal);
    XGrid grid{{0.0, -1.0, -2.0}, -1.0};
    CHECK_THROWS_AS(integrate(spec, std::vector<std::vector<double>>{{1e300}}, op, grid,
                              [](std::size_t, double, const std::vector<double>&) {}),
                    SolverError);
}

TEST_CASE("short history is rejected") {
    const Scalar op;
    const auto spec = stepper_spec(Stepper::BDF4);
    std::deque<std::vector<double>> h{{1.0}, {1.0}};
    CHECK_THROWS_AS(advance(spec, h, op, -1.0, -0.1), InvalidParameter);
}

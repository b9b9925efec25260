#include <doctest.h>

#include <boost/math/special_functions/airy.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "twbeta/error.hpp"
#include "twbeta/validation.hpp"

using namespace tw;
using namespace tw::validation;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    const auto [x, w] = gauss_legendre(10);
    double s0 = 0.0, s18 = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        s0 += w[i];
        s18 += w[i] * std::pow(x[i], 18);
    }
    CHECK(s0 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s18 == doctest::Approx(2.0 / 19.0).epsilon(1e-14));
}

TEST_CASE("Fredholm determinant converges under order doubling") {
    for (double x : {-8.0, -2.0, 0.0, 3.0}) {
        const double a = fredholm_f2(x, 60);
        const double b = fredholm_f2(x, 120);
        CHECK(std::abs(a - b) < 1e-13);
        CHECK(fredholm_reference(x) == b);
    }
    CHECK(std::abs(fredholm_reference(8.0) - 1.0) < 1e-13);
    CHECK_THROWS_AS(fredholm_reference(0.0, 10), InvalidParameter);
    // too coarse to agree with its doubling
    CHECK_THROWS_AS(fredholm_reference(-4.0, 20), OracleFailure);
}

TEST_CASE("Fredholm values increase monotonically") {
    double prev = 0.0;
    for (double x = -6.0; x <= 4.0; x += 0.5) {
        const double v = fredholm_reference(x);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("oracle derivative matches a difference quotient") {
    const F2Oracle o;
    for (double x : {-4.0, -2.0, -1.0, 1.0}) {
        const double h = 1e-3;
        const double fd = (fredholm_reference(x + h) - fredholm_reference(x - h)) / (2.0 * h);
        CHECK(o.pdf(x) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        CHECK(std::abs(o.cdf(x) - fredholm_reference(x)) < 1e-13);
    }
}

TEST_CASE("frozen oracle table agrees with the live oracle") {
    std::ifstream f(TW_TEST_DATA_DIR "/f2_oracle.csv");
    REQUIRE(f);
    std::string line;
    int rows = 0, checked = 0;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
        if (rows++ % 250 != 0) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        std::getline(ss, c, ',');
        CHECK(std::abs(std::stod(b) - fredholm_reference(std::stod(a))) < 1e-13);
        ++checked;
    }
    CHECK(rows == 2001);
    CHECK(checked == 9);
}

TEST_CASE("beta = 4 argument rescaling") {
    CHECK(beta4_argument_rescale(std::pow(2.0, 1.0 / 6.0)) == doctest::Approx(1.0));
}

TEST_CASE("Sturm count and bisection") {
    // tridiag(1, 2, 1) of size 5: eigenvalues 2 + 2 cos(kπ/6)
    const std::vector<double> d(5, 2.0), e(4, 1.0);
    CHECK(sturm_count(d, e, 0.0) == 0);
    CHECK(sturm_count(d, e, 2.0 + 1e-9) == 3);
    CHECK(sturm_count(d, e, 10.0) == 5);
    CHECK(largest_eigenvalue(d, e) == doctest::Approx(2.0 + 2.0 * std::cos(std::numbers::pi / 6.0)).epsilon(1e-10));
    CHECK_THROWS_AS(largest_eigenvalue(d, std::vector<double>(2, 1.0)), InvalidParameter);
}

TEST_CASE("sampler is deterministic in the seed") {
    const auto a = sample_hermite(2000, 2.0, 42);
    const auto b = sample_hermite(2000, 2.0, 42);
    const auto c = sample_hermite(2000, 2.0, 43);
    CHECK(a.rescaled == b.rescaled);
    CHECK(a.rescaled != c.rescaled);
    CHECK(a.rescaled == doctest::Approx(std::pow(2000.0, 1.0 / 6.0) * (a.lambda_max - 2.0 * std::sqrt(2000.0))));
    const auto batch = sample_hermite_batch(300, 3.0, 7, 10, 3);
    const auto serial = sample_hermite_batch(300, 3.0, 7, 10, 1);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(batch[i].rescaled == serial[i].rescaled);
        CHECK(batch[i].rescaled == sample_hermite(300, 3.0, 7 + i).rescaled);
    }
}

TEST_CASE("one by one matrices are scaled normals") {
    const auto s = sample_hermite(1, 2.0, 11);
    CHECK(s.rescaled == doctest::Approx(s.lambda_max - 2.0));
    double sum = 0.0, sq = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        const double v = sample_hermite(1, 4.0, 1000 + i).lambda_max;
        sum += v;
        sq += v * v;
    }
    const double mean = sum / n, var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 * std::sqrt(0.5 / n));
    CHECK(var == doctest::Approx(0.5).epsilon(0.08));
    CHECK_THROWS_AS(sample_hermite(0, 2.0, 1), InvalidParameter);
    CHECK_THROWS_AS(sample_hermite(5, -1.0, 1), InvalidParameter);
}

TEST_CASE("KS distance") {
    const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_distance({0.5}, uniform) == doctest::Approx(0.5));
    CHECK(ks_distance({0.125, 0.375, 0.625, 0.875}, uniform) == doctest::Approx(0.125));
    CHECK_THROWS_AS(ks_distance({}, uniform), InvalidParameter);
}

TEST_CASE("Airy characteristic") {
    const auto c0 = airy_characteristic(0.0);
    // Ai'(0)/Ai(0) from the tabulated values 0.355028053887817, −0.258819403792807
    CHECK(c0.omega_tilde == doctest::Approx(-0.258819403792807 / 0.355028053887817).epsilon(1e-12));
    CHECK(-std::cos(c0.theta) / std::sin(c0.theta) == doctest::Approx(c0.omega_tilde).epsilon(1e-12));
    CHECK(airy_characteristic(25.0).omega_tilde / -5.0 == doctest::Approx(1.0).epsilon(0.02));
    CHECK_THROWS_AS(airy_characteristic(boost::math::airy_ai_zero<double>(1)), InvalidParameter);
    // approaching the first zero from the right, θ → π
    CHECK(airy_characteristic(boost::math::airy_ai_zero<double>(1) + 1e-6).theta > std::numbers::pi - 1e-5);
}

TEST_CASE("beta = infinity limit") {
    CHECK(beta_infinity_solution(0.0, 10.0) == StepValue::One);
    CHECK(beta_infinity_solution(0.0, -10.0) == StepValue::Zero);
    CHECK(beta_infinity_solution(1.0, airy_characteristic(1.0).omega_tilde) == StepValue::Undefined);
    CHECK(std::abs(characteristic_residual(1.3, airy_characteristic(1.3).theta)) < 1e-12);
}

TEST_CASE("characteristic reaches theta = pi at the Airy zeros") {
    const auto x = characteristic_pi_crossings(-6.0, 0.0, 3);
    REQUIRE(x.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(x[k] - boost::math::airy_ai_zero<double>(k + 1)) < 1e-10);
}

#include "twbeta/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twbeta/error.hpp"

namespace tw {

namespace {

void require_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw InvalidParameter("beta must be a positive finite number, got " + std::to_string(beta));
    }
}

}  // namespace

std::string_view to_string(Method m) {
    return m == Method::FiniteDifference ? "finite" : "spectral";
}

std::string_view to_string(Stepper s) {
    switch (s) {
        case Stepper::Trapezoidal: return "trapz";
        case Stepper::BDF3: return "bdf3";
        case Stepper::BDF4: return "bdf4";
        case Stepper::BDF5: return "bdf5";
        case Stepper::BDF6: return "bdf6";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    if (name == "finite") return Method::FiniteDifference;
    if (name == "spectral") return Method::Spectral;
    throw InvalidParameter("unknown method '" + std::string(name) + "' (expected finite|spectral)");
}

Stepper parse_stepper(std::string_view name) {
    for (auto s : {Stepper::Trapezoidal, Stepper::BDF3, Stepper::BDF4, Stepper::BDF5, Stepper::BDF6}) {
        if (to_string(s) == name) return s;
    }
    throw InvalidParameter("unknown step '" + std::string(name) + "' (expected trapz|bdf3|bdf4|bdf5|bdf6)");
}

double SolverConfig::theta_max() const { return theta_over_pi * std::numbers::pi; }

int SolverConfig::max_level() const {
    return levels.empty() ? 1 : *std::max_element(levels.begin(), levels.end());
}

std::size_t SolverConfig::steps() const {
    return static_cast<std::size_t>(std::llround((x0 - xN) / -dx));
}

SolverConfig default_config(double beta, Method method) {
    require_beta(beta);
    SolverConfig c;
    c.beta = beta;
    c.x0 = std::floor(13.0 / std::sqrt(beta));
    c.xN = -10.0;
    c.dx = -1e-3;
    c.K = 1000;
    c.method = method;
    if (method == Method::FiniteDifference) {
        c.theta_over_pi = 1;
        c.M = 1000;
        c.stepper = Stepper::Trapezoidal;
    } else {
        c.theta_over_pi = 20;
        c.M = 8000;
        c.stepper = Stepper::BDF5;
    }
    return c;
}

double recommended_x0(double beta, bool conservative) {
    require_beta(beta);
    return conservative ? 13.0 / std::sqrt(beta) : 13.0 / std::cbrt(beta * beta);
}

std::size_t coupled_fd_resolution(double dx) {
    if (!(dx < 0.0)) throw InvalidParameter("dx must be negative");
    return static_cast<std::size_t>(std::floor(-1.0 / dx));
}

SolverConfig validated(SolverConfig c) {
    require_beta(c.beta);
    c.warnings.clear();
    if (!(c.dx < 0.0) || !std::isfinite(c.dx)) throw InvalidParameter("dx must be negative");
    if (!std::isfinite(c.x0) || !std::isfinite(c.xN) || !(c.x0 > c.xN)) {
        throw InvalidParameter("need x0 > xN");
    }
    if (!(c.x0 > 0.0)) {
        throw InvalidParameter("x0 must be positive for the asymptotic initial condition");
    }
    if (c.M < 3) throw InvalidParameter("M must be at least 3");
    if (c.K < 2) throw InvalidParameter("K must be at least 2");
    if (c.theta_over_pi < 1) throw InvalidParameter("thetaM_over_pi must be a positive integer");
    if (c.levels.empty()) c.levels = {1};
    for (int k : c.levels) {
        if (k < 1) throw InvalidParameter("levels must be positive integers");
    }

    if (c.beta < 1.0 || c.beta > 30.0) {
        c.warnings.push_back("beta = " + std::to_string(c.beta) +
                             " lies outside [1, 30] where the default discretization is known to be stable");
    }

    const double span = (c.x0 - c.xN) / -c.dx;
    const double rounded = std::round(span);
    if (std::abs(span - rounded) > 1e-9 * std::max(1.0, span)) {
        const auto n = static_cast<long long>(std::floor(span));
        if (n < 1) throw InvalidParameter("dx is larger than the x domain");
        const double old = c.xN;
        c.xN = c.x0 + static_cast<double>(n) * c.dx;
        c.warnings.push_back("xN moved from " + std::to_string(old) + " to " + std::to_string(c.xN) +
                             " to land on the x grid");
    } else if (rounded < 1.0) {
        throw InvalidParameter("dx is larger than the x domain");
    }

    const int kmax = c.max_level();
    if (c.method == Method::FiniteDifference) {
        if (c.theta_over_pi < kmax) {
            // keep h fixed while widening the θ domain
            if (c.M % static_cast<std::size_t>(c.theta_over_pi) != 0) {
                throw InvalidParameter("cannot widen theta domain: M not divisible by thetaM_over_pi");
            }
            c.M = c.M / static_cast<std::size_t>(c.theta_over_pi) * static_cast<std::size_t>(kmax);
            c.theta_over_pi = kmax;
        }
        for (int k : c.levels) {
            if ((c.M * static_cast<std::size_t>(k)) % static_cast<std::size_t>(c.theta_over_pi) != 0) {
                throw InvalidParameter("theta = " + std::to_string(k) + "pi is not an FD grid node");
            }
        }
    } else {
        if (c.theta_over_pi % 2 != 0) {
            throw InvalidParameter("spectral method needs an even thetaM_over_pi (half-period shifts must be integral)");
        }
        if (c.theta_over_pi < kmax) {
            throw InvalidParameter("spectral thetaM_over_pi must be at least the largest level");
        }
        if (c.theta_over_pi < 20) {
            c.warnings.push_back("thetaM below 20*pi may let the density wrap around the periodic domain");
        }
        if (!(c.x0 - 4.0 * -c.dx > 0.0)) {
            throw InvalidParameter("spectral startup needs x0 - 4|dx| > 0");
        }
    }
    return c;
}

XGrid make_grid(const SolverConfig& c) {
    XGrid g;
    g.dx = c.dx;
    const std::size_t n = c.steps();
    g.points.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g.points[i] = c.x0 + static_cast<double>(i) * c.dx;
    return g;
}

nlohmann::json to_json(const SolverConfig& c) {
    return {
        {"beta", c.beta},
        {"x0", c.x0},
        {"xN", c.xN},
        {"dx", c.dx},
        {"thetaM_over_pi", c.theta_over_pi},
        {"M", c.M},
        {"K", c.K},
        {"method", std::string(to_string(c.method))},
        {"step", std::string(to_string(c.stepper))},
        {"pdf", c.want_pdf},
        {"levels", c.levels},
        {"force", c.force},
    };
}

SolverConfig config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InvalidParameter("config document must be a JSON object");
    try {
        const double beta = doc.value("beta", 2.0);
        const Method method = parse_method(doc.value("method", std::string("finite")));
        SolverConfig c = default_config(beta, method);
        if (doc.contains("step")) c.stepper = parse_stepper(doc.at("step").get<std::string>());
        c.x0 = doc.value("x0", c.x0);
        c.xN = doc.value("xN", c.xN);
        c.dx = doc.value("dx", c.dx);
        c.theta_over_pi = doc.value("thetaM_over_pi", c.theta_over_pi);
        c.M = doc.value("M", c.M);
        c.K = doc.value("K", c.K);
        c.want_pdf = doc.value("pdf", c.want_pdf);
        c.levels = doc.value("levels", c.levels);
        c.force = doc.value("force", c.force);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("malformed config: ") + e.what());
    }
}

}  // namespace tw

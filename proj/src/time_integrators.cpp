#include "twbeta/time_integrators.hpp"

#include <cmath>
#include <numeric>

namespace tw {

StepperSpec stepper_spec(Stepper kind) {
    switch (kind) {
        case Stepper::Trapezoidal: return {kind, 1, {-2, 2}, {1, 1}};
        case Stepper::BDF3: return {kind, 3, {-2, 9, -18, 11}, {0, 0, 0, 6}};
        case Stepper::BDF4: return {kind, 4, {3, -16, 36, -48, 25}, {0, 0, 0, 0, 12}};
        case Stepper::BDF5: return {kind, 5, {-12, 75, -200, 300, -300, 137}, {0, 0, 0, 0, 0, 60}};
        case Stepper::BDF6: return {kind, 6, {10, -72, 225, -400, 450, -360, 147}, {0, 0, 0, 0, 0, 0, 60}};
    }
    throw InvalidParameter("unknown stepper");
}

bool is_consistent(const StepperSpec& spec, double tol) {
    double s0 = 0, s1 = 0, sb = 0;
    for (std::size_t j = 0; j < spec.alpha.size(); ++j) {
        s0 += spec.alpha[j];
        s1 += static_cast<double>(j) * spec.alpha[j];
        sb += spec.beta[j];
    }
    return std::abs(s0) <= tol && std::abs(s1 - sb) <= tol * std::max(1.0, std::abs(sb));
}

}  // namespace tw

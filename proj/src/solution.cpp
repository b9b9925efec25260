#include "twbeta/solution.hpp"

#include <algorithm>
#include <cmath>

#include "twbeta/error.hpp"

namespace tw {

namespace {

std::size_t level_index(const std::vector<int>& levels, int k) {
    const auto it = std::find(levels.begin(), levels.end(), k);
    if (it == levels.end()) throw InvalidParameter("level " + std::to_string(k) + " was not computed");
    return static_cast<std::size_t>(it - levels.begin());
}

}  // namespace

const std::vector<double>& SolveResult::cdf_at(int k) const { return cdf[level_index(levels, k)]; }

const std::vector<double>& SolveResult::pdf_at(int k) const { return pdf[level_index(levels, k)]; }

double SolveResult::cdf_near(double x, int k) const {
    const double pos = (x - grid.front()) / grid.dx;
    const auto n = static_cast<long long>(std::llround(pos));
    if (n < 0 || n >= static_cast<long long>(grid.size())) throw InvalidParameter("x outside the solved domain");
    return cdf_at(k)[static_cast<std::size_t>(n)];
}

}  // namespace tw

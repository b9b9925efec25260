#pragma once

#include <string>
#include <vector>

#include "twbeta/config.hpp"

namespace tw {

/// Grid traces of H(x_n, kπ) and ∂H/∂x(x_n, kπ) for every requested level k.
struct SolveResult {
    SolverConfig config;
    XGrid grid;
    std::vector<int> levels;
    std::vector<std::vector<double>> cdf;  // cdf[level index][n]
    std::vector<std::vector<double>> pdf;  // empty inner vectors when pdf is off

    /// Spectral only: largest |Im| of any recovered cdf/pdf value.
    double max_imag_leakage = 0.0;
    /// Spectral only: largest trailing Fourier coefficient magnitude seen.
    double max_tail_coefficient = 0.0;
    std::vector<std::string> warnings;

    /// Trace for level k (throws if k was not requested).
    const std::vector<double>& cdf_at(int k) const;
    const std::vector<double>& pdf_at(int k) const;
    /// Value at the grid point nearest x.
    double cdf_near(double x, int k = 1) const;
};

}  // namespace tw

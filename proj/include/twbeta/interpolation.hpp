#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twbeta/config.hpp"

namespace tw {

enum class InterpolantKind { Cdf, Pdf };

std::string_view to_string(InterpolantKind kind);

/// Chebyshev series Σ c_j T_j(t) on [a, b], t = (2x − a − b)/(b − a).
///
/// Outside [a, b] a cdf clamps to 0 on the left and 1 on the right, a pdf to 0.
class ChebyshevInterpolant {
public:
    struct Evaluation {
        double value;
        bool out_of_domain;
    };

    ChebyshevInterpolant(InterpolantKind kind, double a, double b, std::vector<double> coefficients);

    /// K Chebyshev points of the first kind on [a, b], in decreasing order.
    static std::vector<double> nodes(std::size_t K, double a, double b);
    /// Fit from values at `nodes(values.size(), a, b)`.
    static ChebyshevInterpolant fit(InterpolantKind kind, double a, double b, std::span<const double> values);

    InterpolantKind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    std::size_t size() const { return coeffs_.size(); }
    std::span<const double> coefficients() const { return coeffs_; }

    double operator()(double x) const { return evaluate(x).value; }
    Evaluation evaluate(double x) const;
    /// Series value with no clamping (extrapolates outside [a, b]).
    double series(double x) const;

    /// Term-by-term derivative; a cdf's derivative is a pdf.
    ChebyshevInterpolant derivative() const;
    /// ∫_a^b of the series.
    double integral() const;

    nlohmann::json to_json() const;
    static ChebyshevInterpolant from_json(const nlohmann::json& doc);

private:
    InterpolantKind kind_;
    double a_, b_;
    std::vector<double> coeffs_;
};

/// φ(x) = (erf(x) + 1)/2.
double periodizer(double x);

/// cdf_values − φ(xs); the result is close to periodic over the grid.
std::vector<double> periodize(const XGrid& xs, std::span<const double> cdf_values);

/// Trigonometric interpolant through equispaced samples f_j at start + j·spacing,
/// j = 0..N−1, of period N·spacing (barycentric form; the Nyquist mode of an even
/// N is split symmetrically).
double trig_interpolate(std::span<const double> samples, double start, double spacing, double x);

struct DistributionApproximation {
    ChebyshevInterpolant cdf;
    ChebyshevInterpolant pdf;
};

/// Fourier interpolation of the periodized cdf (and of the pdf as is) over
/// x_1..x_N, resampled at K Chebyshev points on [x_N, x_0] and refit.
DistributionApproximation build_interpolants(const XGrid& xs, std::span<const double> cdf_values,
                                             std::span<const double> pdf_values, std::size_t K);

/// Single-trace variant; `kind` decides whether φ is subtracted.
ChebyshevInterpolant build_interpolant(const XGrid& xs, std::span<const double> values, std::size_t K,
                                       InterpolantKind kind);

}  // namespace tw

#pragma once

#include <span>
#include <utility>

namespace lrdual {

/// y = coefficient * x^exponent, fitted by least squares on (ln x, ln y).
struct PowerLawFit {
    double coefficient = 1.0;
    double exponent = 0.0;
    double r_squared = 1.0;
    double max_fitted_x = 0.0;
};

struct Prediction {
    double value = 0.0;
    /// x is more than 10x beyond the largest fitted x.
    bool extrapolated = false;
};

using Point = std::pair<double, double>;

/// Throws DomainError for a non-positive coordinate and ValidationError when fewer than
/// two distinct x values are given (the regression is rank deficient).
PowerLawFit fit_power_law(std::span<const Point> points);

Prediction predict(const PowerLawFit& fit, double x);

/// (m_a - m_b) / |m_b|. Negative when fit_a has the steeper (more negative) exponent.
double slope_gap(const PowerLawFit& fit_a, const PowerLawFit& fit_b);

}  // namespace lrdual

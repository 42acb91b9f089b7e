#include "lrdual/scaling_fit.hpp"

#include <algorithm>
#include <cmath>

#include "lrdual/errors.hpp"

namespace lrdual {

PowerLawFit fit_power_law(std::span<const Point> points) {
    if (points.size() < 2) throw ValidationError("points", "need at least two points");
    double mean_x = 0.0;
    double mean_y = 0.0;
    double max_x = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw DomainError("power-law fit needs strictly positive, finite coordinates");
        mean_x += std::log(x);
        mean_y += std::log(y);
        max_x = std::max(max_x, x);
    }
    const double n = static_cast<double>(points.size());
    mean_x /= n;
    mean_y /= n;

    // Centered sums keep the normal equations well conditioned.
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mean_x;
        const double dy = std::log(y) - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw ValidationError("points", "need at least two distinct x values");

    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.coefficient = std::exp(mean_y - fit.exponent * mean_x);
    double sse = 0.0;
    for (const auto& [x, y] : points) {
        const double r = std::log(y) - (mean_y + fit.exponent * (std::log(x) - mean_x));
        sse += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    fit.max_fitted_x = max_x;
    return fit;
}

Prediction predict(const PowerLawFit& fit, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("prediction needs x > 0");
    return Prediction{fit.coefficient * std::pow(x, fit.exponent), x > 10.0 * fit.max_fitted_x};
}

double slope_gap(const PowerLawFit& fit_a, const PowerLawFit& fit_b) {
    if (fit_b.exponent == 0.0) throw DomainError("slope gap needs a non-zero baseline exponent");
    return (fit_a.exponent - fit_b.exponent) / std::abs(fit_b.exponent);
}

}  // namespace lrdual

#include "lrdual/quadratic.hpp"

#include <cmath>
#include <string>

#include "lrdual/errors.hpp"
#include "lrdual/random.hpp"

namespace lrdual {

void QuadraticProblem::validate() const {
    if (dim == 0) throw ValidationError("dim", "must be positive");
    if (curvature.size() != dim) throw ValidationError("curvature", "needs one entry per coordinate");
    for (double mu : curvature)
        if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("curvature", "every mu must be positive");
    if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) throw ValidationError("noise_var", "must be >= 0");
    if (!(theta0_dist_sq >= 0.0) || !std::isfinite(theta0_dist_sq))
        throw ValidationError("theta0_dist_sq", "must be >= 0");
    if (batch_size < 1) throw ValidationError("batch_size", "must be >= 1");
    if (!optimum.empty() && optimum.size() != dim) throw ValidationError("optimum", "needs one entry per coordinate");
}

std::vector<double> QuadraticProblem::optimum_or_zero() const {
    return optimum.empty() ? std::vector<double>(dim, 0.0) : optimum;
}

std::vector<double> QuadraticProblem::initial_point() const {
    std::vector<double> theta = optimum_or_zero();
    const double offset = std::sqrt(theta0_dist_sq / static_cast<double>(dim));
    for (double& x : theta) x += offset;
    return theta;
}

void QuadraticProblem::check_stable(std::span<const double> lrs) const {
    double mu_max = 0.0;
    for (double mu : curvature) mu_max = std::max(mu_max, mu);
    for (std::size_t t = 0; t < lrs.size(); ++t)
        if (!(lrs[t] * mu_max < 2.0))
            throw DomainError("unstable at step " + std::to_string(t + 1) + ": lr * mu = " +
                              std::to_string(lrs[t] * mu_max) + " >= 2");
}

double QuadraticProblem::tpp_analog(std::int64_t steps) const {
    return static_cast<double>(steps) * static_cast<double>(batch_size) / static_cast<double>(dim);
}

GapBound sgd_gap_bound(double lr, double mu, double noise_var, double d0, std::int64_t t) {
    const double rate = lr * mu;
    if (!(rate > 0.0 && rate < 1.0)) throw DomainError("gap bound requires 0 < lr * mu < 1");
    if (t < 0) throw DomainError("step count must be >= 0");
    GapBound out;
    out.bias = std::pow(1.0 - rate, static_cast<double>(t)) * d0;
    out.variance = lr * noise_var;
    out.total = out.bias + out.variance;
    return out;
}

std::vector<double> sgd_quadratic_expected_gap(std::span<const double> lrs, double mu, double noise_var_eff,
                                               double d0) {
    if (!(mu > 0.0)) throw DomainError("curvature must be positive");
    if (!(noise_var_eff >= 0.0)) throw DomainError("noise variance must be >= 0");
    std::vector<double> gaps;
    gaps.reserve(lrs.size() + 1);
    gaps.push_back(d0);
    for (std::size_t t = 0; t < lrs.size(); ++t) {
        const double lr = lrs[t];
        if (!(lr >= 0.0 && lr * mu < 2.0))
            throw DomainError("unstable at step " + std::to_string(t + 1) + ": lr * mu must lie in [0, 2)");
        const double contraction = (1.0 - lr * mu) * (1.0 - lr * mu);
        gaps.push_back(contraction * gaps.back() + lr * lr * noise_var_eff);
    }
    return gaps;
}

MonteCarloGap sgd_monte_carlo_gap(std::span<const double> lrs, double mu, double noise_var_eff, double d0,
                                  std::int64_t trials, std::uint64_t seed) {
    if (trials < 2) throw ValidationError("trials", "need at least 2 trials for a standard error");
    for (std::size_t t = 0; t < lrs.size(); ++t)
        if (!(lrs[t] >= 0.0 && lrs[t] * mu < 2.0))
            throw DomainError("unstable at step " + std::to_string(t + 1) + ": lr * mu must lie in [0, 2)");
    const CounterRng rng(seed);
    const double noise_std = std::sqrt(noise_var_eff);
    // Welford running moments.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        double dist = std::sqrt(d0);
        for (std::size_t t = 0; t < lrs.size(); ++t) {
            const double grad = mu * dist + noise_std * rng.normal(static_cast<std::uint64_t>(trial), t, 0);
            dist -= lrs[t] * grad;
        }
        const double gap = dist * dist;
        const double delta = gap - mean;
        mean += delta / static_cast<double>(trial + 1);
        m2 += delta * (gap - mean);
    }
    const double n = static_cast<double>(trials);
    const double var = m2 / (n - 1.0);
    return MonteCarloGap{mean, std::sqrt(var / n), trials};
}

}  // namespace lrdual

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lrdual {

/// f(theta) = 1/2 sum_k mu_k (theta_k - theta*_k)^2 with additive Gaussian gradient
/// noise of variance noise_var / batch_size per coordinate.
struct QuadraticProblem {
    std::size_t dim = 1;
    std::vector<double> curvature{1.0};  // one mu per coordinate
    double noise_var = 0.0;
    double theta0_dist_sq = 1.0;
    std::int64_t batch_size = 1;
    std::vector<double> optimum;  // empty means the origin

    void validate() const;
    double effective_noise_var() const { return noise_var / static_cast<double>(batch_size); }
    std::vector<double> optimum_or_zero() const;
    /// theta* shifted by sqrt(d0 / dim) along every coordinate.
    std::vector<double> initial_point() const;
    /// Throws DomainError naming the first step with lr * mu >= 2.
    void check_stable(std::span<const double> lrs) const;
    /// Analogue of tokens-per-parameter: steps * batch / dim.
    double tpp_analog(std::int64_t steps) const;
};

struct GapBound {
    double bias = 0.0;
    double variance = 0.0;
    double total = 0.0;
};

/// (1 - lr*mu)^t d0 + lr * sigma^2 for constant-LR SGD. Requires 0 < lr*mu < 1.
GapBound sgd_gap_bound(double lr, double mu, double noise_var, double d0, std::int64_t t);

/// Exact E[(theta_t - theta*)^2] for 1-D SGD: e_t = (1 - lr_t mu)^2 e_{t-1} + lr_t^2 sigma_eff^2.
/// Returns e_0 = d0 followed by e_1..e_T.
std::vector<double> sgd_quadratic_expected_gap(std::span<const double> lrs, double mu, double noise_var_eff,
                                               double d0);

struct MonteCarloGap {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
};

/// Simulates 1-D SGD `trials` times and averages the final squared distance.
MonteCarloGap sgd_monte_carlo_gap(std::span<const double> lrs, double mu, double noise_var_eff, double d0,
                                  std::int64_t trials, std::uint64_t seed);

}  // namespace lrdual

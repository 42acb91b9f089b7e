#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lrdual/dual.hpp"
#include "lrdual/quadratic.hpp"
#include "lrdual/schedules.hpp"

namespace lrdual {

struct AdamWConfig {
    double weight_decay = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.95;
    double epsilon = 1e-8;

    void validate() const;
};

struct AdamWState {
    std::vector<double> theta;
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t step = 0;
    /// m_hat / (sqrt(v_hat) + eps) of the most recent step.
    std::vector<double> direction;

    static AdamWState initial(std::vector<double> theta0);
};

/// theta <- (1 - lr*wd) * theta - lr * m_hat / (sqrt(v_hat) + eps), with bias-corrected moments.
/// Throws DivergenceError on a non-finite gradient and DomainError on a negative LR.
AdamWState adamw_step(const AdamWState& state, std::span<const double> gradient, double lr,
                      const AdamWConfig& config);

/**
 * Recorded AdamW run. `updates` uses the EMA indexing: updates[0] is theta_0,
 * updates[t] = -direction_t / wd is the input blended in at step t. It is left
 * empty when wd == 0 since the EMA view is undefined there.
 */
struct AdamWTrace {
    std::vector<std::vector<double>> thetas;
    std::vector<std::vector<double>> updates;
    std::vector<double> lrs;
    double weight_decay = 0.0;

    /// [1, lr_1 * wd, ..., lr_T * wd].
    SmoothingSequence smoothing() const;
};

using GradientFn = std::function<std::vector<double>(std::span<const double> theta, std::int64_t step)>;

AdamWTrace train(const GradientFn& gradient, std::vector<double> theta0, std::span<const double> lrs,
                 const AdamWConfig& config);

/// Trains on a noisy quadratic; noise for (step, coordinate) comes from a keyed counter RNG.
AdamWTrace train(const QuadraticProblem& problem, const ScheduleSpec& spec, const AdamWConfig& config,
                 std::uint64_t seed);

struct Reconstruction {
    std::vector<double> theta_hat;
    double relative_error = 0.0;
    std::size_t terms_used = 0;
};

/**
 * theta_hat_T = sum_i c_{T,i} x_i, compared with the recorded theta_T.
 * With min_mass < 1, only the largest coefficients covering that much mass
 * are summed.
 */
Reconstruction reconstruct_from_updates(const AdamWTrace& trace, const DualCoefficients& coeffs,
                                        double min_mass = 1.0);

}  // namespace lrdual

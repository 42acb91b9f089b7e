#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lrdual/dual.hpp"

namespace lrdual {

/// Desired final-step coefficients c_{T,1..T}: non-negative, summing to 1 within 1e-12.
class TargetProfile {
public:
    explicit TargetProfile(std::vector<double> weights);
    static TargetProfile from_coefficients(const DualCoefficients& coeffs);

    std::size_t size() const noexcept { return weights_.size(); }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    std::vector<double> weights_;
};

/// Smoothing values that reproduce a target profile, and the base LRs that yield them.
struct DesignedSchedule {
    SmoothingSequence alphas;
    /// base_lrs[k] drives schedule step k + 1, i.e. alpha index k + 2: alpha / (rho * lambda).
    std::vector<double> base_lrs;
};

/**
 * Linear warmup to `peak_lr` at step W, then eta_{i+1} = eta_i / (1 + eta_i * lambda).
 * Every post-warmup update then carries the same weight in the final parameters,
 * at every step.
 */
std::vector<double> rational_schedule(double peak_lr, double weight_decay, std::int64_t total_steps,
                                      std::int64_t warmup_steps);

/// c_{t,i+1} / c_{t,i} = alpha_{i+1} / ((1 - alpha_{i+1}) * alpha_i), independent of t.
double coefficient_ratio(double alpha_i, double alpha_next);

/// Backward recursion alpha_T = c_T, alpha_i = c_i / prod_{j>i}(1 - alpha_j).
/// Throws InfeasibleError naming the first (1-based) index whose alpha leaves [0, 1].
DesignedSchedule schedule_from_coefficients(const TargetProfile& target, double weight_decay, double mup_factor);

/// Same recursion on log-space coefficients; keeps precision for weights below 1e-300.
DesignedSchedule schedule_from_coefficients(const DualCoefficients& target, double weight_decay,
                                            double mup_factor);

}  // namespace lrdual

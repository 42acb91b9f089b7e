#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lrdual/schedules.hpp"

namespace lrdual {

/**
 * EMA smoothing values alpha_1..alpha_t with alpha_1 = 1, so that the first
 * input (the initial weights) seeds the average. Entries after the first lie
 * in [0, 1]; alpha_j = 1 wipes out everything before step j.
 */
class SmoothingSequence {
public:
    /// Validates; throws DomainError on a bad entry and ValidationError on an empty sequence.
    explicit SmoothingSequence(std::vector<double> alphas);

    /// [1, lr_1 * wd, ..., lr_T * wd]: schedule step s becomes index s + 1.
    static SmoothingSequence from_schedule(const ScheduleSpec& spec, double weight_decay);
    /// Prepends the alpha_1 = 1 pseudo-input to per-step smoothing values.
    static SmoothingSequence from_step_alphas(std::span<const double> step_alphas);

    std::size_t size() const noexcept { return alphas_.size(); }
    double operator[](std::size_t i) const { return alphas_[i]; }  // 0-based
    std::span<const double> values() const noexcept { return alphas_; }
    SmoothingSequence prefix(std::size_t length) const;

private:
    std::vector<double> alphas_;
};

/// Convex-combination weights c_{t,i}, i = 1..t, stored as natural logs (-inf for exact zeros).
struct DualCoefficients {
    std::size_t t = 0;
    std::vector<double> log_c;

    /// exp(log_c), flushed to 0 below exp(-745).
    std::vector<double> c() const;
    double sum() const;
};

/// Coefficients of every input in the final EMA value y_t, t = alphas.size().
DualCoefficients coefficients_at(const SmoothingSequence& alphas);

/// Row t = 1..n of the lower-triangular coefficient table. O(n^2) total.
std::vector<DualCoefficients> coefficient_matrix(const SmoothingSequence& alphas);

/// Streams rows of the coefficient table in order without holding them all;
/// each row is identical to what coefficient_matrix produces.
void for_each_coefficient_row(const SmoothingSequence& alphas,
                              const std::function<void(const DualCoefficients&)>& visit);

/// c_{t,1} = prod_{j=2..t} (1 - alpha_j), computed in log space.
double init_coefficient(const SmoothingSequence& alphas);
double log_init_coefficient(const SmoothingSequence& alphas);

/// (1 - avg_alpha)^(t-1).
double init_coefficient_approx(double avg_alpha, std::size_t t);

/// Mean of alpha_2..alpha_t (0 when t = 1).
double average_alpha(const SmoothingSequence& alphas);

/// Averaging window 1 / (lr * weight_decay). Throws DomainError; for weight_decay == 0
/// the message states the timescale is infinite.
double timescale(double lr, double weight_decay);

}  // namespace lrdual

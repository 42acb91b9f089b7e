#include "lrdual/designer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "compensated.hpp"
#include "lrdual/errors.hpp"

namespace lrdual {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Allowed deviation of a log-space profile's total mass from 1.
constexpr double kMassTolerance = 1e-9;

}  // namespace

TargetProfile::TargetProfile(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw ValidationError("target", "profile must be non-empty");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double w = weights_[i];
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ValidationError("target", "weight " + std::to_string(i + 1) + " must be finite and >= 0");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ValidationError("target", "weights sum to " + std::to_string(sum) + ", expected 1");
}

TargetProfile TargetProfile::from_coefficients(const DualCoefficients& coeffs) { return TargetProfile(coeffs.c()); }

std::vector<double> rational_schedule(double peak_lr, double weight_decay, std::int64_t total_steps,
                                      std::int64_t warmup_steps) {
    if (!(peak_lr > 0.0) || !std::isfinite(peak_lr)) throw ValidationError("peak_lr", "must be positive");
    if (weight_decay == 0.0)
        throw DomainError("rational schedule with weight decay 0 degenerates to a constant schedule");
    if (!(weight_decay > 0.0) || !std::isfinite(weight_decay))
        throw ValidationError("weight_decay", "must be positive");
    if (total_steps < 1) throw ValidationError("total_steps", "must be >= 1");
    if (warmup_steps < 0 || warmup_steps >= total_steps)
        throw ValidationError("warmup_steps", "must satisfy 0 <= W < T");

    std::vector<double> lrs(static_cast<std::size_t>(total_steps));
    const std::int64_t anchor = std::max<std::int64_t>(warmup_steps, 1);
    for (std::int64_t t = 1; t < anchor; ++t)
        lrs[static_cast<std::size_t>(t - 1)] =
            peak_lr * (static_cast<double>(t) / static_cast<double>(warmup_steps));
    double eta = peak_lr;
    for (std::int64_t t = anchor; t <= total_steps; ++t) {
        lrs[static_cast<std::size_t>(t - 1)] = eta;
        eta = eta / (1.0 + eta * weight_decay);
    }
    return lrs;
}

double coefficient_ratio(double alpha_i, double alpha_next) {
    if (!(alpha_i > 0.0 && alpha_i <= 1.0)) throw DomainError("coefficient ratio needs alpha_i in (0, 1]");
    if (!(alpha_next > 0.0 && alpha_next < 1.0))
        throw DomainError("coefficient ratio needs alpha_{i+1} in (0, 1)");
    return alpha_next / ((1.0 - alpha_next) * alpha_i);
}

namespace {

void check_design_args(double weight_decay, double mup_factor, std::size_t n) {
    if (!(weight_decay > 0.0)) throw DomainError("designing a schedule needs weight decay > 0");
    if (!(mup_factor > 0.0)) throw ValidationError("mup_factor", "must be positive");
    if (n == 0) throw ValidationError("target", "profile must be non-empty");
}

// Throws for a profile whose total mass is not 1. The backward recursion
// alpha_k = c_k / (1 - sum_{i>k} c_i) first leaves [0, 1] at the highest k with
// sum_{i>=k} c_i > 1; if no such k exists the mismatch lands on alpha_1.
void check_mass(const std::vector<double>& log_c) {
    double total = 0.0;
    for (double v : log_c) total += std::exp(v);
    if (std::abs(total - 1.0) <= kMassTolerance) return;
    double suffix = 0.0;
    for (std::size_t k = log_c.size(); k-- > 1;) {
        suffix += std::exp(log_c[k]);
        if (suffix > 1.0 + kMassTolerance)
            throw InfeasibleError(k + 1, "requires smoothing above 1 (weights from here on sum to " +
                                             std::to_string(suffix) + ")");
    }
    throw InfeasibleError(1, "initial weight " + std::to_string(std::exp(log_c[0])) +
                                 " differs from the surviving mass; weights sum to " + std::to_string(total));
}

DesignedSchedule finish(std::vector<double> alphas, double weight_decay, double mup_factor) {
    alphas[0] = 1.0;
    std::vector<double> base_lrs;
    base_lrs.reserve(alphas.size() - 1);
    for (std::size_t k = 1; k < alphas.size(); ++k) base_lrs.push_back(alphas[k] / (mup_factor * weight_decay));
    return DesignedSchedule{SmoothingSequence(std::move(alphas)), std::move(base_lrs)};
}

}  // namespace

// With total mass 1, prod_{j>k}(1 - alpha_j) equals the prefix mass sum_{i<=k} c_i, so
// alpha_k = c_k / sum_{i<=k} c_i. Prefix sums avoid the cancellation of the backward form.
DesignedSchedule schedule_from_coefficients(const DualCoefficients& target, double weight_decay,
                                            double mup_factor) {
    const std::size_t n = target.log_c.size();
    check_design_args(weight_decay, mup_factor, n);
    for (std::size_t k = 0; k < n; ++k)
        if (std::isnan(target.log_c[k]) || target.log_c[k] > 0.0)
            throw InfeasibleError(k + 1, "coefficient must lie in [0, 1]");
    check_mass(target.log_c);

    std::vector<double> alphas(n, 0.0);
    double log_prefix = kNegInf;
    for (std::size_t k = 0; k < n; ++k) {
        const double lc = target.log_c[k];
        if (lc == kNegInf) continue;
        if (log_prefix == kNegInf) {
            log_prefix = lc;
            alphas[k] = 1.0;
            continue;
        }
        const double hi = std::max(log_prefix, lc);
        log_prefix = hi + std::log(std::exp(log_prefix - hi) + std::exp(lc - hi));
        alphas[k] = std::min(1.0, std::exp(lc - log_prefix));
    }
    return finish(std::move(alphas), weight_decay, mup_factor);
}

DesignedSchedule schedule_from_coefficients(const TargetProfile& target, double weight_decay, double mup_factor) {
    const auto& c = target.weights();
    check_design_args(weight_decay, mup_factor, c.size());
    std::vector<double> alphas(c.size(), 0.0);
    detail::CompensatedSum prefix;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0.0) continue;
        prefix.add(c[k]);
        alphas[k] = std::min(1.0, c[k] / prefix.value());
    }
    return finish(std::move(alphas), weight_decay, mup_factor);
}

}  // namespace lrdual

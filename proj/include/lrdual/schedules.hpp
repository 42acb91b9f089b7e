#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lrdual {

enum class ScheduleKind { Constant, Linear, Cosine, InvSqrt, Step, WSD, Cyclic, Rational, Piecewise };

std::string_view to_string(ScheduleKind kind);
/// Case-insensitive; accepts "invsqrt"/"inv_sqrt", "wsd", ... Throws ValidationError.
ScheduleKind parse_schedule_kind(std::string_view name);

/// Shape-specific knobs. Only the fields relevant to `ScheduleSpec::kind` are read.
struct KindParams {
    double milestone_fraction = 0.9;   // Step: drop after ceil(milestone_fraction * T)
    double drop_fraction = 0.001;      // Step: post-milestone LR as a fraction of peak
    double cooldown_fraction = 0.225;  // WSD: cooldown spans the final ceil(cooldown_fraction * T) steps
    std::int64_t period_steps = 0;     // Cyclic: full triangle period
    double weight_decay = 0.0;         // Rational: lambda used in the recurrence
    std::vector<double> multipliers;   // Piecewise: one multiplier in [0,1] per post-warmup step
};

/**
 * Complete description of a learning-rate schedule.
 *
 * Steps are 1-based. Warmup is linear, lr(t) = peak * t / W for t <= W, so the
 * peak is reached exactly at t = W (or at t = 1 when W = 0). The decay phase
 * covers (W, T] with progress s = (t - W) / (T - W).
 */
struct ScheduleSpec {
    ScheduleKind kind = ScheduleKind::Linear;
    std::int64_t total_steps = 1;
    std::int64_t warmup_steps = 0;
    double peak_base_lr = 1.0;
    double mup_factor = 1.0;
    double decay_ratio = 0.0;
    KindParams params;

    /// Throws ValidationError naming the offending field.
    void validate() const;
    /// rho * base peak.
    double peak_lr() const;
};

/// Linear-warmup helper: the number of warmup steps for a fraction of T, rounded down
/// (10% of 11752 steps gives 1175).
std::int64_t warmup_steps_for(std::int64_t total_steps, double warmup_fraction);

double mup_scale(double peak_base_lr, double mup_factor);

double lr_at(const ScheduleSpec& spec, std::int64_t step);
std::vector<double> lr_curve(const ScheduleSpec& spec);

/// alpha_t = lr_t * weight_decay; throws DomainError if any alpha_t >= 1.
std::vector<double> alpha_curve(const ScheduleSpec& spec, double weight_decay);

/// Mean of alpha_curve over steps 2..T. Requires T >= 2.
double average_alpha(const ScheduleSpec& spec, double weight_decay);

}  // namespace lrdual

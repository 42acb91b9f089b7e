#include "lrdual/schedules.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "compensated.hpp"
#include "lrdual/errors.hpp"

namespace lrdual {

namespace {

std::string lower(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '_' || c == '-') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

// First step of the decay phase's reference point: W, or 1 when there is no warmup.
std::int64_t anchor_step(const ScheduleSpec& spec) { return std::max<std::int64_t>(spec.warmup_steps, 1); }

// ceil(fraction * T), tolerant of products like 0.225 * 1000 landing a hair above an integer.
std::int64_t ceil_fraction(double fraction, std::int64_t total) {
    return static_cast<std::int64_t>(std::ceil(fraction * static_cast<double>(total) - 1e-9));
}

std::int64_t wsd_cooldown_steps(const ScheduleSpec& spec) {
    return ceil_fraction(spec.params.cooldown_fraction, spec.total_steps);
}

std::int64_t step_milestone(const ScheduleSpec& spec) {
    return ceil_fraction(spec.params.milestone_fraction, spec.total_steps);
}

// Multiplier in [0,1] applied to the peak for t > W.
double decay_shape(const ScheduleSpec& spec, std::int64_t t) {
    const std::int64_t anchor = anchor_step(spec);
    const std::int64_t span = spec.total_steps - anchor;
    const double r = spec.decay_ratio;
    const double s = span > 0 ? static_cast<double>(t - anchor) / static_cast<double>(span) : 0.0;

    switch (spec.kind) {
        case ScheduleKind::Constant:
            return 1.0;
        case ScheduleKind::Linear:
            return r + (1.0 - r) * (1.0 - s);
        case ScheduleKind::Cosine:
            return r + (1.0 - r) * (1.0 + std::cos(std::numbers::pi * s)) / 2.0;
        case ScheduleKind::InvSqrt:
            return std::sqrt(static_cast<double>(anchor) / static_cast<double>(t));
        case ScheduleKind::Step:
            return t <= step_milestone(spec) ? 1.0 : spec.params.drop_fraction;
        case ScheduleKind::WSD: {
            const std::int64_t cooldown = wsd_cooldown_steps(spec);
            const std::int64_t stable_end = spec.total_steps - cooldown;
            if (t <= stable_end) return 1.0;
            const double remaining =
                static_cast<double>(spec.total_steps - t) / static_cast<double>(cooldown);
            return r + (1.0 - r) * remaining;
        }
        case ScheduleKind::Cyclic: {
            const std::int64_t period = spec.params.period_steps;
            const double phase =
                static_cast<double>((t - anchor) % period) / static_cast<double>(period);
            return r + (1.0 - r) * std::abs(1.0 - 2.0 * phase);
        }
        case ScheduleKind::Rational: {
            // Closed form of eta_{i+1} = eta_i / (1 + eta_i * lambda) started at eta_anchor = peak.
            const double step_rate = spec.peak_lr() * spec.params.weight_decay;
            return 1.0 / (1.0 + step_rate * static_cast<double>(t - anchor));
        }
        case ScheduleKind::Piecewise:
            return spec.params.multipliers[static_cast<std::size_t>(t - anchor - 1)];
    }
    return 1.0;
}

}  // namespace

std::string_view to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::Constant: return "constant";
        case ScheduleKind::Linear: return "linear";
        case ScheduleKind::Cosine: return "cosine";
        case ScheduleKind::InvSqrt: return "invsqrt";
        case ScheduleKind::Step: return "step";
        case ScheduleKind::WSD: return "wsd";
        case ScheduleKind::Cyclic: return "cyclic";
        case ScheduleKind::Rational: return "rational";
        case ScheduleKind::Piecewise: return "piecewise";
    }
    return "?";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
    const std::string key = lower(name);
    for (auto kind : {ScheduleKind::Constant, ScheduleKind::Linear, ScheduleKind::Cosine,
                      ScheduleKind::InvSqrt, ScheduleKind::Step, ScheduleKind::WSD,
                      ScheduleKind::Cyclic, ScheduleKind::Rational, ScheduleKind::Piecewise}) {
        if (key == to_string(kind)) return kind;
    }
    throw ValidationError("kind", "unknown schedule kind '" + std::string(name) + "'");
}

void ScheduleSpec::validate() const {
    if (total_steps < 1) throw ValidationError("total_steps", "must be >= 1");
    if (warmup_steps < 0 || warmup_steps >= total_steps)
        throw ValidationError("warmup_steps", "must satisfy 0 <= W < T");
    if (!(peak_base_lr > 0.0) || !std::isfinite(peak_base_lr))
        throw ValidationError("peak_base_lr", "must be positive and finite");
    if (!(mup_factor > 0.0 && mup_factor <= 1.0))
        throw ValidationError("mup_factor", "must lie in (0, 1]");
    if (!(decay_ratio >= 0.0 && decay_ratio <= 1.0))
        throw ValidationError("decay_ratio", "must lie in [0, 1]");

    switch (kind) {
        case ScheduleKind::Step:
            if (!(params.milestone_fraction > 0.0 && params.milestone_fraction <= 1.0))
                throw ValidationError("milestone_fraction", "must lie in (0, 1]");
            if (!(params.drop_fraction >= 0.0 && params.drop_fraction <= 1.0))
                throw ValidationError("drop_fraction", "must lie in [0, 1]");
            break;
        case ScheduleKind::WSD: {
            if (!(params.cooldown_fraction >= 0.0 && params.cooldown_fraction <= 1.0))
                throw ValidationError("cooldown_fraction", "must lie in [0, 1]");
            const std::int64_t cooldown = wsd_cooldown_steps(*this);
            if (cooldown > 0 && total_steps - cooldown < anchor_step(*this))
                throw ValidationError("cooldown_fraction", "cooldown overlaps the warmup");
            break;
        }
        case ScheduleKind::Cyclic:
            if (params.period_steps < 2) throw ValidationError("period_steps", "must be >= 2");
            break;
        case ScheduleKind::Rational:
            if (!(params.weight_decay > 0.0) || !std::isfinite(params.weight_decay))
                throw ValidationError("weight_decay", "rational schedule needs a positive weight decay");
            break;
        case ScheduleKind::Piecewise: {
            const auto expected = static_cast<std::size_t>(total_steps - anchor_step(*this));
            if (params.multipliers.size() != expected)
                throw ValidationError("multipliers", "expected " + std::to_string(expected) +
                                                         " post-warmup multipliers, got " +
                                                         std::to_string(params.multipliers.size()));
            for (double m : params.multipliers)
                if (!(m >= 0.0 && m <= 1.0)) throw ValidationError("multipliers", "entries must lie in [0, 1]");
            break;
        }
        default:
            break;
    }
}

double ScheduleSpec::peak_lr() const { return mup_scale(peak_base_lr, mup_factor); }

std::int64_t warmup_steps_for(std::int64_t total_steps, double warmup_fraction) {
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
        throw ValidationError("warmup_fraction", "must lie in [0, 1)");
    return static_cast<std::int64_t>(std::floor(warmup_fraction * static_cast<double>(total_steps)));
}

double mup_scale(double peak_base_lr, double mup_factor) {
    if (!(peak_base_lr > 0.0)) throw ValidationError("peak_base_lr", "must be positive");
    if (!(mup_factor > 0.0 && mup_factor <= 1.0)) throw ValidationError("mup_factor", "must lie in (0, 1]");
    return mup_factor * peak_base_lr;
}

namespace {

double lr_unchecked(const ScheduleSpec& spec, double peak, std::int64_t step) {
    if (step <= spec.warmup_steps)
        return peak * (static_cast<double>(step) / static_cast<double>(spec.warmup_steps));
    if (step == anchor_step(spec)) return peak;
    return peak * decay_shape(spec, step);
}

}  // namespace

double lr_at(const ScheduleSpec& spec, std::int64_t step) {
    spec.validate();
    if (step < 1 || step > spec.total_steps)
        throw RangeError("step", std::to_string(step) + " outside 1.." + std::to_string(spec.total_steps));
    return lr_unchecked(spec, spec.peak_lr(), step);
}

std::vector<double> lr_curve(const ScheduleSpec& spec) {
    spec.validate();
    const double peak = spec.peak_lr();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(spec.total_steps));
    for (std::int64_t t = 1; t <= spec.total_steps; ++t) out.push_back(lr_unchecked(spec, peak, t));
    return out;
}

std::vector<double> alpha_curve(const ScheduleSpec& spec, double weight_decay) {
    if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay))
        throw ValidationError("weight_decay", "must be non-negative and finite");
    std::vector<double> alphas = lr_curve(spec);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        alphas[i] *= weight_decay;
        if (alphas[i] >= 1.0)
            throw DomainError("alpha at step " + std::to_string(i + 1) + " is " + std::to_string(alphas[i]) +
                              " >= 1; lr * weight_decay too large for an EMA");
    }
    return alphas;
}

double average_alpha(const ScheduleSpec& spec, double weight_decay) {
    if (spec.total_steps < 2) throw ValidationError("total_steps", "average alpha needs T >= 2");
    const std::vector<double> alphas = alpha_curve(spec, weight_decay);
    detail::CompensatedSum sum;
    for (std::size_t i = 1; i < alphas.size(); ++i) sum.add(alphas[i]);
    return sum.value() / static_cast<double>(alphas.size() - 1);
}

}  // namespace lrdual

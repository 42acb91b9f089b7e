#include "lrdual/adamw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lrdual/errors.hpp"
#include "lrdual/random.hpp"

namespace lrdual {

void AdamWConfig::validate() const {
    if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) throw ValidationError("weight_decay", "must be >= 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ValidationError("beta1", "must lie in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ValidationError("beta2", "must lie in [0, 1)");
    if (!(epsilon > 0.0)) throw ValidationError("epsilon", "must be positive");
}

AdamWState AdamWState::initial(std::vector<double> theta0) {
    AdamWState state;
    const std::size_t n = theta0.size();
    state.theta = std::move(theta0);
    state.m.assign(n, 0.0);
    state.v.assign(n, 0.0);
    state.direction.assign(n, 0.0);
    return state;
}

AdamWState adamw_step(const AdamWState& state, std::span<const double> gradient, double lr,
                      const AdamWConfig& config) {
    const std::int64_t step = state.step + 1;
    if (gradient.size() != state.theta.size()) throw ValidationError("gradient", "dimension mismatch");
    if (!(lr >= 0.0)) throw DomainError("learning rate must be >= 0 at step " + std::to_string(step));
    for (double g : gradient)
        if (!std::isfinite(g)) throw DivergenceError(static_cast<std::size_t>(step), "non-finite gradient");

    AdamWState next = state;
    next.step = step;
    const double m_correction = 1.0 - std::pow(config.beta1, static_cast<double>(step));
    const double v_correction = 1.0 - std::pow(config.beta2, static_cast<double>(step));
    const double decay = 1.0 - lr * config.weight_decay;
    for (std::size_t k = 0; k < gradient.size(); ++k) {
        const double g = gradient[k];
        next.m[k] = config.beta1 * state.m[k] + (1.0 - config.beta1) * g;
        next.v[k] = config.beta2 * state.v[k] + (1.0 - config.beta2) * g * g;
        const double m_hat = next.m[k] / m_correction;
        const double v_hat = next.v[k] / v_correction;
        next.direction[k] = m_hat / (std::sqrt(v_hat) + config.epsilon);
        next.theta[k] = decay * state.theta[k] - lr * next.direction[k];
    }
    return next;
}

SmoothingSequence AdamWTrace::smoothing() const {
    std::vector<double> alphas(lrs.size());
    for (std::size_t t = 0; t < lrs.size(); ++t) alphas[t] = lrs[t] * weight_decay;
    return SmoothingSequence::from_step_alphas(alphas);
}

AdamWTrace train(const GradientFn& gradient, std::vector<double> theta0, std::span<const double> lrs,
                 const AdamWConfig& config) {
    config.validate();
    AdamWTrace trace;
    trace.weight_decay = config.weight_decay;
    trace.lrs.assign(lrs.begin(), lrs.end());
    trace.thetas.reserve(lrs.size() + 1);
    const bool record_updates = config.weight_decay > 0.0;
    if (record_updates) {
        trace.updates.reserve(lrs.size() + 1);
        trace.updates.push_back(theta0);
    }
    trace.thetas.push_back(theta0);

    AdamWState state = AdamWState::initial(std::move(theta0));
    for (std::size_t t = 0; t < lrs.size(); ++t) {
        const auto step = static_cast<std::int64_t>(t + 1);
        const std::vector<double> g = gradient(state.theta, step);
        state = adamw_step(state, g, lrs[t], config);
        for (double x : state.theta)
            if (!std::isfinite(x)) throw DivergenceError(t + 1, "parameters became non-finite");
        if (record_updates) {
            std::vector<double> update(state.direction.size());
            for (std::size_t k = 0; k < update.size(); ++k) update[k] = -state.direction[k] / config.weight_decay;
            trace.updates.push_back(std::move(update));
        }
        trace.thetas.push_back(state.theta);
    }
    return trace;
}

AdamWTrace train(const QuadraticProblem& problem, const ScheduleSpec& spec, const AdamWConfig& config,
                 std::uint64_t seed) {
    problem.validate();
    const std::vector<double> lrs = lr_curve(spec);
    const std::vector<double> optimum = problem.optimum_or_zero();
    const double noise_std = std::sqrt(problem.effective_noise_var());
    const CounterRng rng(seed);
    GradientFn gradient = [&](std::span<const double> theta, std::int64_t step) {
        std::vector<double> g(theta.size());
        for (std::size_t k = 0; k < theta.size(); ++k) {
            g[k] = problem.curvature[k] * (theta[k] - optimum[k]);
            if (noise_std > 0.0) g[k] += noise_std * rng.normal(0, static_cast<std::uint64_t>(step), k);
        }
        return g;
    };
    return train(gradient, problem.initial_point(), lrs, config);
}

Reconstruction reconstruct_from_updates(const AdamWTrace& trace, const DualCoefficients& coeffs, double min_mass) {
    if (!(trace.weight_decay > 0.0))
        throw DomainError("reconstruction needs weight decay > 0: updates are scaled by 1 / weight_decay");
    if (trace.updates.size() != trace.thetas.size())
        throw ValidationError("trace", "updates and parameters have inconsistent lengths");
    if (coeffs.log_c.size() != trace.updates.size())
        throw ValidationError("coeffs", "expected " + std::to_string(trace.updates.size()) + " coefficients, got " +
                                            std::to_string(coeffs.log_c.size()));
    if (!(min_mass > 0.0 && min_mass <= 1.0)) throw ValidationError("min_mass", "must lie in (0, 1]");

    const std::vector<double> c = coeffs.c();
    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t used = c.size();
    if (min_mass < 1.0) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return c[a] > c[b]; });
        double mass = 0.0;
        used = 0;
        while (used < order.size() && mass < min_mass) mass += c[order[used++]];
    }

    const std::vector<double>& theta_t = trace.thetas.back();
    Reconstruction out;
    out.theta_hat.assign(theta_t.size(), 0.0);
    out.terms_used = used;
    for (std::size_t n = 0; n < used; ++n) {
        const std::size_t i = order[n];
        if (c[i] == 0.0) continue;
        for (std::size_t k = 0; k < theta_t.size(); ++k) out.theta_hat[k] += c[i] * trace.updates[i][k];
    }
    double diff = 0.0;
    double norm = 0.0;
    for (std::size_t k = 0; k < theta_t.size(); ++k) {
        diff += (out.theta_hat[k] - theta_t[k]) * (out.theta_hat[k] - theta_t[k]);
        norm += theta_t[k] * theta_t[k];
    }
    out.relative_error = norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff);
    return out;
}

}  // namespace lrdual

#pragma once

#include <cstdint>
#include <vector>

#include "lrdual/adamw.hpp"
#include "lrdual/schedules.hpp"

namespace lrdual {

/**
 * Toy linear regression trained on K segments of fixed noisy batches, visited
 * in order. After training, the final weights are scored on every segment's
 * own batches, which exposes how strongly each stretch of training is
 * reflected in (and overfit by) the final parameters.
 */
struct OrderProbeConfig {
    std::int64_t segments = 8;
    std::int64_t dim = 16;
    std::int64_t batches_per_segment = 4;
    std::int64_t batch_size = 8;
    std::int64_t steps_per_segment = 250;
    double noise_std = 1.0;

    void validate() const;
    std::int64_t total_steps() const { return segments * steps_per_segment; }
};

struct OrderProbeResult {
    std::vector<double> segment_loss;
    std::size_t argmin() const;
};

/// `spec.total_steps` must equal `config.total_steps()`. Throws DivergenceError if training blows up.
OrderProbeResult order_fit_probe(const OrderProbeConfig& config, const ScheduleSpec& spec,
                                 const AdamWConfig& adamw, std::uint64_t seed);

/// Per-segment losses averaged over seeds derive(base_seed, 0..n_seeds-1).
OrderProbeResult averaged_order_probe(const OrderProbeConfig& config, const ScheduleSpec& spec,
                                      const AdamWConfig& adamw, std::uint64_t base_seed, std::int64_t n_seeds);

}  // namespace lrdual

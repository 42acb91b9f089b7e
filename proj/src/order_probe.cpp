#include "lrdual/order_probe.hpp"

#include <algorithm>

#include "lrdual/errors.hpp"
#include "lrdual/random.hpp"

namespace lrdual {

namespace {

enum Stream : std::uint64_t { kTruth = 1, kFeatures = 2, kNoise = 3 };

struct Dataset {
    std::size_t dim = 0;
    std::size_t samples_per_batch = 0;
    std::size_t batches_per_segment = 0;
    std::vector<double> features;  // [segment][batch][sample][dim], flattened
    std::vector<double> targets;   // [segment][batch][sample]

    std::size_t batch_offset(std::size_t segment, std::size_t batch) const {
        return (segment * batches_per_segment + batch) * samples_per_batch;
    }
};

Dataset make_dataset(const OrderProbeConfig& config, const CounterRng& rng) {
    Dataset data;
    data.dim = static_cast<std::size_t>(config.dim);
    data.samples_per_batch = static_cast<std::size_t>(config.batch_size);
    data.batches_per_segment = static_cast<std::size_t>(config.batches_per_segment);
    const std::size_t samples =
        static_cast<std::size_t>(config.segments) * data.batches_per_segment * data.samples_per_batch;

    std::vector<double> truth(data.dim);
    for (std::size_t k = 0; k < data.dim; ++k) truth[k] = rng.normal(kTruth, 0, k);

    data.features.resize(samples * data.dim);
    data.targets.resize(samples);
    for (std::size_t n = 0; n < samples; ++n) {
        double y = 0.0;
        for (std::size_t k = 0; k < data.dim; ++k) {
            const double x = rng.normal(kFeatures, n, k);
            data.features[n * data.dim + k] = x;
            y += truth[k] * x;
        }
        data.targets[n] = y + config.noise_std * rng.normal(kNoise, n, 0);
    }
    return data;
}

// Mean squared error over samples [first, first + count).
double mse(const Dataset& data, std::span<const double> w, std::size_t first, std::size_t count) {
    double total = 0.0;
    for (std::size_t n = first; n < first + count; ++n) {
        double pred = 0.0;
        for (std::size_t k = 0; k < data.dim; ++k) pred += data.features[n * data.dim + k] * w[k];
        const double r = pred - data.targets[n];
        total += r * r;
    }
    return total / static_cast<double>(count);
}

}  // namespace

void OrderProbeConfig::validate() const {
    if (segments < 4) throw ValidationError("segments", "order probe needs at least 4 segments");
    if (dim < 1) throw ValidationError("dim", "must be >= 1");
    if (batches_per_segment < 1) throw ValidationError("batches_per_segment", "must be >= 1");
    if (batch_size < 1) throw ValidationError("batch_size", "must be >= 1");
    if (steps_per_segment < 1) throw ValidationError("steps_per_segment", "must be >= 1");
    if (!(noise_std >= 0.0)) throw ValidationError("noise_std", "must be >= 0");
}

std::size_t OrderProbeResult::argmin() const {
    return static_cast<std::size_t>(std::min_element(segment_loss.begin(), segment_loss.end()) - segment_loss.begin());
}

OrderProbeResult order_fit_probe(const OrderProbeConfig& config, const ScheduleSpec& spec,
                                 const AdamWConfig& adamw, std::uint64_t seed) {
    config.validate();
    if (spec.total_steps != config.total_steps())
        throw ValidationError("total_steps", "schedule must span segments * steps_per_segment = " +
                                                 std::to_string(config.total_steps()) + " steps");
    const CounterRng rng(seed);
    const Dataset data = make_dataset(config, rng);
    const std::vector<double> lrs = lr_curve(spec);

    const auto steps_per_segment = static_cast<std::size_t>(config.steps_per_segment);
    GradientFn gradient = [&](std::span<const double> w, std::int64_t step) {
        const auto t = static_cast<std::size_t>(step - 1);
        const std::size_t segment = t / steps_per_segment;
        const std::size_t batch = (t % steps_per_segment) % data.batches_per_segment;
        const std::size_t first = data.batch_offset(segment, batch);
        std::vector<double> g(data.dim, 0.0);
        for (std::size_t n = first; n < first + data.samples_per_batch; ++n) {
            double r = -data.targets[n];
            for (std::size_t k = 0; k < data.dim; ++k) r += data.features[n * data.dim + k] * w[k];
            for (std::size_t k = 0; k < data.dim; ++k) g[k] += r * data.features[n * data.dim + k];
        }
        for (double& v : g) v /= static_cast<double>(data.samples_per_batch);
        return g;
    };

    const AdamWTrace trace = train(gradient, std::vector<double>(data.dim, 0.0), lrs, adamw);
    const std::vector<double>& w = trace.thetas.back();

    OrderProbeResult result;
    const std::size_t per_segment = data.batches_per_segment * data.samples_per_batch;
    for (std::size_t s = 0; s < static_cast<std::size_t>(config.segments); ++s)
        result.segment_loss.push_back(mse(data, w, data.batch_offset(s, 0), per_segment));
    return result;
}

OrderProbeResult averaged_order_probe(const OrderProbeConfig& config, const ScheduleSpec& spec,
                                      const AdamWConfig& adamw, std::uint64_t base_seed, std::int64_t n_seeds) {
    if (n_seeds < 1) throw ValidationError("seeds", "must be >= 1");
    OrderProbeResult mean;
    mean.segment_loss.assign(static_cast<std::size_t>(config.segments), 0.0);
    for (std::int64_t s = 0; s < n_seeds; ++s) {
        const auto one = order_fit_probe(config, spec, adamw, CounterRng::derive(base_seed, static_cast<std::uint64_t>(s)));
        for (std::size_t k = 0; k < one.segment_loss.size(); ++k) mean.segment_loss[k] += one.segment_loss[k];
    }
    for (double& v : mean.segment_loss) v /= static_cast<double>(n_seeds);
    return mean;
}

}  // namespace lrdual

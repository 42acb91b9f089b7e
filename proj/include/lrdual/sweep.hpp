#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lrdual/schedules.hpp"

namespace lrdual {

enum class SweepMode { Analytic, MonteCarlo };

SweepMode parse_sweep_mode(const std::string& name);

struct ScheduleChoice {
    ScheduleKind kind = ScheduleKind::Linear;
    double decay_ratio = 0.0;
    KindParams params;
};

/// Cartesian grid of 1-D noisy-quadratic SGD runs.
struct SweepGrid {
    std::vector<ScheduleChoice> schedules;
    std::vector<double> peak_lrs;
    std::vector<double> sigma2;
    std::vector<std::int64_t> steps;
    std::vector<std::int64_t> batch;
    double warmup_fraction = 0.1;
    double mu = 1.0;
    double d0 = 1.0;
    std::int64_t mc_trials = 1000;

    void validate() const;
    std::size_t cell_count() const;
};

struct SweepCell {
    std::size_t index = 0;
    ScheduleChoice schedule;
    double peak_lr = 0.0;
    double sigma2 = 0.0;
    std::int64_t steps = 0;
    std::int64_t batch = 1;
    std::uint64_t seed = 0;
    bool stable = true;
    double gap_analytic = 0.0;
    std::optional<double> gap_mc_mean;
    std::optional<double> gap_mc_stderr;
    double tpp_analog = 0.0;
};

/// Cell `index` of the grid, in the nesting order schedule > peak_lr > sigma2 > steps > batch.
SweepCell sweep_cell(const SweepGrid& grid, std::size_t index, std::uint64_t base_seed);

ScheduleSpec cell_schedule(const SweepGrid& grid, const SweepCell& cell);

/// Evaluates every cell, on up to `threads` workers. Output is ordered by cell index and
/// does not depend on `threads`.
std::vector<SweepCell> run_noise_sweep(const SweepGrid& grid, SweepMode mode, std::uint64_t base_seed,
                                       unsigned threads = 1);

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

}  // namespace lrdual

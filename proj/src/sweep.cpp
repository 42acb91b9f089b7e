#include "lrdual/sweep.hpp"

#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "lrdual/errors.hpp"
#include "lrdual/format.hpp"
#include "lrdual/quadratic.hpp"
#include "lrdual/random.hpp"

namespace lrdual {

SweepMode parse_sweep_mode(const std::string& name) {
    if (name == "analytic") return SweepMode::Analytic;
    if (name == "monte-carlo" || name == "mc") return SweepMode::MonteCarlo;
    throw ValidationError("mode", "expected 'analytic' or 'monte-carlo', got '" + name + "'");
}

void SweepGrid::validate() const {
    if (schedules.empty()) throw ValidationError("schedules", "grid axis is empty");
    if (peak_lrs.empty()) throw ValidationError("peak_lrs", "grid axis is empty");
    if (sigma2.empty()) throw ValidationError("sigma2", "grid axis is empty");
    if (steps.empty()) throw ValidationError("steps", "grid axis is empty");
    if (batch.empty()) throw ValidationError("batch", "grid axis is empty");
    for (double lr : peak_lrs)
        if (!(lr > 0.0)) throw ValidationError("peak_lrs", "entries must be positive");
    for (double s : sigma2)
        if (!(s >= 0.0)) throw ValidationError("sigma2", "entries must be >= 0");
    for (auto t : steps)
        if (t < 1) throw ValidationError("steps", "entries must be >= 1");
    for (auto b : batch)
        if (b < 1) throw ValidationError("batch", "entries must be >= 1");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
        throw ValidationError("warmup_fraction", "must lie in [0, 1)");
    if (!(mu > 0.0)) throw ValidationError("mu", "must be positive");
    if (!(d0 >= 0.0)) throw ValidationError("d0", "must be >= 0");
    if (mc_trials < 2) throw ValidationError("mc_trials", "must be >= 2");
}

std::size_t SweepGrid::cell_count() const {
    return schedules.size() * peak_lrs.size() * sigma2.size() * steps.size() * batch.size();
}

SweepCell sweep_cell(const SweepGrid& grid, std::size_t index, std::uint64_t base_seed) {
    SweepCell cell;
    cell.index = index;
    std::size_t rest = index;
    cell.batch = grid.batch[rest % grid.batch.size()];
    rest /= grid.batch.size();
    cell.steps = grid.steps[rest % grid.steps.size()];
    rest /= grid.steps.size();
    cell.sigma2 = grid.sigma2[rest % grid.sigma2.size()];
    rest /= grid.sigma2.size();
    cell.peak_lr = grid.peak_lrs[rest % grid.peak_lrs.size()];
    rest /= grid.peak_lrs.size();
    cell.schedule = grid.schedules.at(rest);
    cell.seed = CounterRng::derive(base_seed, index);
    cell.tpp_analog = static_cast<double>(cell.steps * cell.batch);
    return cell;
}

ScheduleSpec cell_schedule(const SweepGrid& grid, const SweepCell& cell) {
    ScheduleSpec spec;
    spec.kind = cell.schedule.kind;
    spec.total_steps = cell.steps;
    spec.warmup_steps = warmup_steps_for(cell.steps, grid.warmup_fraction);
    spec.peak_base_lr = cell.peak_lr;
    spec.mup_factor = 1.0;
    spec.decay_ratio = cell.schedule.decay_ratio;
    spec.params = cell.schedule.params;
    return spec;
}

namespace {

void evaluate(const SweepGrid& grid, SweepMode mode, SweepCell& cell) {
    const std::vector<double> lrs = lr_curve(cell_schedule(grid, cell));
    for (double lr : lrs)
        if (!(lr * grid.mu < 2.0)) {
            cell.stable = false;
            cell.gap_analytic = std::nan("");
            return;
        }
    const double noise = cell.sigma2 / static_cast<double>(cell.batch);
    cell.gap_analytic = sgd_quadratic_expected_gap(lrs, grid.mu, noise, grid.d0).back();
    if (mode == SweepMode::MonteCarlo) {
        const MonteCarloGap mc = sgd_monte_carlo_gap(lrs, grid.mu, noise, grid.d0, grid.mc_trials, cell.seed);
        cell.gap_mc_mean = mc.mean;
        cell.gap_mc_stderr = mc.std_error;
    }
}

}  // namespace

std::vector<SweepCell> run_noise_sweep(const SweepGrid& grid, SweepMode mode, std::uint64_t base_seed,
                                       unsigned threads) {
    grid.validate();
    std::vector<SweepCell> cells(grid.cell_count());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        cells[i] = sweep_cell(grid, i, base_seed);
        cell_schedule(grid, cells[i]).validate();
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) evaluate(grid, mode, cells[i]);
    };
    const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    return cells;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
    out << "schedule,peak_lr,decay_ratio,sigma2,batch,steps,gap_analytic,gap_mc_mean,gap_mc_stderr,stable\n";
    for (const auto& cell : cells) {
        out << to_string(cell.schedule.kind) << ',' << format_double(cell.peak_lr) << ','
            << format_double(cell.schedule.decay_ratio) << ',' << format_double(cell.sigma2) << ',' << cell.batch
            << ',' << cell.steps << ',' << format_double(cell.gap_analytic) << ','
            << (cell.gap_mc_mean ? format_double(*cell.gap_mc_mean) : "") << ','
            << (cell.gap_mc_stderr ? format_double(*cell.gap_mc_stderr) : "") << ',' << (cell.stable ? 1 : 0)
            << '\n';
    }
}

}  // namespace lrdual

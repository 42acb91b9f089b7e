#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include "lrdual/adamw.hpp"
#include "lrdual/designer.hpp"
#include "lrdual/dual.hpp"
#include "lrdual/errors.hpp"
#include "lrdual/format.hpp"
#include "lrdual/order_probe.hpp"
#include "lrdual/scaling_fit.hpp"
#include "lrdual/schedules.hpp"
#include "lrdual/svg.hpp"
#include "lrdual/sweep.hpp"

namespace lrdual::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kLogFloor = -745.0;

struct GlobalFlags {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool svg = false;
};

struct ScheduleFlags {
    std::string kind = "linear";
    std::int64_t steps = 1000;
    std::optional<std::int64_t> warmup;
    double warmup_frac = 0.1;
    double peak_base = 1.6e-2;
    double rho = 1.0;
    double ratio = 0.0;
    double milestone_frac = 0.9;
    double drop_frac = 0.001;
    double cooldown_frac = 0.225;
    std::int64_t period = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--kind", kind, "constant|linear|cosine|invsqrt|step|wsd|cyclic|rational");
        cmd->add_option("--steps", steps, "total optimizer steps T");
        cmd->add_option("--warmup", warmup, "warmup steps W (overrides --warmup-frac)");
        cmd->add_option("--warmup-frac", warmup_frac, "warmup as a fraction of T, rounded down");
        cmd->add_option("--peak-base", peak_base, "base (pre-muP) peak learning rate");
        cmd->add_option("--rho", rho, "muP width ratio, 0 < rho <= 1");
        cmd->add_option("--ratio", ratio, "decay ratio: final LR as a fraction of peak");
        cmd->add_option("--milestone-frac", milestone_frac, "step: drop after this fraction of T");
        cmd->add_option("--drop-frac", drop_frac, "step: LR after the drop, as a fraction of peak");
        cmd->add_option("--cooldown-frac", cooldown_frac, "wsd: cooldown as a fraction of T");
        cmd->add_option("--period", period, "cyclic: period in steps");
    }

    ScheduleSpec to_spec(double weight_decay) const {
        ScheduleSpec spec;
        spec.kind = parse_schedule_kind(kind);
        spec.total_steps = steps;
        spec.warmup_steps = warmup ? *warmup : warmup_steps_for(steps, warmup_frac);
        spec.peak_base_lr = peak_base;
        spec.mup_factor = rho;
        spec.decay_ratio = ratio;
        spec.params.milestone_fraction = milestone_frac;
        spec.params.drop_fraction = drop_frac;
        spec.params.cooldown_fraction = cooldown_frac;
        spec.params.period_steps = period;
        spec.params.weight_decay = weight_decay;
        spec.validate();
        return spec;
    }
};

json spec_json(const ScheduleSpec& spec) {
    json j;
    j["kind"] = std::string(to_string(spec.kind));
    j["total_steps"] = spec.total_steps;
    j["warmup_steps"] = spec.warmup_steps;
    j["peak_base_lr"] = spec.peak_base_lr;
    j["mup_factor"] = spec.mup_factor;
    j["decay_ratio"] = spec.decay_ratio;
    switch (spec.kind) {
        case ScheduleKind::Step:
            j["milestone_fraction"] = spec.params.milestone_fraction;
            j["drop_fraction"] = spec.params.drop_fraction;
            break;
        case ScheduleKind::WSD: j["cooldown_fraction"] = spec.params.cooldown_fraction; break;
        case ScheduleKind::Cyclic: j["period_steps"] = spec.params.period_steps; break;
        case ScheduleKind::Rational: j["weight_decay"] = spec.params.weight_decay; break;
        default: break;
    }
    return j;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

/// Collects what a command produced and writes the manifest next to it.
class RunContext {
public:
    RunContext(std::string command, std::vector<std::string> replay_args, const GlobalFlags& globals)
        : command_(std::move(command)), args_(std::move(replay_args)), globals_(globals) {
        std::error_code ec;
        fs::create_directories(globals_.out_dir, ec);
        if (ec) throw IoError("cannot create output directory " + globals_.out_dir + ": " + ec.message());
    }

    fs::path path(const std::string& name) {
        outputs_.push_back(name);
        return fs::path(globals_.out_dir) / name;
    }

    void finish(json config) {
        json manifest;
        manifest["command"] = command_;
        manifest["version"] = kVersion;
        manifest["seed"] = globals_.seed;
        manifest["args"] = args_;
        manifest["config"] = std::move(config);
        manifest["outputs"] = outputs_;
        auto out = open_output(fs::path(globals_.out_dir) / "manifest.json");
        out << manifest.dump(2) << '\n';
    }

    bool svg() const { return globals_.svg; }

private:
    std::string command_;
    std::vector<std::string> args_;
    GlobalFlags globals_;
    std::vector<std::string> outputs_;
};

void write_coefficients_csv(std::ostream& out, const DualCoefficients& coeffs) {
    out << "i,c,log_c\n";
    const auto c = coeffs.c();
    for (std::size_t i = 0; i < c.size(); ++i)
        out << i + 1 << ',' << format_double(c[i]) << ',' << format_double(coeffs.log_c[i]) << '\n';
}

SvgSeries index_series(const std::string& label, std::span<const double> y, double first_x = 1.0) {
    SvgSeries s{label, {}, {}};
    for (std::size_t i = 0; i < y.size(); ++i) {
        s.x.push_back(first_x + static_cast<double>(i));
        s.y.push_back(y[i]);
    }
    return s;
}

// ---------------------------------------------------------------- commands

void cmd_schedule(RunContext& ctx, const ScheduleFlags& flags, double wd) {
    const ScheduleSpec spec = flags.to_spec(wd);
    const auto lrs = lr_curve(spec);
    const auto alphas = alpha_curve(spec, wd);
    {
        auto out = open_output(ctx.path("schedule.csv"));
        write_schedule_csv(out, lrs, alphas);
    }
    if (ctx.svg()) {
        auto out = open_output(ctx.path("schedule.svg"));
        write_svg(out, SvgPlot{"Learning-rate schedule", "step", "learning rate", false,
                               {index_series(std::string(to_string(spec.kind)), lrs)}});
    }
    json config;
    config["schedule"] = spec_json(spec);
    config["weight_decay"] = wd;
    ctx.finish(std::move(config));
}

void cmd_dual(RunContext& ctx, const ScheduleFlags& flags, double wd, std::optional<std::int64_t> at_step,
              bool matrix) {
    const ScheduleSpec spec = flags.to_spec(wd);
    const SmoothingSequence alphas = SmoothingSequence::from_schedule(spec, wd);
    const auto t = static_cast<std::size_t>(at_step ? *at_step : static_cast<std::int64_t>(alphas.size()));
    if (t < 1 || t > alphas.size())
        throw RangeError("at-step", std::to_string(t) + " outside 1.." + std::to_string(alphas.size()));

    const DualCoefficients coeffs = coefficients_at(alphas.prefix(t));
    {
        auto out = open_output(ctx.path("coefficients.csv"));
        write_coefficients_csv(out, coeffs);
    }
    if (matrix) {
        auto out = open_output(ctx.path("coefficient_matrix.csv"));
        out << "# sparse lower-triangular table; entries with log_c < -745 (c == 0 in double) omitted\n";
        out << "t,i,log_c\n";
        for_each_coefficient_row(alphas.prefix(t), [&](const DualCoefficients& row) {
            for (std::size_t i = 0; i < row.log_c.size(); ++i)
                if (row.log_c[i] >= kLogFloor)
                    out << row.t << ',' << i + 1 << ',' << format_double(row.log_c[i]) << '\n';
        });
    }
    if (ctx.svg()) {
        auto out = open_output(ctx.path("coefficients.svg"));
        write_svg(out, SvgPlot{"Update coefficients at step " + std::to_string(t), "update index i",
                               "coefficient c_{t,i}", true,
                               {index_series(std::string(to_string(spec.kind)), coeffs.c())}});
    }
    json config;
    config["schedule"] = spec_json(spec);
    config["weight_decay"] = wd;
    config["at_step"] = t;
    config["matrix"] = matrix;
    config["coefficient_sum"] = coeffs.sum();
    ctx.finish(std::move(config));
}

void write_designed(RunContext& ctx, const SmoothingSequence& alphas, std::span<const double> lrs, double wd,
                    double rho, const std::string& label) {
    // Row 0 is the initial-weights pseudo-input (alpha = 1).
    std::vector<double> all_lrs;
    all_lrs.push_back(1.0 / (rho * wd));
    all_lrs.insert(all_lrs.end(), lrs.begin(), lrs.end());
    {
        auto out = open_output(ctx.path("schedule.csv"));
        write_schedule_csv(out, all_lrs, alphas.values(), 0);
    }
    if (ctx.svg()) {
        auto out = open_output(ctx.path("schedule.svg"));
        write_svg(out, SvgPlot{"Designed schedule", "step", "base learning rate", false,
                               {index_series(label, lrs)}});
    }
}

void cmd_design(RunContext& ctx, const std::string& target_path, double wd, double rho) {
    const CsvTable table = read_csv(target_path);
    const auto weights = table.values("c");
    const auto designed = schedule_from_coefficients(TargetProfile(weights), wd, rho);
    write_designed(ctx, designed.alphas, designed.base_lrs, wd, rho, "designed");
    json config;
    config["target"] = target_path;
    config["target_weights"] = weights;
    config["weight_decay"] = wd;
    config["mup_factor"] = rho;
    ctx.finish(std::move(config));
}

void cmd_rational(RunContext& ctx, const ScheduleFlags& flags, double wd) {
    const std::int64_t warmup = flags.warmup ? *flags.warmup : warmup_steps_for(flags.steps, flags.warmup_frac);
    const double peak = mup_scale(flags.peak_base, flags.rho);
    const auto lrs = rational_schedule(peak, wd, flags.steps, warmup);
    std::vector<double> alphas(lrs.size());
    for (std::size_t i = 0; i < lrs.size(); ++i) {
        alphas[i] = lrs[i] * wd;
        if (alphas[i] >= 1.0)
            throw DomainError("alpha at step " + std::to_string(i + 1) + " >= 1; lr * weight_decay too large");
    }
    {
        auto out = open_output(ctx.path("schedule.csv"));
        write_schedule_csv(out, lrs, alphas);
    }
    if (ctx.svg()) {
        auto out = open_output(ctx.path("schedule.svg"));
        write_svg(out, SvgPlot{"Rational schedule", "step", "learning rate", false, {index_series("rational", lrs)}});
        auto dual_out = open_output(ctx.path("coefficients.svg"));
        const auto coeffs = coefficients_at(SmoothingSequence::from_step_alphas(alphas));
        write_svg(dual_out, SvgPlot{"Update coefficients at final step", "update index i", "coefficient c_{t,i}", true,
                                    {index_series("rational", coeffs.c())}});
    }
    json config;
    config["peak_lr"] = peak;
    config["peak_base_lr"] = flags.peak_base;
    config["mup_factor"] = flags.rho;
    config["weight_decay"] = wd;
    config["total_steps"] = flags.steps;
    config["warmup_steps"] = warmup;
    ctx.finish(std::move(config));
}

struct SimulateFlags {
    std::string experiment = "adamw";
    std::int64_t dim = 10;
    double mu = 1.0;
    double sigma2 = 0.0;
    std::int64_t batch = 1;
    double d0 = 1.0;
    double beta1 = 0.9;
    double beta2 = 0.95;
    double eps = 1e-8;
    std::int64_t segments = 8;
    std::int64_t steps_per_segment = 250;
    std::int64_t probe_dim = 16;
    double noise_std = 1.0;
    std::int64_t seeds = 20;
};

void cmd_simulate(RunContext& ctx, const ScheduleFlags& flags, double wd, const SimulateFlags& sim,
                  std::uint64_t seed) {
    AdamWConfig adamw{wd, sim.beta1, sim.beta2, sim.eps};
    adamw.validate();
    json config;
    config["experiment"] = sim.experiment;
    config["adamw"] = {{"weight_decay", wd}, {"beta1", sim.beta1}, {"beta2", sim.beta2}, {"epsilon", sim.eps}};

    if (sim.experiment == "adamw") {
        const ScheduleSpec spec = flags.to_spec(wd);
        QuadraticProblem problem;
        problem.dim = static_cast<std::size_t>(sim.dim);
        problem.curvature.assign(problem.dim, sim.mu);
        problem.noise_var = sim.sigma2;
        problem.theta0_dist_sq = sim.d0;
        problem.batch_size = sim.batch;
        problem.optimum.assign(problem.dim, 1.0);
        const AdamWTrace trace = train(problem, spec, adamw, seed);

        const auto optimum = problem.optimum_or_zero();
        std::vector<double> dist_sq;
        {
            auto out = open_output(ctx.path("trace.csv"));
            out << "step,lr,alpha,dist_sq\n";
            for (std::size_t t = 0; t < trace.thetas.size(); ++t) {
                double d = 0.0;
                for (std::size_t k = 0; k < optimum.size(); ++k)
                    d += (trace.thetas[t][k] - optimum[k]) * (trace.thetas[t][k] - optimum[k]);
                dist_sq.push_back(d);
                const double lr = t == 0 ? 0.0 : trace.lrs[t - 1];
                out << t << ',' << format_double(lr) << ',' << format_double(lr * wd) << ',' << format_double(d)
                    << '\n';
            }
        }
        json result;
        result["steps"] = spec.total_steps;
        result["final_dist_sq"] = dist_sq.back();
        if (wd > 0.0) {
            const auto rec = reconstruct_from_updates(trace, coefficients_at(trace.smoothing()));
            result["duality_relative_error"] = rec.relative_error;
        }
        {
            auto out = open_output(ctx.path("reconstruction.json"));
            out << result.dump(2) << '\n';
        }
        if (ctx.svg()) {
            auto out = open_output(ctx.path("trace.svg"));
            write_svg(out, SvgPlot{"Squared distance to optimum", "step", "||theta - theta*||^2", true,
                                   {index_series(std::string(to_string(spec.kind)), dist_sq, 0.0)}});
        }
        config["schedule"] = spec_json(spec);
        config["problem"] = {{"dim", sim.dim}, {"mu", sim.mu}, {"sigma2", sim.sigma2}, {"batch", sim.batch}, {"d0", sim.d0}};
    } else if (sim.experiment == "order-probe") {
        OrderProbeConfig probe;
        probe.segments = sim.segments;
        probe.steps_per_segment = sim.steps_per_segment;
        probe.dim = sim.probe_dim;
        probe.noise_std = sim.noise_std;
        probe.validate();
        ScheduleFlags sized = flags;
        sized.steps = probe.total_steps();
        const ScheduleSpec spec = sized.to_spec(wd);
        const auto result = averaged_order_probe(probe, spec, adamw, seed, sim.seeds);
        {
            auto out = open_output(ctx.path("order_probe.csv"));
            out << "segment,loss\n";
            for (std::size_t k = 0; k < result.segment_loss.size(); ++k)
                out << k + 1 << ',' << format_double(result.segment_loss[k]) << '\n';
        }
        if (ctx.svg()) {
            auto out = open_output(ctx.path("order_probe.svg"));
            write_svg(out, SvgPlot{"Final loss on each training segment", "segment", "loss", false,
                                   {index_series(std::string(to_string(spec.kind)), result.segment_loss)}});
        }
        config["schedule"] = spec_json(spec);
        config["probe"] = {{"segments", probe.segments},     {"dim", probe.dim},
                           {"batches_per_segment", probe.batches_per_segment},
                           {"batch_size", probe.batch_size}, {"steps_per_segment", probe.steps_per_segment},
                           {"noise_std", probe.noise_std},   {"seeds", sim.seeds}};
    } else {
        throw ValidationError("experiment", "expected 'adamw' or 'order-probe', got '" + sim.experiment + "'");
    }
    ctx.finish(std::move(config));
}

SweepGrid grid_from_json(const json& j) {
    SweepGrid grid;
    for (const auto& s : j.at("schedules")) {
        ScheduleChoice choice;
        choice.kind = parse_schedule_kind(s.at("kind").get<std::string>());
        choice.decay_ratio = s.value("decay_ratio", 0.0);
        choice.params.milestone_fraction = s.value("milestone_fraction", choice.params.milestone_fraction);
        choice.params.drop_fraction = s.value("drop_fraction", choice.params.drop_fraction);
        choice.params.cooldown_fraction = s.value("cooldown_fraction", choice.params.cooldown_fraction);
        choice.params.period_steps = s.value("period_steps", choice.params.period_steps);
        choice.params.weight_decay = s.value("weight_decay", choice.params.weight_decay);
        grid.schedules.push_back(choice);
    }
    grid.peak_lrs = j.at("peak_lrs").get<std::vector<double>>();
    grid.sigma2 = j.at("sigma2").get<std::vector<double>>();
    grid.steps = j.at("steps").get<std::vector<std::int64_t>>();
    grid.batch = j.value("batch", std::vector<std::int64_t>{1});
    grid.warmup_fraction = j.value("warmup_fraction", grid.warmup_fraction);
    grid.mu = j.value("mu", grid.mu);
    grid.d0 = j.value("d0", grid.d0);
    grid.mc_trials = j.value("mc_trials", grid.mc_trials);
    return grid;
}

void cmd_sweep(RunContext& ctx, const std::string& config_path, const std::string& mode_name, unsigned threads,
               std::uint64_t seed) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open " + config_path);
    json grid_json;
    try {
        grid_json = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("config", std::string("invalid JSON: ") + e.what());
    }
    SweepGrid grid;
    try {
        grid = grid_from_json(grid_json);
    } catch (const json::exception& e) {
        throw ValidationError("config", e.what());
    }
    const SweepMode mode = parse_sweep_mode(mode_name);
    const auto cells = run_noise_sweep(grid, mode, seed, threads);
    {
        auto out = open_output(ctx.path("sweep.csv"));
        write_sweep_csv(out, cells);
    }
    json config;
    config["mode"] = mode_name;
    config["grid"] = grid_json;
    json unstable = json::array();
    for (const auto& cell : cells)
        if (!cell.stable) unstable.push_back(cell.index);
    config["unstable_cells"] = unstable;
    ctx.finish(std::move(config));
}

void cmd_fit(RunContext& ctx, const std::string& in_path) {
    const CsvTable table = read_csv(in_path);
    const auto xs = table.values("x");
    const auto ys = table.values("y");
    std::vector<Point> points;
    for (std::size_t i = 0; i < xs.size(); ++i) points.emplace_back(xs[i], ys[i]);
    const PowerLawFit fit = fit_power_law(points);
    {
        auto out = open_output(ctx.path("fit.json"));
        out << "{\"c\":" << format_double(fit.coefficient) << ",\"m\":" << format_double(fit.exponent)
            << ",\"r_squared\":" << format_double(fit.r_squared) << "}\n";
    }
    if (ctx.svg()) {
        SvgSeries data{"data", xs, ys};
        SvgSeries line{"fit", {}, {}};
        for (double x : xs) {
            line.x.push_back(x);
            line.y.push_back(predict(fit, x).value);
        }
        auto out = open_output(ctx.path("fit.svg"));
        write_svg(out, SvgPlot{"Power-law fit", "x", "y", true, {data, line}});
    }
    json config;
    config["input"] = in_path;
    config["points"] = points.size();
    ctx.finish(std::move(config));
}

// Drops --out/--threads (and their values) so replayed manifests are location- and parallelism-independent.
std::vector<std::string> replay_args(const std::vector<std::string>& args) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--out" || a == "--threads") {
            ++i;
            continue;
        }
        if (a.rfind("--out=", 0) == 0 || a.rfind("--threads=", 0) == 0) continue;
        kept.push_back(a);
    }
    return kept;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Learning-rate schedules and their weight-update duals for AdamW", "lrdual"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    GlobalFlags globals;
    auto add_globals = [&](CLI::App* cmd) {
        cmd->add_option("--out", globals.out_dir, "output directory");
        cmd->add_option("--seed", globals.seed, "base random seed");
        cmd->add_flag("--svg", globals.svg, "also write SVG plots");
    };

    ScheduleFlags sched;
    double wd = 0.1;
    std::optional<std::int64_t> at_step;
    bool matrix = false;
    std::string target_path, config_path, in_path, mode = "analytic", manifest_path;
    unsigned threads = 1;
    SimulateFlags sim;

    auto* schedule = app.add_subcommand("schedule", "emit an LR schedule as CSV");
    sched.attach(schedule);
    schedule->add_option("--wd", wd, "weight decay for the alpha column");

    auto* dual = app.add_subcommand("dual", "dual coefficients of a schedule");
    sched.attach(dual);
    dual->add_option("--wd", wd, "weight decay lambda");
    dual->add_option("--at-step", at_step, "EMA index t (1 = initial weights; default T+1)");
    dual->add_flag("--matrix", matrix, "also write the full coefficient table");

    auto* design = app.add_subcommand("design", "schedule realizing a target coefficient profile");
    design->add_option("--target", target_path, "CSV with columns i,c")->required();
    design->add_option("--wd", wd, "weight decay lambda");
    double design_rho = 1.0;
    design->add_option("--rho", design_rho, "muP factor");

    auto* rational = app.add_subcommand("rational", "uniform-coefficient (rational) schedule");
    sched.attach(rational);
    rational->add_option("--wd", wd, "weight decay lambda");

    auto* simulate = app.add_subcommand("simulate", "reference AdamW experiments on toy problems");
    sched.attach(simulate);
    simulate->add_option("--wd", wd, "weight decay lambda");
    simulate->add_option("--experiment", sim.experiment, "adamw|order-probe");
    simulate->add_option("--dim", sim.dim, "quadratic dimension");
    simulate->add_option("--mu", sim.mu, "quadratic curvature");
    simulate->add_option("--sigma2", sim.sigma2, "gradient noise variance");
    simulate->add_option("--batch", sim.batch, "batch size (noise variance / batch)");
    simulate->add_option("--d0", sim.d0, "initial squared distance to the optimum");
    simulate->add_option("--beta1", sim.beta1, "AdamW first-moment decay");
    simulate->add_option("--beta2", sim.beta2, "AdamW second-moment decay");
    simulate->add_option("--eps", sim.eps, "AdamW epsilon");
    simulate->add_option("--segments", sim.segments, "order-probe: number of data segments");
    simulate->add_option("--steps-per-segment", sim.steps_per_segment, "order-probe: steps per segment");
    simulate->add_option("--probe-dim", sim.probe_dim, "order-probe: regression dimension");
    simulate->add_option("--noise-std", sim.noise_std, "order-probe: label noise standard deviation");
    simulate->add_option("--seeds", sim.seeds, "order-probe: number of seeds averaged");

    auto* sweep = app.add_subcommand("sweep", "bias/variance sweep on noisy quadratics");
    sweep->add_option("--config", config_path, "grid JSON")->required();
    sweep->add_option("--mode", mode, "analytic|monte-carlo");
    sweep->add_option("--threads", threads, "worker threads (output is independent of this)");

    auto* fit = app.add_subcommand("fit", "power-law fit y = c x^m");
    fit->add_option("--in", in_path, "CSV with columns x,y")->required();

    auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay->add_option("--manifest", manifest_path, "manifest.json to replay")->required();

    for (auto* cmd : {schedule, dual, design, rational, simulate, sweep, fit, replay}) add_globals(cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (replay->parsed()) {
            std::ifstream in(manifest_path);
            if (!in) throw IoError("cannot open " + manifest_path);
            const json manifest = json::parse(in);
            std::vector<std::string> rerun = manifest.at("args").get<std::vector<std::string>>();
            rerun.push_back("--out");
            rerun.push_back(globals.out_dir);
            return run(rerun, out, err);
        }

        const std::string name = app.get_subcommands().front()->get_name();
        RunContext ctx(name, replay_args(args), globals);
        if (schedule->parsed()) cmd_schedule(ctx, sched, wd);
        else if (dual->parsed()) cmd_dual(ctx, sched, wd, at_step, matrix);
        else if (design->parsed()) cmd_design(ctx, target_path, wd, design_rho);
        else if (rational->parsed()) cmd_rational(ctx, sched, wd);
        else if (simulate->parsed()) cmd_simulate(ctx, sched, wd, sim, globals.seed);
        else if (sweep->parsed()) cmd_sweep(ctx, config_path, mode, threads, globals.seed);
        else if (fit->parsed()) cmd_fit(ctx, in_path);
    } catch (const ValidationError& e) {
        err << "error: invalid " << e.what() << '\n';
        return e.exit_code();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const json::exception& e) {
        err << "error: invalid JSON: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}

}  // namespace lrdual::cli

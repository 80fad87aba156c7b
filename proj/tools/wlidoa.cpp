//
// wlidoa command-line front end: simulate / complete / doa / experiment.
// Exit codes: 0 ok, 2 config or input error, 3 solver failure.
//
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "wlidoa/wlidoa.hpp"

namespace {

using namespace wlidoa;
using cli::RunConfig;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string in;
    bool quiet = false;
};

RunConfig load(const CommonArgs& args)
{
    RunConfig cfg = cli::load_config(args.config_path);
    if (args.seed) {
        cfg.seed = *args.seed;
    }
    if (!args.out.empty()) {
        cfg.output_path = args.out;
    }
    return cfg;
}

IndexSet resolve_omega(const RunConfig& cfg)
{
    if (cfg.omega) {
        validate_omega(*cfg.omega, cfg.n);
        return *cfg.omega;
    }
    if (cfg.m) {
        return sample_mask_random(cfg.n, *cfg.m, hash_seed(cfg.seed, 0xa5a5));
    }
    throw cli::ConfigError("config: scene needs either omega or m");
}

int cmd_simulate(const CommonArgs& args)
{
    const RunConfig cfg = load(args);
    const SourceSet sources = cfg.make_sources();
    ArrayScene scene;
    scene.n = cfg.n;
    scene.omega = resolve_omega(cfg);
    scene.snapshots = cfg.snapshots;
    scene.seed = hash_seed(cfg.seed, 0x5a5a);
    if (cfg.snr_db) {
        scene.noise = NoiseSpec::snr_db;
        scene.snr_db = *cfg.snr_db;
    } else if (cfg.eta && *cfg.eta > 0.0) {
        scene.noise = NoiseSpec::eta;
        scene.eta = *cfg.eta;
    }
    const Snapshot snap = synthesize(sources, scene, cfg.vary_amplitudes);

    SnapshotFile f;
    f.n = cfg.n;
    f.m = static_cast<int>(scene.omega.size());
    f.snapshots = cfg.snapshots;
    f.spacing_ratio = cfg.spacing_ratio;
    f.noise_eta = cfg.eta.value_or(scene.noise == NoiseSpec::none ? 0.0 : snap.realized_eta);
    f.snr_db = cfg.snr_db;
    f.seed = cfg.seed;
    f.omega = scene.omega;
    f.sources = sources;
    f.y_obs = snap.y_obs;
    f.y_full = snap.y_full;
    f.noise = snap.noise;
    const std::string path = cfg.output_path.empty() ? "snapshot.txt" : cfg.output_path;
    write_snapshot_file(path, f);
    if (!args.quiet) {
        std::cout << "wrote " << path << " (N=" << f.n << ", M=" << f.m << ", T=" << f.snapshots
                  << ")\n";
    }
    return 0;
}

int cmd_complete(const CommonArgs& args)
{
    const RunConfig cfg = load(args);
    const SnapshotFile snap = read_snapshot_file(args.in);
    RunConfig local = cfg;
    local.n = snap.n;
    const LiftingSpec spec = local.make_lifting();
    const WeightPair weights = local.make_weights(spec, snap.omega);

    AdmmConfig acfg;
    acfg.rho = cfg.rho;
    acfg.gamma = cfg.gamma;
    acfg.iters = cfg.iters;
    acfg.tol = cfg.tol;
    int k_guess = cfg.k_max;
    if (k_guess <= 0 && snap.sources) {
        k_guess = snap.sources->count();
    }
    if (k_guess <= 0) {
        k_guess = 5;
    }
    acfg.rank = cfg.rank > 0 ? cfg.rank
                             : std::min(2 * k_guess, std::min(spec.rows(), spec.cols()));
    acfg.seed = cfg.seed;

    CompletionResult res;
    if (snap.snapshots > 1) {
        const LiftingSpec bspec = LiftingSpec::block_hankel(snap.n, spec.d, snap.snapshots);
        res = admm_complete_block(snap.y_obs, snap.omega, bspec, {weights}, acfg);
    } else {
        res = admm_complete(snap.y_obs.col(0), snap.omega, spec, weights, acfg);
    }

    CompletedFile out;
    out.n = snap.n;
    out.snapshots = snap.snapshots;
    out.spacing_ratio = snap.spacing_ratio;
    out.weights_mode = cfg.weights_mode;
    out.weights_floor = cfg.weights_floor;
    out.lifting_kind = cfg.lifting_kind;
    out.lifting_d = spec.d;
    out.rho = acfg.rho;
    out.gamma = acfg.gamma;
    out.iters = acfg.iters;
    out.rank = acfg.rank;
    out.iterations_run = res.iterations_run;
    out.final_rank_estimate = res.final_rank_estimate;
    out.y_hat = res.y_hat;
    const std::string path = cfg.output_path.empty() ? "completed.txt" : cfg.output_path;
    write_completed_file(path, out);
    write_trace_csv(path + ".trace.csv", res.trace);
    write_weights_csv(path + ".weights.csv", weights);

    if (!args.quiet) {
        std::cout << "wrote " << path << " (iterations=" << res.iterations_run
                  << ", rank_estimate=" << res.final_rank_estimate << ")\n";
        if (!res.trace.empty()) {
            std::cout << "final feas_residual=" << res.trace.back().feas
                      << " data_residual=" << res.trace.back().data << "\n";
        }
        if (snap.y_full) {
            std::cout << "nmse=" << nmse(*snap.y_full, res.y_hat) << "\n";
        }
    }
    return 0;
}

int cmd_doa(const CommonArgs& args)
{
    const RunConfig cfg = load(args);
    const CompletedFile comp = read_completed_file(args.in);
    const int k_max = cfg.k_max > 0 ? cfg.k_max : 5;

    DoaEstimate est;
    std::vector<std::string> notes;
    notes.push_back(std::string("method=") + cfg.extract_method);
    if (cfg.extract_method == "pencil") {
        if (comp.y_hat.cols() > 1) {
            est = detail::pencil_mmv(comp.y_hat, k_max, cfg.noise_tol, comp.spacing_ratio);
        } else if (comp.y_hat.col(0).norm() == 0.0) {
            est = DoaEstimate{};
        } else {
            est = matrix_pencil(comp.y_hat.col(0), k_max, 0, cfg.noise_tol, comp.spacing_ratio);
        }
    } else if (cfg.extract_method == "bp") {
        GridSpec grid;
        grid.resolution = cfg.grid_resolution;
        grid.iters = cfg.bp_iters;
        IndexSet full(comp.n);
        for (int i = 0; i < comp.n; ++i) {
            full[static_cast<std::size_t>(i)] = i + 1;
        }
        est = bp_grid(comp.y_hat.col(0), full, comp.n, grid, comp.spacing_ratio);
        notes.push_back("grid=" + std::to_string(cfg.grid_resolution));
    } else {
        throw cli::ConfigError("config: unknown extract.method '" + cfg.extract_method + "'");
    }

    const std::string path = cfg.output_path.empty() ? "estimates.csv" : cfg.output_path;
    write_estimates_csv(path, est, notes);
    if (!args.quiet) {
        std::cout << "wrote " << path << " (" << est.taus.size() << " estimates, residual "
                  << est.residual << ")\n";
    }
    return 0;
}

int cmd_experiment(const CommonArgs& args)
{
    const RunConfig cfg = load(args);
    ExperimentPlan plan;
    if (cfg.preset) {
        plan.scenario.preset = *cfg.preset;
    } else {
        plan.scenario.random_k = cfg.random_k;
    }
    plan.scenario.spacing_ratio = cfg.spacing_ratio;
    plan.n = cfg.n;
    plan.m = cfg.m.value_or(cfg.n / 2);
    plan.noiseless = !cfg.snr_db.has_value();
    plan.snr_db = cfg.snr_db.value_or(30.0);
    plan.snapshots = cfg.snapshots;
    plan.vary_amplitudes = cfg.vary_amplitudes;
    plan.sweep = cli::parse_sweep(cfg.sweep);
    plan.values = cfg.sweep_values;
    plan.trials = cfg.trials;
    for (const auto& name : cfg.methods) {
        plan.methods.push_back(cli::parse_method(name));
    }
    plan.base_seed = cfg.seed;
    plan.d = cfg.lifting_d;
    plan.rho = cfg.rho;
    plan.gamma = cfg.gamma;
    plan.iters = cfg.iters;
    plan.rank = cfg.rank;
    plan.weight_floor = cfg.weights_floor;
    plan.k_max = cfg.k_max;
    plan.noise_tol = cfg.noise_tol;
    plan.grid_resolution = cfg.grid_resolution;

    const auto records = run_plan(plan);
    const auto summary = aggregate(records);
    const std::string path = cfg.output_path.empty() ? "records.csv" : cfg.output_path;
    write_records_csv(path, records);
    write_summary_csv(path + ".summary.csv", summary);
    if (!args.quiet) {
        std::cout << "method,sweep_value,mean_nmse,median_nmse,recovery,rmse_deg\n";
        for (const auto& row : summary) {
            std::printf("%s,%g,%.6g,%.6g,%.3f,%.4g\n", method_name(row.method), row.sweep_value,
                        row.mean_nmse, row.median_nmse, row.recovery, row.rmse_deg);
        }
        std::cout << "wrote " << path << " and " << path << ".summary.csv\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"weighted lifted-structure DOA estimation"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* sub, bool needs_input) {
        sub->add_option("--config", args.config_path, "JSON run configuration")->required();
        sub->add_option("--seed", args.seed, "seed override");
        sub->add_option("--out", args.out, "output path override");
        sub->add_flag("--quiet", args.quiet, "suppress stdout summaries");
        if (needs_input) {
            sub->add_option("--in", args.in, "input file")->required();
        }
    };
    auto* sim = app.add_subcommand("simulate", "synthesize array samples to a snapshot file");
    add_common(sim, false);
    auto* com = app.add_subcommand("complete", "interpolate a snapshot file to a full ULA");
    add_common(com, true);
    auto* doa = app.add_subcommand("doa", "extract angles from a completed file");
    add_common(doa, true);
    auto* exp = app.add_subcommand("experiment", "run a Monte-Carlo sweep");
    add_common(exp, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(args);
        if (com->parsed()) return cmd_complete(args);
        if (doa->parsed()) return cmd_doa(args);
        if (exp->parsed()) return cmd_experiment(args);
    } catch (const DivergenceError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

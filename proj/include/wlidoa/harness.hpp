///
/// \file harness.hpp
///
/// Monte-Carlo experiment runner: sweeps one axis (sample count, SNR, gamma,
/// snapshot count), runs every requested method on identical realizations,
/// and scores interpolation NMSE, the recovery criterion, and RMSE.
///
#ifndef WLIDOA_HARNESS_HPP
#define WLIDOA_HARNESS_HPP

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "wlidoa/array_model.hpp"
#include "wlidoa/completion.hpp"
#include "wlidoa/doa.hpp"
#include "wlidoa/rng.hpp"
#include "wlidoa/weights.hpp"

namespace wlidoa {

enum class Method { wli_emac, emac, wli_demac, demac, bp };
enum class SweepAxis { samples, snr_db, gamma, snapshots };

inline const char* method_name(Method m)
{
    switch (m) {
    case Method::wli_emac:  return "wli-emac";
    case Method::emac:      return "emac";
    case Method::wli_demac: return "wli-demac";
    case Method::demac:     return "demac";
    case Method::bp:        return "bp";
    }
    return "?";
}

inline const char* sweep_name(SweepAxis a)
{
    switch (a) {
    case SweepAxis::samples:   return "samples";
    case SweepAxis::snr_db:    return "snr_db";
    case SweepAxis::gamma:     return "gamma";
    case SweepAxis::snapshots: return "snapshots";
    }
    return "?";
}

struct ScenarioSpec {
    std::string preset;      ///< table1-{a,b,c,d}; empty selects random sources
    int random_k = 2;        ///< source count for random scenarios
    double spacing_ratio = 0.5;
    bool enforce_separation = true; ///< redraw random sources until separation_ok
};

struct ExperimentPlan {
    ScenarioSpec scenario;
    int n = 41;
    int m = 18;                ///< observed elements (unless sweeping samples)
    bool noiseless = true;
    double snr_db = 30.0;      ///< used when not noiseless and not sweeping SNR
    int snapshots = 1;         ///< used unless sweeping snapshots
    bool vary_amplitudes = false;
    SweepAxis sweep = SweepAxis::samples;
    std::vector<double> values;
    int trials = 50;
    std::vector<Method> methods;
    std::uint64_t base_seed = 1;
    // solver knobs; zeros select module defaults
    int d = 0;
    double rho = 1e3;
    double gamma = 1e5;
    int iters = 2000;
    int rank = 0;
    double weight_floor = 0.05;
    int k_max = 0;
    double noise_tol = 1e-6;
    int grid_resolution = 4096;

    void validate() const
    {
        detail::check(trials >= 1, "plan: trials must be >= 1");
        detail::check(!values.empty(), "plan: sweep values must be nonempty");
        for (std::size_t i = 1; i < values.size(); ++i) {
            detail::check(values[i - 1] <= values[i], "plan: sweep values must be sorted");
        }
        detail::check(!methods.empty(), "plan: methods must be nonempty");
    }
};

struct TrialRecord {
    Method method = Method::emac;
    SweepAxis sweep = SweepAxis::samples;
    double sweep_value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double nmse = 0.0;
    bool success = false;
    double rmse_deg = 0.0;
    double wall_ms = 0.0;
    bool diverged = false;
};

struct SummaryRow {
    Method method;
    double sweep_value;
    double mean_nmse;
    double median_nmse;
    double recovery;
    double rmse_deg;
    int trials;
};

/// Success: every true angle has exactly one estimate within 0.005 in the
/// sin domain, and no estimate serves two true angles.
inline bool success_rule(const SourceSet& truth, const DoaEstimate& est,
                         double spacing_ratio = 0.5)
{
    std::vector<bool> used(est.taus.size(), false);
    for (int k = 0; k < truth.count(); ++k) {
        const double sin_true = truth.tau(k) / truth.spacing_ratio;
        int hit = -1;
        int hits = 0;
        for (std::size_t e = 0; e < est.taus.size(); ++e) {
            if (std::abs(sin_true - est.taus[e] / spacing_ratio) <= 0.005) {
                ++hits;
                hit = static_cast<int>(e);
            }
        }
        if (hits != 1 || used[static_cast<std::size_t>(hit)]) {
            return false;
        }
        used[static_cast<std::size_t>(hit)] = true;
    }
    return true;
}

namespace detail {

struct Match {
    std::vector<std::pair<int, int>> pairs; ///< (truth index, estimate index)
};

/// Greedy nearest-tau bipartite matching in the sin domain.
inline Match greedy_match(const std::vector<double>& sin_true,
                          const std::vector<double>& sin_est)
{
    Match m;
    std::vector<bool> tu(sin_true.size(), false), eu(sin_est.size(), false);
    const std::size_t count = std::min(sin_true.size(), sin_est.size());
    for (std::size_t it = 0; it < count; ++it) {
        double best = std::numeric_limits<double>::infinity();
        int bt = -1, be = -1;
        for (std::size_t a = 0; a < sin_true.size(); ++a) {
            if (tu[a]) continue;
            for (std::size_t b = 0; b < sin_est.size(); ++b) {
                if (eu[b]) continue;
                const double dist = std::abs(sin_true[a] - sin_est[b]);
                if (dist < best) {
                    best = dist;
                    bt = static_cast<int>(a);
                    be = static_cast<int>(b);
                }
            }
        }
        if (bt < 0) break;
        tu[static_cast<std::size_t>(bt)] = true;
        eu[static_cast<std::size_t>(be)] = true;
        m.pairs.emplace_back(bt, be);
    }
    return m;
}

} // namespace detail

/// Per-trial RMSE in degrees under greedy matching. Unmatched true sources
/// contribute min(90, 2 * worst matched error), or 90 when nothing matched.
inline double rmse_trial(const std::vector<double>& truth_thetas,
                         const std::vector<double>& est_thetas)
{
    if (truth_thetas.empty()) {
        return 0.0;
    }
    std::vector<double> st, se;
    for (double t : truth_thetas) st.push_back(std::sin(t * pi / 180.0));
    std::vector<double> est_ok;
    for (double t : est_thetas) {
        if (std::isfinite(t)) {
            est_ok.push_back(t);
            se.push_back(std::sin(t * pi / 180.0));
        }
    }
    const auto match = detail::greedy_match(st, se);
    double sq = 0.0;
    double worst = 0.0;
    for (const auto& [a, b] : match.pairs) {
        const double err = std::abs(truth_thetas[static_cast<std::size_t>(a)] -
                                    est_ok[static_cast<std::size_t>(b)]);
        worst = std::max(worst, err);
        sq += err * err;
    }
    const std::size_t unmatched = truth_thetas.size() - match.pairs.size();
    const double cap = match.pairs.empty() ? 90.0 : std::min(90.0, 2.0 * worst);
    sq += static_cast<double>(unmatched) * cap * cap;
    return std::sqrt(sq / static_cast<double>(truth_thetas.size()));
}

/// Multi-trial RMSE: sqrt of the mean squared angle error pooled over
/// sources and trials.
inline double rmse(const std::vector<double>& truth_thetas,
                   const std::vector<std::vector<double>>& est_thetas_per_trial)
{
    if (truth_thetas.empty() || est_thetas_per_trial.empty()) {
        return 0.0;
    }
    double sq = 0.0;
    for (const auto& est : est_thetas_per_trial) {
        const double r = rmse_trial(truth_thetas, est);
        sq += r * r;
    }
    return std::sqrt(sq / static_cast<double>(est_thetas_per_trial.size()));
}

namespace detail {

inline SourceSet draw_sources(const ScenarioSpec& sc, int n, Rng& rng)
{
    if (!sc.preset.empty()) {
        SourceSet s = preset_sources(sc.preset);
        s.spacing_ratio = sc.spacing_ratio;
        return s;
    }
    SourceSet s;
    s.spacing_ratio = sc.spacing_ratio;
    for (int attempt = 0; attempt < 200; ++attempt) {
        s.sources.clear();
        std::vector<double> thetas;
        for (int k = 0; k < sc.random_k; ++k) {
            const double theta = -90.0 + 180.0 * rng.uniform();
            const double mag = 1.0 + 2.0 * rng.uniform();
            const double ph = 2.0 * pi * rng.uniform();
            s.sources.push_back({theta, std::polar(mag, ph)});
            thetas.push_back(theta);
        }
        if (!sc.enforce_separation || sc.random_k < 2 || separation_ok(thetas, n, sc.spacing_ratio)) {
            return s;
        }
    }
    return s; // last draw; separation enforcement is best-effort
}

/// Pools per-column pencil estimates and merges clusters closer than half
/// the success tolerance in the sin domain.
inline DoaEstimate pencil_mmv(const ComplexMatrix& y_hat, int k_max, double noise_tol,
                              double spacing_ratio)
{
    std::vector<double> pool;
    for (int t = 0; t < y_hat.cols(); ++t) {
        const DoaEstimate e = matrix_pencil(y_hat.col(t), k_max, 0, noise_tol, spacing_ratio);
        pool.insert(pool.end(), e.taus.begin(), e.taus.end());
    }
    std::sort(pool.begin(), pool.end());
    std::vector<double> taus;
    const double tol = 0.0025 * spacing_ratio / 0.5;
    std::size_t i = 0;
    while (i < pool.size()) {
        std::size_t j = i;
        while (j + 1 < pool.size() && pool[j + 1] - pool[j] < tol) {
            ++j;
        }
        taus.push_back(pool[(i + j) / 2]);
        i = j + 1;
    }
    DoaEstimate est;
    est.taus = taus;
    for (double t : taus) {
        est.thetas.push_back(theta_from_tau(t, spacing_ratio));
    }
    if (y_hat.cols() > 0 && !taus.empty()) {
        est.amps = amplitudes_ls(y_hat.col(0), taus);
    }
    return est;
}

struct TrialParams {
    int m;
    double snr_db;
    bool noiseless;
    double gamma;
    int snapshots;
};

inline TrialParams resolve_params(const ExperimentPlan& plan, double value)
{
    TrialParams p{plan.m, plan.snr_db, plan.noiseless, plan.gamma, plan.snapshots};
    switch (plan.sweep) {
    case SweepAxis::samples:   p.m = static_cast<int>(value); break;
    case SweepAxis::snr_db:    p.snr_db = value; p.noiseless = false; break;
    case SweepAxis::gamma:     p.gamma = value; break;
    case SweepAxis::snapshots: p.snapshots = static_cast<int>(value); break;
    }
    return p;
}

inline int thread_budget()
{
    if (const char* env = std::getenv("WLIDOA_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) {
            return v;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace detail

/// Runs all methods of the plan on one realization. Exposed for tests and
/// the acceptance suite; run_plan schedules this per (value, trial).
inline std::vector<TrialRecord> run_trial(const ExperimentPlan& plan, double value, int trial)
{
    const std::uint64_t seed = hash_seed(plan.base_seed, double_bits(value), static_cast<std::uint64_t>(trial));
    const auto params = detail::resolve_params(plan, value);

    Rng rng(seed);
    SourceSet sources = detail::draw_sources(plan.scenario, plan.n, rng);
    const int k_true = sources.count();
    const int k_max = plan.k_max > 0 ? plan.k_max : std::max(1, k_true);

    ArrayScene scene;
    scene.n = plan.n;
    scene.omega = sample_mask_random(plan.n, params.m, hash_seed(seed, 0xa5a5));
    scene.noise = params.noiseless ? NoiseSpec::none : NoiseSpec::snr_db;
    scene.snr_db = params.snr_db;
    scene.snapshots = params.snapshots;
    scene.seed = hash_seed(seed, 0x5a5a);
    const Snapshot snap = synthesize(sources, scene, plan.vary_amplitudes);

    std::vector<double> truth_thetas;
    for (const auto& s : sources.sources) {
        truth_thetas.push_back(s.theta_deg);
    }

    std::vector<TrialRecord> out;
    for (Method method : plan.methods) {
        TrialRecord rec;
        rec.method = method;
        rec.sweep = plan.sweep;
        rec.sweep_value = value;
        rec.trial = trial;
        rec.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            DoaEstimate est;
            if (method == Method::bp) {
                GridSpec grid;
                grid.resolution = plan.grid_resolution;
                est = bp_grid(snap.y_obs.col(0), scene.omega, plan.n, grid, sources.spacing_ratio);
                ComplexVector recon = ComplexVector::Zero(plan.n);
                for (std::size_t k = 0; k < est.taus.size(); ++k) {
                    recon += est.amps[k] * steering_vector(est.taus[k], plan.n);
                }
                rec.nmse = nmse(snap.y_full.col(0), recon);
            } else {
                const bool weighted = method == Method::wli_emac || method == Method::wli_demac;
                const bool dbl = method == Method::demac || method == Method::wli_demac;
                const LiftingSpec lift_spec =
                    dbl ? LiftingSpec::double_hankel(plan.n, plan.d > 0 ? plan.d : default_pencil(plan.n))
                        : LiftingSpec::hankel(plan.n, plan.d > 0 ? plan.d : default_pencil(plan.n));
                const WeightPair weights =
                    weighted ? design_weights_minimax(lift_spec, scene.omega, plan.weight_floor)
                             : WeightPair::identity(lift_spec);
                AdmmConfig cfg;
                cfg.rho = plan.rho;
                cfg.gamma = params.gamma;
                cfg.iters = plan.iters;
                cfg.rank = plan.rank > 0
                               ? plan.rank
                               : std::min(2 * k_max, std::min(lift_spec.rows(), lift_spec.cols()));
                cfg.seed = seed;
                CompletionResult cr;
                if (params.snapshots > 1) {
                    detail::check(!dbl, "plan: double-hankel block completion not supported");
                    const LiftingSpec bspec =
                        LiftingSpec::block_hankel(plan.n, lift_spec.d, params.snapshots);
                    cr = admm_complete_block(snap.y_obs, scene.omega, bspec, {weights}, cfg);
                    rec.nmse = nmse(snap.y_full, cr.y_hat);
                    est = detail::pencil_mmv(cr.y_hat, k_max, plan.noise_tol, sources.spacing_ratio);
                } else {
                    cr = admm_complete(snap.y_obs.col(0), scene.omega, lift_spec, weights, cfg);
                    rec.nmse = nmse(snap.y_full.col(0), cr.y_hat.col(0));
                    est = matrix_pencil(cr.y_hat.col(0), k_max, 0, plan.noise_tol,
                                        sources.spacing_ratio);
                }
            }
            rec.success = success_rule(sources, est, sources.spacing_ratio);
            rec.rmse_deg = rmse_trial(truth_thetas, est.thetas);
        } catch (const DivergenceError&) {
            rec.diverged = true;
            rec.nmse = std::numeric_limits<double>::infinity();
            rec.success = false;
            rec.rmse_deg = 90.0;
        }
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        out.push_back(rec);
    }
    return out;
}

/// Runs the full plan. Trials execute concurrently (bounded by
/// WLIDOA_THREADS); records are returned in deterministic (value, trial,
/// method) order regardless of scheduling.
inline std::vector<TrialRecord> run_plan(const ExperimentPlan& plan)
{
    plan.validate();
    const int nv = static_cast<int>(plan.values.size());
    const int slots = nv * plan.trials;
    std::vector<std::vector<TrialRecord>> bucket(static_cast<std::size_t>(slots));

    const int nthreads = std::min(detail::thread_budget(), slots);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int slot = next.fetch_add(1);
            if (slot >= slots) {
                return;
            }
            const int vi = slot / plan.trials;
            const int trial = slot % plan.trials;
            bucket[static_cast<std::size_t>(slot)] = run_trial(plan, plan.values[static_cast<std::size_t>(vi)], trial);
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    std::vector<TrialRecord> out;
    out.reserve(static_cast<std::size_t>(slots) * plan.methods.size());
    for (const auto& b : bucket) {
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

/// Per (method, sweep value) aggregation; empty buckets are omitted.
inline std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records)
{
    std::vector<SummaryRow> rows;
    auto find_row = [&](Method m, double v) -> SummaryRow* {
        for (auto& r : rows) {
            if (r.method == m && r.sweep_value == v) {
                return &r;
            }
        }
        return nullptr;
    };
    // first pass: collect keys in record order
    for (const auto& rec : records) {
        if (find_row(rec.method, rec.sweep_value) == nullptr) {
            rows.push_back({rec.method, rec.sweep_value, 0, 0, 0, 0, 0});
        }
    }
    for (auto& row : rows) {
        std::vector<double> nm;
        double sq = 0.0;
        int succ = 0;
        for (const auto& rec : records) {
            if (rec.method != row.method || rec.sweep_value != row.sweep_value) {
                continue;
            }
            nm.push_back(rec.nmse);
            sq += rec.rmse_deg * rec.rmse_deg;
            succ += rec.success ? 1 : 0;
        }
        row.trials = static_cast<int>(nm.size());
        double total = 0.0;
        for (double v : nm) total += v;
        row.mean_nmse = total / row.trials;
        std::sort(nm.begin(), nm.end());
        row.median_nmse = nm.size() % 2 == 1 ? nm[nm.size() / 2]
                                             : 0.5 * (nm[nm.size() / 2 - 1] + nm[nm.size() / 2]);
        row.recovery = static_cast<double>(succ) / row.trials;
        row.rmse_deg = std::sqrt(sq / row.trials);
    }
    return rows;
}

} // namespace wlidoa

#endif // WLIDOA_HARNESS_HPP

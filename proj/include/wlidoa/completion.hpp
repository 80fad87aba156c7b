///
/// \file completion.hpp
///
/// Missing-sample recovery by weighted nuclear-norm minimization. The main
/// solver is an SVD-free bilinear ADMM over the factorization
/// W_L H(g) W_R^T = S R^H; identity weights give the unweighted EMaC/DEMaC
/// programs, and the block mode completes T snapshots jointly through the
/// horizontal block-Hankel lifting.
///
/// A singular-value soft-thresholding reference solver for the penalized
/// convex form is provided as an independent cross-check on small instances.
///
#ifndef WLIDOA_COMPLETION_HPP
#define WLIDOA_COMPLETION_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "wlidoa/array_model.hpp"
#include "wlidoa/lifting.hpp"
#include "wlidoa/types.hpp"
#include "wlidoa/weights.hpp"

namespace wlidoa {

struct AdmmConfig {
    double rho = 1e3;    ///< augmented-Lagrangian penalty; larger aids convergence
    double gamma = 1e5;  ///< data-fit penalty; >= 1e4 recommended in noise
    int iters = 2000;
    int rank = 4;        ///< factor width r for S, R
    double tol = 1e-8;   ///< stop when the factorization residual falls below
    std::uint64_t seed = 0;
};

struct TracePoint {
    double feas = 0.0; ///< ||W_L H(g) W_R^T - S R^H||_F (objective for the reference solver)
    double data = 0.0; ///< ||P_Omega(g) - y_obs||_F
};

struct CompletionResult {
    ComplexMatrix y_hat;            ///< N x T completed samples (T = 1 columns for vectors)
    std::vector<TracePoint> trace;
    int final_rank_estimate = 0;
    int iterations_run = 0;
    double max_multiplier_norm = 0.0;
};

/// ||y_true - y_hat||^2 / ||y_true||^2.
inline double nmse(const ComplexMatrix& y_true, const ComplexMatrix& y_hat)
{
    detail::check(y_true.rows() == y_hat.rows() && y_true.cols() == y_hat.cols(),
                  "nmse: shape mismatch");
    const double denom = y_true.squaredNorm();
    if (denom == 0.0) {
        throw UndefinedMetricError("nmse: zero ground truth");
    }
    return (y_true - y_hat).squaredNorm() / denom;
}

namespace detail {

/// Shared ADMM over T horizontally concatenated per-snapshot lifts. The
/// per-snapshot spec is hankel or double-hankel; col_w holds one squared
/// weight vector per snapshot.
inline CompletionResult admm_core(const ComplexMatrix& y_obs, const IndexSet& omega,
                                  const LiftingSpec& per_snapshot, const RealVector& row_w,
                                  const std::vector<RealVector>& col_w, const AdmmConfig& cfg)
{
    per_snapshot.validate();
    const int N = per_snapshot.n;
    const int T = static_cast<int>(y_obs.cols());
    const int rows = per_snapshot.rows();
    const int cpb = per_snapshot.cols();
    const int cols = T * cpb;
    validate_omega(omega, N);
    check(static_cast<int>(omega.size()) == y_obs.rows(), "admm: |omega| != observation rows");
    check(row_w.size() == rows, "admm: left weight length mismatch");
    check(static_cast<int>(col_w.size()) == T, "admm: need one right weight vector per snapshot");
    for (const auto& w : col_w) {
        check(w.size() == cpb, "admm: right weight length mismatch");
    }
    check(cfg.rank >= 1, "invalid-rank: factor width must be positive");
    check(cfg.rank <= std::min(rows, cols),
          "invalid-rank: factor width exceeds min(d, d')");
    check(cfg.rho > 0.0 && cfg.gamma > 0.0, "admm: rho and gamma must be positive");

    const RealVector wl = row_w.cwiseSqrt();
    RealVector wr(cols);
    for (int t = 0; t < T; ++t) {
        wr.segment(t * cpb, cpb) = col_w[t].cwiseSqrt();
    }
    for (int i = 0; i < wl.size(); ++i) {
        if (!(wl(i) > 0.0)) {
            throw DegenerateWeightsError("admm: left weights must be strictly positive");
        }
    }
    for (int j = 0; j < wr.size(); ++j) {
        if (!(wr(j) > 0.0)) {
            throw DegenerateWeightsError("admm: right weights must be strictly positive");
        }
    }

    const ComplexMatrix y_full = embed(y_obs, omega, N);
    std::vector<bool> observed(N, false);
    for (int idx : omega) {
        observed[idx - 1] = true;
    }

    auto lift_all = [&](const ComplexMatrix& g) {
        ComplexMatrix x(rows, cols);
        for (int t = 0; t < T; ++t) {
            x.middleCols(t * cpb, cpb) = lift(per_snapshot, g.col(t));
        }
        return x;
    };
    auto adjoint_all = [&](const ComplexMatrix& m) {
        ComplexMatrix g(N, T);
        for (int t = 0; t < T; ++t) {
            g.col(t) = adjoint(per_snapshot, m.middleCols(t * cpb, cpb));
        }
        return g;
    };
    auto weighted = [&](const ComplexMatrix& m) {
        return ComplexMatrix(wl.asDiagonal() * m * wr.asDiagonal());
    };
    auto unweighted = [&](const ComplexMatrix& m) {
        return ComplexMatrix(wl.cwiseInverse().asDiagonal() * m *
                             wr.cwiseInverse().asDiagonal());
    };

    ComplexMatrix g = y_full;
    ComplexMatrix x = weighted(lift_all(g));
    const int r = cfg.rank;
    Eigen::BDCSVD<ComplexMatrix> init_svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector sqrt_sv = init_svd.singularValues().head(r).cwiseSqrt();
    ComplexMatrix s = init_svd.matrixU().leftCols(r) * sqrt_sv.asDiagonal();
    ComplexMatrix rr = init_svd.matrixV().leftCols(r) * sqrt_sv.asDiagonal();
    ComplexMatrix lambda = ComplexMatrix::Zero(rows, cols);

    const double rho = cfg.rho;
    const double gam = cfg.gamma;
    CompletionResult res;
    res.trace.reserve(cfg.iters);
    const ComplexMatrix eye = ComplexMatrix::Identity(r, r);

    int it = 0;
    for (; it < cfg.iters; ++it) {
        const ComplexMatrix b = s * rr.adjoint() - lambda;
        const ComplexMatrix back = adjoint_all(unweighted(b));
        const ComplexMatrix zsrc = adjoint_all(b);
        for (int t = 0; t < T; ++t) {
            for (int n = 0; n < N; ++n) {
                g(n, t) = observed[n] ? (gam * y_full(n, t) + rho * zsrc(n, t)) / (gam + rho)
                                      : back(n, t);
            }
        }
        x = weighted(lift_all(g));
        const ComplexMatrix f = rho * (x + lambda);
        s = f * rr * (eye + rho * (rr.adjoint() * rr)).llt().solve(eye);
        rr = f.adjoint() * s * (eye + rho * (s.adjoint() * s)).llt().solve(eye);
        const ComplexMatrix resid = x - s * rr.adjoint();
        lambda += resid;

        TracePoint tp;
        tp.feas = resid.norm();
        tp.data = (project(g, omega) - y_obs).norm();
        res.trace.push_back(tp);
        res.max_multiplier_norm = std::max(res.max_multiplier_norm, lambda.norm());

        if (!g.allFinite()) {
            throw DivergenceError("admm: non-finite iterate at iteration " +
                                  std::to_string(it + 1));
        }
        if (tp.feas < cfg.tol) {
            ++it;
            break;
        }
    }

    res.y_hat = g;
    res.iterations_run = it;
    const RealVector fs =
        Eigen::BDCSVD<ComplexMatrix>(ComplexMatrix(s * rr.adjoint())).singularValues();
    int k = 0;
    while (k < fs.size() && fs(k) > 1e-8 * fs(0)) {
        ++k;
    }
    res.final_rank_estimate = k;
    return res;
}

} // namespace detail

/// Completes a single snapshot through the hankel or double-hankel lifting.
inline CompletionResult admm_complete(const ComplexVector& y_obs, const IndexSet& omega,
                                      const LiftingSpec& spec, const WeightPair& weights,
                                      const AdmmConfig& cfg)
{
    detail::check(spec.kind != LiftKind::block_hankel,
                  "admm_complete: use admm_complete_block for block-hankel");
    return detail::admm_core(y_obs, omega, spec, weights.w_left, {weights.w_right}, cfg);
}

/// Joint completion of T snapshots sharing one observation mask. Only the
/// d_t = 1 block arrangement is supported: the lifted matrix is the
/// horizontal concatenation [H(y_1) ... H(y_T)], the left weight is common
/// and the per-snapshot right weights form the block diagonal.
inline CompletionResult admm_complete_block(const ComplexMatrix& y_obs, const IndexSet& omega,
                                            const LiftingSpec& spec,
                                            const std::vector<WeightPair>& weights,
                                            const AdmmConfig& cfg)
{
    detail::check(spec.kind == LiftKind::block_hankel, "admm_complete_block: spec must be block-hankel");
    detail::check(spec.d_t == 1, "admm_complete_block: only d_t = 1 is supported");
    detail::check(spec.t == static_cast<int>(y_obs.cols()),
                  "admm_complete_block: snapshot count mismatch");
    detail::check(!weights.empty(), "admm_complete_block: need at least one weight pair");
    detail::check(weights.size() == 1 || static_cast<int>(weights.size()) == spec.t,
                  "admm_complete_block: need 1 or T weight pairs");
    const LiftingSpec per = LiftingSpec::hankel(spec.n, spec.d);
    // one left weight matrix exists in the d_t = 1 arrangement; per-snapshot
    // designs are averaged (they coincide for a shared mask)
    RealVector row_w = RealVector::Zero(per.rows());
    for (const auto& w : weights) {
        row_w += w.w_left;
    }
    row_w /= static_cast<double>(weights.size());
    std::vector<RealVector> col_w;
    col_w.reserve(spec.t);
    for (int t = 0; t < spec.t; ++t) {
        col_w.push_back(weights[std::min<std::size_t>(t, weights.size() - 1)].w_right);
    }
    return detail::admm_core(y_obs, omega, per, row_w, col_w, cfg);
}

/// Reference solver: minimizes the penalized convex surrogate
///
///   lambda ||X||_* + (1/2) ||X - W_L H(g) W_R^H||_F^2 + (1/2) ||P_Omega(g) - y||_2^2
///
/// by exact alternating minimization (singular-value soft-thresholding in X,
/// a diagonal least-squares step in g). The joint objective is convex, so the
/// recorded trace is non-increasing; minimizing over X first recovers the
/// Moreau-smoothed form of the weighted nuclear-norm objective, which for
/// small lambda matches the constrained program the ADMM solves. A geometric
/// lambda continuation precedes the recorded fixed-lambda iterations to avoid
/// slow starts on masks with long unobserved runs. Intended for small
/// instances (N <= 31).
inline CompletionResult prox_nuclear_reference(const ComplexVector& y_obs, const IndexSet& omega,
                                               const LiftingSpec& spec, const WeightPair& weights,
                                               double lambda, int iters)
{
    spec.validate();
    detail::check(spec.kind != LiftKind::block_hankel,
                  "prox_nuclear_reference: single-snapshot liftings only");
    const int N = spec.n;
    validate_omega(omega, N);
    const RealVector wl = weights.diag_left();
    const RealVector wr = weights.diag_right();

    const ComplexVector y_full = embed(y_obs, omega, N);
    std::vector<bool> observed(N, false);
    for (int idx : omega) {
        observed[idx - 1] = true;
    }

    // s_n = sum over cells of sample n of (wl_i wr_j)^2; q accumulates the
    // matching weighted sums of the X iterate.
    const auto bas = basis(spec);
    RealVector s_coef = RealVector::Zero(N);
    for (const auto& b : bas) {
        for (const auto& [i, j] : b.support) {
            s_coef(b.index - 1) += wl(i) * wl(i) * wr(j) * wr(j);
        }
    }

    ComplexVector g = y_full;
    auto weighted_lift = [&](const ComplexVector& v) {
        return ComplexMatrix(wl.asDiagonal() * lift(spec, v) * wr.asDiagonal());
    };
    auto step = [&](ComplexVector& gv, double lam, double* obj) {
        const ComplexMatrix xw = weighted_lift(gv);
        Eigen::JacobiSVD<ComplexMatrix> svd(xw, Eigen::ComputeThinU | Eigen::ComputeThinV);
        RealVector sh = (svd.singularValues().array() - lam).max(0.0);
        const ComplexMatrix x =
            svd.matrixU() * sh.asDiagonal() * svd.matrixV().adjoint();
        ComplexVector q = ComplexVector::Zero(N);
        for (const auto& b : bas) {
            for (const auto& [i, j] : b.support) {
                q(b.index - 1) += wl(i) * wr(j) * x(i, j);
            }
        }
        for (int n = 0; n < N; ++n) {
            const double obs = observed[n] ? 1.0 : 0.0;
            gv(n) = (obs * y_full(n) + q(n)) / (obs + s_coef(n));
        }
        if (obj != nullptr) {
            const ComplexMatrix xw2 = weighted_lift(gv);
            *obj = lam * sh.sum() + 0.5 * (x - xw2).squaredNorm() +
                   0.5 * (project(gv, omega) - y_obs).squaredNorm();
        }
    };

    const double sigma1 =
        Eigen::JacobiSVD<ComplexMatrix>(weighted_lift(g)).singularValues()(0);
    if (sigma1 > 0.0 && 0.25 * sigma1 > lambda) {
        const int stages = 10;
        const int inner = std::max(50, iters / 20);
        const double ratio = std::pow(lambda / (0.25 * sigma1), 1.0 / stages);
        double lam = 0.25 * sigma1;
        for (int st = 0; st < stages - 1; ++st) {
            for (int k = 0; k < inner; ++k) {
                step(g, lam, nullptr);
            }
            lam *= ratio;
        }
    }

    CompletionResult res;
    res.trace.reserve(iters);
    for (int it = 0; it < iters; ++it) {
        double obj = 0.0;
        step(g, lambda, &obj);
        TracePoint tp;
        tp.feas = obj;
        tp.data = (project(g, omega) - y_obs).norm();
        res.trace.push_back(tp);
    }
    res.y_hat = g;
    res.iterations_run = iters;
    const RealVector fs = Eigen::JacobiSVD<ComplexMatrix>(weighted_lift(g)).singularValues();
    int k = 0;
    while (k < fs.size() && fs(k) > 1e-8 * fs(0)) {
        ++k;
    }
    res.final_rank_estimate = k;
    return res;
}

} // namespace wlidoa

#endif // WLIDOA_COMPLETION_HPP

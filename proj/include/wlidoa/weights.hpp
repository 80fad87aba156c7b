///
/// \file weights.hpp
///
/// Diagonal weight design for the weighted lifted completion. A WeightPair
/// stores the squared diagonals (w_L, w_R); the actual weight matrices are
/// W_L = diag(sqrt(w_L)), W_R = diag(sqrt(w_R)).
///
/// Designed pairs live on the probability simplex and are epsilon-floored so
/// the solver can invert them; the identity pair (all-ones squared diagonals,
/// i.e. W = I) selects the unweighted EMaC/DEMaC program and deliberately
/// skips the simplex normalization.
///
#ifndef WLIDOA_WEIGHTS_HPP
#define WLIDOA_WEIGHTS_HPP

#include <cmath>
#include <vector>

#include "wlidoa/lifting.hpp"
#include "wlidoa/lp.hpp"
#include "wlidoa/types.hpp"

namespace wlidoa {

struct WeightPair {
    RealVector w_left;   ///< squared diagonals of W_L, length = lifted rows
    RealVector w_right;  ///< squared diagonals of W_R, length = lifted cols
    double floor = 0.0;  ///< epsilon mixed toward uniform

    static WeightPair identity(const LiftingSpec& spec)
    {
        WeightPair p;
        p.w_left = RealVector::Ones(spec.rows());
        p.w_right = RealVector::Ones(spec.cols());
        return p;
    }

    RealVector diag_left() const { return w_left.cwiseSqrt(); }
    RealVector diag_right() const { return w_right.cwiseSqrt(); }

    bool is_identity() const
    {
        return (w_left.array() == 1.0).all() && (w_right.array() == 1.0).all();
    }
};

namespace detail {

/// Per-sample squared row/column masses of the basis matrices:
/// row_mass[n](i) = sum_j |A_n(i,j)|^2 and likewise for columns. These are the
/// coefficients making ||W_L A_n||_F^2 linear in the squared diagonals.
struct BasisMass {
    std::vector<RealVector> row_mass;
    std::vector<RealVector> col_mass;
    int rows = 0;
    int cols = 0;
};

inline BasisMass basis_mass(const LiftingSpec& spec)
{
    BasisMass bm;
    bm.rows = spec.rows();
    bm.cols = spec.cols();
    const auto bas = basis(spec);
    bm.row_mass.reserve(bas.size());
    bm.col_mass.reserve(bas.size());
    for (const auto& b : bas) {
        RealVector rm = RealVector::Zero(bm.rows);
        RealVector cm = RealVector::Zero(bm.cols);
        const double v2 = b.value * b.value;
        for (const auto& [i, j] : b.support) {
            rm(i) += v2;
            cm(j) += v2;
        }
        bm.row_mass.push_back(std::move(rm));
        bm.col_mass.push_back(std::move(cm));
    }
    return bm;
}

inline std::vector<int> missing_indices(int n, const IndexSet& omega)
{
    std::vector<bool> obs(n + 1, false);
    for (int idx : omega) {
        obs[idx] = true;
    }
    std::vector<int> out;
    for (int i = 1; i <= n; ++i) {
        if (!obs[i]) {
            out.push_back(i);
        }
    }
    return out;
}

inline RealVector floor_mix(const RealVector& w, double eps)
{
    const double len = static_cast<double>(w.size());
    return (1.0 - eps) * w + (eps / len) * RealVector::Ones(w.size());
}

inline RealVector uniform_over_argmin(const RealVector& v)
{
    const double m = v.minCoeff();
    RealVector w = RealVector::Zero(v.size());
    int ties = 0;
    for (int i = 0; i < v.size(); ++i) {
        if (v(i) <= m + 1e-12) {
            ++ties;
        }
    }
    for (int i = 0; i < v.size(); ++i) {
        if (v(i) <= m + 1e-12) {
            w(i) = 1.0 / ties;
        }
    }
    return w;
}

} // namespace detail

/// Diagonals of the Gram matrices G_L = sum_{n not in omega} A_n A_n^T and
/// G_R = sum_{n not in omega} A_n^T A_n.
inline std::pair<RealVector, RealVector> gram_diagonals(const LiftingSpec& spec,
                                                        const IndexSet& omega)
{
    validate_omega(omega, spec.n);
    const auto bm = detail::basis_mass(spec);
    RealVector dl = RealVector::Zero(bm.rows);
    RealVector dr = RealVector::Zero(bm.cols);
    for (int n : detail::missing_indices(spec.n, omega)) {
        dl += bm.row_mass[n - 1];
        dr += bm.col_mass[n - 1];
    }
    return {dl, dr};
}

/// Closed-form surrogate design: uniform mass on the argmin set of each Gram
/// diagonal, then an epsilon mix toward uniform. All-zero diagonals (fully
/// observed) fall back to uniform.
inline WeightPair design_weights_surrogate(const LiftingSpec& spec, const IndexSet& omega,
                                           double eps = 0.05)
{
    detail::check(eps >= 0.0 && eps < 1.0, "weights: floor must lie in [0,1)");
    auto [dl, dr] = gram_diagonals(spec, omega);
    WeightPair p;
    p.w_left = detail::floor_mix(detail::uniform_over_argmin(dl), eps);
    p.w_right = detail::floor_mix(detail::uniform_over_argmin(dr), eps);
    p.floor = eps;
    return p;
}

/// Value of the minimax design objective
/// sum_{n not in omega} max(||W_L A_n||_F^2, ||W_R A_n^T||_F^2).
inline double weight_design_objective(const LiftingSpec& spec, const IndexSet& omega,
                                      const WeightPair& weights)
{
    const auto bm = detail::basis_mass(spec);
    double total = 0.0;
    for (int n : detail::missing_indices(spec.n, omega)) {
        const double l = bm.row_mass[n - 1].dot(weights.w_left);
        const double r = bm.col_mass[n - 1].dot(weights.w_right);
        total += std::max(l, r);
    }
    return total;
}

/// Minimax design: linear program in epigraph form, one auxiliary variable
/// per missing sample, solved by primal simplex; the optimum is then
/// epsilon-floored.
inline WeightPair design_weights_minimax(const LiftingSpec& spec, const IndexSet& omega,
                                         double eps = 0.05)
{
    detail::check(eps >= 0.0 && eps < 1.0, "weights: floor must lie in [0,1)");
    const auto bm = detail::basis_mass(spec);
    const auto miss = detail::missing_indices(spec.n, omega);
    const int rows = bm.rows;
    const int cols = bm.cols;
    WeightPair p;
    p.floor = eps;
    if (miss.empty()) {
        p.w_left = detail::floor_mix(RealVector::Ones(rows) / rows, eps);
        p.w_right = detail::floor_mix(RealVector::Ones(cols) / cols, eps);
        return p;
    }
    const int nm = static_cast<int>(miss.size());
    const int nv = rows + cols + nm;
    SimplexLp lp(nv);
    for (int k = 0; k < nm; ++k) {
        const int n = miss[k];
        RealVector rl = RealVector::Zero(nv);
        rl.segment(0, rows) = bm.row_mass[n - 1];
        rl(rows + cols + k) = -1.0;
        lp.add_le(rl, 0.0);
        RealVector rr = RealVector::Zero(nv);
        rr.segment(rows, cols) = bm.col_mass[n - 1];
        rr(rows + cols + k) = -1.0;
        lp.add_le(rr, 0.0);
    }
    RealVector eq_l = RealVector::Zero(nv);
    eq_l.segment(0, rows).setOnes();
    lp.add_eq(eq_l, 1.0);
    RealVector eq_r = RealVector::Zero(nv);
    eq_r.segment(rows, cols).setOnes();
    lp.add_eq(eq_r, 1.0);
    RealVector cost = RealVector::Zero(nv);
    cost.tail(nm).setOnes();
    const LpResult res = lp.minimize(cost);
    if (!res.optimal) {
        throw std::runtime_error("weight design LP did not reach optimality");
    }
    p.w_left = detail::floor_mix(res.x.segment(0, rows), eps);
    p.w_right = detail::floor_mix(res.x.segment(rows, cols), eps);
    return p;
}

/// Per-snapshot designs for the block lifting; identical masks give
/// identical pairs.
inline std::vector<WeightPair> design_weights_block(const LiftingSpec& per_snapshot,
                                                    const std::vector<IndexSet>& omega_per_snapshot,
                                                    double eps = 0.05)
{
    std::vector<WeightPair> out;
    out.reserve(omega_per_snapshot.size());
    for (const auto& om : omega_per_snapshot) {
        out.push_back(design_weights_minimax(per_snapshot, om, eps));
    }
    return out;
}

} // namespace wlidoa

#endif // WLIDOA_WEIGHTS_HPP

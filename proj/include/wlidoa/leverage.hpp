///
/// \file leverage.hpp
///
/// Weighted leverage scores of a lifted matrix. For the reduced singular
/// subspaces U, V of W_L M W_R^H at numerical rank Ktilde,
///
///   mu_n = (N / Ktilde) * max(||P_U(A_n)||_F^2, ||P_V(A_n)||_F^2)
///
/// with the oblique projections P_U(Y) = W_L^H U (U^H W_L W_L^H U)^{-1} U^H W_L Y
/// and P_V(Y) = Y W_R^H V (V^H W_R W_R^H V)^{-1} V^H W_R. The scores are
/// invariant to a global scaling of the weight pair.
///
#ifndef WLIDOA_LEVERAGE_HPP
#define WLIDOA_LEVERAGE_HPP

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "wlidoa/lifting.hpp"
#include "wlidoa/types.hpp"
#include "wlidoa/weights.hpp"

namespace wlidoa {

struct LeverageOptions {
    double rank_tol = 1e-8; ///< singular values above rank_tol * sigma_1 count
    int k_fixed = 0;        ///< when > 0, use this rank instead of the tolerance
    bool use_elbow = false; ///< pick the largest singular-value ratio gap
};

struct LeverageReport {
    RealVector mu;   ///< one score per basis element (length N, or N*T for block)
    int k_tilde = 0;
    double beta = 0.0;   ///< (N/Ktilde) * max(1/||U^H||^2, 1/||V^H||^2)
    bool bound_ok = false; ///< sum_n mu_n * Ktilde / N <= 4 log N
};

namespace detail {

inline int numerical_rank(const RealVector& sv, const LeverageOptions& opts)
{
    if (sv.size() == 0 || sv(0) <= 0.0) {
        return 0;
    }
    if (opts.k_fixed > 0) {
        return std::min<int>(opts.k_fixed, static_cast<int>(sv.size()));
    }
    if (opts.use_elbow) {
        int best = 1;
        double best_ratio = 0.0;
        for (int i = 0; i + 1 < sv.size(); ++i) {
            if (sv(i + 1) <= 0.0) {
                return i + 1;
            }
            const double ratio = sv(i) / sv(i + 1);
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best = i + 1;
            }
        }
        return best;
    }
    int k = 0;
    while (k < sv.size() && sv(k) > opts.rank_tol * sv(0)) {
        ++k;
    }
    return k;
}

} // namespace detail

/// Computes the weighted leverage scores of the lifted matrix m under the
/// given weight pair. Throws DegenerateWeightsError when one of the Gram
/// matrices in the projections is numerically singular.
inline LeverageReport leverage_scores(const LiftingSpec& spec, const ComplexMatrix& m,
                                      const WeightPair& weights,
                                      const LeverageOptions& opts = {})
{
    spec.validate();
    detail::check(m.rows() == spec.rows() && m.cols() == spec.cols(),
                  "leverage: matrix shape does not match spec");
    const RealVector wl = weights.diag_left();
    const RealVector wr = weights.diag_right();
    detail::check(wl.size() == m.rows() && wr.size() == m.cols(),
                  "leverage: weight lengths do not match lifted shape");

    const ComplexMatrix weighted = wl.asDiagonal() * m * wr.asDiagonal();
    Eigen::JacobiSVD<ComplexMatrix> svd(weighted, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector sv = svd.singularValues();
    const int kt = detail::numerical_rank(sv, opts);

    LeverageReport rep;
    const auto bas = basis(spec);
    const double big_n = static_cast<double>(bas.size());
    rep.mu = RealVector::Zero(static_cast<int>(bas.size()));
    rep.k_tilde = kt;
    if (kt == 0) {
        rep.beta = 0.0;
        rep.bound_ok = true;
        return rep;
    }
    const ComplexMatrix U = svd.matrixU().leftCols(kt);
    const ComplexMatrix V = svd.matrixV().leftCols(kt);

    const ComplexMatrix WLU = wl.asDiagonal() * U; // W_L^H U, diagonals real
    const ComplexMatrix WRV = wr.asDiagonal() * V;
    const ComplexMatrix GU = WLU.adjoint() * WLU;  // U^H W_L W_L^H U
    const ComplexMatrix GV = WRV.adjoint() * WRV;

    auto invert_gram = [](const ComplexMatrix& g, const char* side) {
        Eigen::JacobiSVD<ComplexMatrix> gs(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const RealVector s = gs.singularValues();
        if (s(0) <= 0.0 || s(s.size() - 1) < 1e-13 * s(0)) {
            throw DegenerateWeightsError(std::string("leverage: singular Gram matrix on the ") +
                                         side + " side");
        }
        return ComplexMatrix(g.inverse());
    };
    const ComplexMatrix MU = WLU * invert_gram(GU, "left") * WLU.adjoint();
    const ComplexMatrix MV = WRV * invert_gram(GV, "right") * WRV.adjoint();

    // ||M_U A_n||_F^2 = sum over support cells (i,j) of value^2 * ||M_U col i||^2,
    // since every column of A_n holds at most one nonzero; likewise columns.
    const RealVector ucol = MU.colwise().squaredNorm();
    const RealVector vrow = MV.rowwise().squaredNorm();
    for (std::size_t b = 0; b < bas.size(); ++b) {
        const double v2 = bas[b].value * bas[b].value;
        double pu = 0.0;
        double pv = 0.0;
        for (const auto& [i, j] : bas[b].support) {
            pu += v2 * ucol(i);
            pv += v2 * vrow(j);
        }
        rep.mu(static_cast<int>(b)) = (big_n / kt) * std::max(pu, pv);
    }

    const double nu = Eigen::JacobiSVD<ComplexMatrix>(U).singularValues()(0);
    const double nv = Eigen::JacobiSVD<ComplexMatrix>(V).singularValues()(0);
    rep.beta = (big_n / kt) * std::max(1.0 / (nu * nu), 1.0 / (nv * nv));
    rep.bound_ok = rep.mu.sum() * kt / big_n <= 4.0 * std::log(big_n) + 1e-9;
    return rep;
}

/// Proposition-1 scalar alone.
inline double beta(const LiftingSpec& spec, const ComplexMatrix& m, const WeightPair& weights,
                   const LeverageOptions& opts = {})
{
    return leverage_scores(spec, m, weights, opts).beta;
}

} // namespace wlidoa

#endif // WLIDOA_LEVERAGE_HPP

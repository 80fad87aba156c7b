///
/// \file lp.hpp
///
/// Dense two-phase primal simplex for the small linear programs arising in
/// weight design (at most a few hundred variables). Bland's rule is used
/// throughout, so the method terminates despite the degenerate zero
/// right-hand sides of the epigraph constraints.
///
#ifndef WLIDOA_LP_HPP
#define WLIDOA_LP_HPP

#include <limits>
#include <vector>

#include "wlidoa/types.hpp"

namespace wlidoa {

struct LpResult {
    RealVector x;
    double objective = 0.0;
    bool optimal = false;
};

/// minimize c^T x  subject to  A_le x <= b_le,  A_eq x == b_eq,  x >= 0.
class SimplexLp {
public:
    explicit SimplexLp(int nvars) : nvars_(nvars) {}

    void add_le(const RealVector& row, double rhs)
    {
        le_rows_.push_back(row);
        le_rhs_.push_back(rhs);
    }

    void add_eq(const RealVector& row, double rhs)
    {
        eq_rows_.push_back(row);
        eq_rhs_.push_back(rhs);
    }

    LpResult minimize(const RealVector& cost, double tol = 1e-9) const
    {
        const int m_le = static_cast<int>(le_rows_.size());
        const int m_eq = static_cast<int>(eq_rows_.size());
        const int m = m_le + m_eq;
        const int n_slack = m_le;
        const int n_art = m;  // artificial per row keeps phase 1 start trivial
        const int n = nvars_ + n_slack + n_art;

        RealMatrix tab = RealMatrix::Zero(m, n + 1);
        std::vector<int> basis(m);
        for (int i = 0; i < m_le; ++i) {
            tab.row(i).head(nvars_) = le_rows_[i].transpose();
            tab(i, n) = le_rhs_[i];
            tab(i, nvars_ + i) = 1.0;
        }
        for (int i = 0; i < m_eq; ++i) {
            tab.row(m_le + i).head(nvars_) = eq_rows_[i].transpose();
            tab(m_le + i, n) = eq_rhs_[i];
        }
        for (int i = 0; i < m; ++i) {
            if (tab(i, n) < 0.0) {
                tab.row(i) *= -1.0;
            }
            tab(i, nvars_ + n_slack + i) = 1.0;
            basis[i] = nvars_ + n_slack + i;
        }

        // phase 1: minimize the artificial sum
        RealVector cost1 = RealVector::Zero(n);
        cost1.tail(n_art).setOnes();
        RealVector obj = reduced_costs(tab, basis, cost1, n);
        if (!iterate(tab, basis, obj, nvars_ + n_slack + n_art, tol)) {
            return {};
        }
        double art_value = 0.0;
        for (int i = 0; i < m; ++i) {
            if (basis[i] >= nvars_ + n_slack) {
                art_value += tab(i, n);
            }
        }
        if (art_value > 1e-7) {
            return {}; // infeasible
        }
        // pivot out any artificial still basic at value ~0
        for (int i = 0; i < m; ++i) {
            if (basis[i] < nvars_ + n_slack) {
                continue;
            }
            for (int j = 0; j < nvars_ + n_slack; ++j) {
                if (std::abs(tab(i, j)) > tol) {
                    pivot(tab, basis, i, j, n);
                    break;
                }
            }
        }

        // phase 2 over original variables and slacks only
        RealVector cost2 = RealVector::Zero(n);
        cost2.head(nvars_) = cost;
        obj = reduced_costs(tab, basis, cost2, n);
        if (!iterate(tab, basis, obj, nvars_ + n_slack, tol)) {
            return {};
        }

        LpResult res;
        res.x = RealVector::Zero(nvars_);
        for (int i = 0; i < m; ++i) {
            if (basis[i] < nvars_) {
                res.x(basis[i]) = tab(i, n);
            }
        }
        res.objective = cost.dot(res.x);
        res.optimal = true;
        return res;
    }

private:
    static RealVector reduced_costs(const RealMatrix& tab, const std::vector<int>& basis,
                                    const RealVector& cost, int n)
    {
        RealVector obj(n + 1);
        obj.head(n) = cost;
        obj(n) = 0.0;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const double cb = cost(basis[i]);
            if (cb != 0.0) {
                obj -= cb * tab.row(static_cast<int>(i)).transpose();
            }
        }
        return obj;
    }

    static void pivot(RealMatrix& tab, std::vector<int>& basis, int row, int col, int /*n*/)
    {
        tab.row(row) /= tab(row, col);
        for (int i = 0; i < tab.rows(); ++i) {
            if (i != row && tab(i, col) != 0.0) {
                tab.row(i) -= tab(i, col) * tab.row(row);
            }
        }
        basis[row] = col;
    }

    /// Bland's-rule simplex sweep restricted to columns < ncols_active.
    /// Returns false on an unbounded direction (cannot occur for the weight
    /// design programs, handled defensively).
    static bool iterate(RealMatrix& tab, std::vector<int>& basis, RealVector& obj,
                        int ncols_active, double tol)
    {
        const int m = static_cast<int>(tab.rows());
        const int n = static_cast<int>(tab.cols()) - 1;
        const long max_iter = 200L * (m + n);
        for (long it = 0; it < max_iter; ++it) {
            int col = -1;
            for (int j = 0; j < ncols_active; ++j) {
                if (obj(j) < -tol) {
                    col = j;
                    break;
                }
            }
            if (col < 0) {
                return true;
            }
            int row = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (tab(i, col) > tol) {
                    const double ratio = tab(i, n) / tab(i, col);
                    if (ratio < best - 1e-15 ||
                        (ratio < best + 1e-15 && (row < 0 || basis[i] < basis[row]))) {
                        best = ratio;
                        row = i;
                    }
                }
            }
            if (row < 0) {
                return false;
            }
            const double f = obj(col);
            tab.row(row) /= tab(row, col);
            for (int i = 0; i < m; ++i) {
                if (i != row && tab(i, col) != 0.0) {
                    tab.row(i) -= tab(i, col) * tab.row(row);
                }
            }
            obj -= f * tab.row(row).transpose();
            basis[row] = col;
        }
        return true; // iteration cap; current point is feasible and near-optimal
    }

    int nvars_;
    std::vector<RealVector> le_rows_;
    std::vector<double> le_rhs_;
    std::vector<RealVector> eq_rows_;
    std::vector<double> eq_rhs_;
};

} // namespace wlidoa

#endif // WLIDOA_LP_HPP

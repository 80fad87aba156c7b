///
/// \file lifting.hpp
///
/// Lifting operators that map sample vectors to structured low-rank matrices:
/// Hankel, double-Hankel (column duplication, with an optional
/// reversed-conjugate variant), and block-Hankel for multi-snapshot data.
///
/// A lifting basis {A_n} consists of unit-Frobenius-norm matrices with equal
/// positive entries, pairwise trace-orthogonal, at most one nonzero per
/// column. With the scaling a_n = sqrt(nnz(A_n)) the lifted matrix carries
/// raw sample values (a plain Hankel matrix for the hankel kind) and
/// adjoint(lift(x)) == x. The adjoint here is taken with respect to the
/// multiplicity-weighted inner product <x,y>_c = sum_n c_n conj(x_n) y_n on
/// the sample side, under which lift is an isometry into Frobenius space.
///
#ifndef WLIDOA_LIFTING_HPP
#define WLIDOA_LIFTING_HPP

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "wlidoa/types.hpp"

namespace wlidoa {

enum class LiftKind { hankel, double_hankel, block_hankel };

/// Second block of the double-Hankel lift: verbatim duplication [H(x) H(x)]
/// (the default), or the reversed-conjugate block [H(x) H(Jx~)] used by some
/// double-lifting formulations. The reversed-conjugate variant is not linear
/// over C and therefore has no lifting basis; lift/adjoint still compose to
/// the identity.
enum class DoubleHankelMode { duplicate, conjugate_reflect };

struct LiftingSpec {
    LiftKind kind = LiftKind::hankel;
    int n = 0;  ///< ULA length N
    int d = 0;  ///< pencil parameter (rows per Hankel block)
    int t = 1;  ///< snapshot count (block_hankel only)
    int d_t = 1; ///< temporal pencil parameter (block_hankel only)
    DoubleHankelMode dh_mode = DoubleHankelMode::duplicate;

    static LiftingSpec hankel(int n, int d)
    {
        return LiftingSpec{LiftKind::hankel, n, d, 1, 1, DoubleHankelMode::duplicate};
    }
    static LiftingSpec double_hankel(int n, int d,
                                     DoubleHankelMode mode = DoubleHankelMode::duplicate)
    {
        return LiftingSpec{LiftKind::double_hankel, n, d, 1, 1, mode};
    }
    static LiftingSpec block_hankel(int n, int d, int t, int d_t = 1)
    {
        return LiftingSpec{LiftKind::block_hankel, n, d, t, d_t, DoubleHankelMode::duplicate};
    }

    int rows() const { return d_t * d; }
    int cols_per_block() const
    {
        const int dp = n - d + 1;
        return kind == LiftKind::double_hankel ? 2 * dp : dp;
    }
    int cols() const
    {
        if (kind == LiftKind::block_hankel) {
            return (t - d_t + 1) * (n - d + 1);
        }
        return cols_per_block();
    }

    void validate() const
    {
        detail::check(n >= 1, "lifting: N must be positive");
        detail::check(d >= 1 && d <= n, "lifting: need 1 <= d <= N");
        if (kind == LiftKind::block_hankel) {
            detail::check(t >= 1, "lifting: T must be positive");
            detail::check(d_t >= 1 && d_t <= t, "lifting: need 1 <= d_t <= T");
        }
    }
};

/// Default pencil parameter: square Hankel for odd N.
inline int default_pencil(int n) { return (n + 1) / 2; }

/// Anti-diagonal multiplicity of sample n (1-based) in a d x (N-d+1) Hankel.
inline int hankel_diag_count(int n_total, int d, int n)
{
    const int dp = n_total - d + 1;
    return std::min(std::min(n, d), std::min(dp, n_total - n + 1));
}

/// Number of matrix cells that carry sample n (1-based) for the given spec;
/// equals nnz(A_n) and a_n^2.
inline int diag_count(const LiftingSpec& spec, int n)
{
    detail::check(n >= 1 && n <= spec.n, "diag_count: n out of range");
    const int c = hankel_diag_count(spec.n, spec.d, n);
    switch (spec.kind) {
    case LiftKind::hankel:
        return c;
    case LiftKind::double_hankel:
        if (spec.dh_mode == DoubleHankelMode::conjugate_reflect) {
            return c + hankel_diag_count(spec.n, spec.d, spec.n + 1 - n);
        }
        return 2 * c;
    case LiftKind::block_hankel:
        return c; // per-snapshot count; the temporal factor is applied per (n,t)
    }
    return c;
}

/// One lifting basis matrix: the support cells (0-based row/col), the common
/// nonzero value 1/sqrt(c_n), and the scale a_n = sqrt(c_n).
struct BasisMatrix {
    int index = 0; ///< sample index n, 1-based
    std::vector<std::pair<int, int>> support;
    double value = 0.0;
    double scale = 0.0;
};

namespace detail {

inline void hankel_support(int n_total, int d, int n1b, int col_offset,
                           std::vector<std::pair<int, int>>& out)
{
    const int dp = n_total - d + 1;
    const int i_lo = std::max(0, (n1b - 1) - (dp - 1));
    const int i_hi = std::min(d - 1, n1b - 1);
    for (int i = i_lo; i <= i_hi; ++i) {
        out.emplace_back(i, col_offset + (n1b - 1) - i);
    }
}

} // namespace detail

/// Generates the lifting basis {A_n}. For block_hankel the basis is indexed
/// by the pair (sample n, snapshot t) flattened as n + (t-1)*N, matching the
/// column-major layout of the N x T input.
inline std::vector<BasisMatrix> basis(const LiftingSpec& spec)
{
    spec.validate();
    detail::check(!(spec.kind == LiftKind::double_hankel &&
                    spec.dh_mode == DoubleHankelMode::conjugate_reflect),
                  "basis: the reversed-conjugate double-Hankel variant is not a linear "
                  "lifting and has no basis");
    const int N = spec.n;
    const int d = spec.d;
    const int dp = N - d + 1;
    std::vector<BasisMatrix> out;
    if (spec.kind == LiftKind::block_hankel) {
        const int T = spec.t;
        const int dt = spec.d_t;
        const int dtp = T - dt + 1;
        out.reserve(static_cast<std::size_t>(N) * T);
        for (int t = 1; t <= T; ++t) {
            for (int n = 1; n <= N; ++n) {
                BasisMatrix b;
                b.index = n + (t - 1) * N;
                // snapshot t occupies block cells (r,c) with r+c-1 = t
                const int r_lo = std::max(0, (t - 1) - (dtp - 1));
                const int r_hi = std::min(dt - 1, t - 1);
                std::vector<std::pair<int, int>> cell;
                detail::hankel_support(N, d, n, 0, cell);
                for (int r = r_lo; r <= r_hi; ++r) {
                    const int c = (t - 1) - r;
                    for (const auto& [i, j] : cell) {
                        b.support.emplace_back(r * d + i, c * dp + j);
                    }
                }
                const double cn = static_cast<double>(b.support.size());
                b.value = 1.0 / std::sqrt(cn);
                b.scale = std::sqrt(cn);
                out.push_back(std::move(b));
            }
        }
        return out;
    }
    out.reserve(N);
    for (int n = 1; n <= N; ++n) {
        BasisMatrix b;
        b.index = n;
        detail::hankel_support(N, d, n, 0, b.support);
        if (spec.kind == LiftKind::double_hankel) {
            detail::hankel_support(N, d, n, dp, b.support);
        }
        const double cn = static_cast<double>(b.support.size());
        b.value = 1.0 / std::sqrt(cn);
        b.scale = std::sqrt(cn);
        out.push_back(std::move(b));
    }
    return out;
}

namespace detail {

inline ComplexMatrix hankel_block(const ComplexVector& x, int d)
{
    const int N = static_cast<int>(x.size());
    const int dp = N - d + 1;
    ComplexMatrix m(d, dp);
    for (int j = 0; j < dp; ++j) {
        for (int i = 0; i < d; ++i) {
            m(i, j) = x(i + j);
        }
    }
    return m;
}

/// Accumulates anti-diagonal sums of a d x (N-d+1) block into out (length N).
inline void hankel_accumulate(const Eigen::Ref<const ComplexMatrix>& m, ComplexVector& out)
{
    const int d = static_cast<int>(m.rows());
    const int dp = static_cast<int>(m.cols());
    for (int j = 0; j < dp; ++j) {
        for (int i = 0; i < d; ++i) {
            out(i + j) += m(i, j);
        }
    }
}

} // namespace detail

/// Lifts an N-vector (or N x T matrix for block_hankel) to the structured
/// matrix of the spec.
inline ComplexMatrix lift(const LiftingSpec& spec, const ComplexMatrix& x)
{
    spec.validate();
    const int N = spec.n;
    const int d = spec.d;
    const int dp = N - d + 1;
    if (spec.kind == LiftKind::block_hankel) {
        detail::check(x.rows() == N && x.cols() == spec.t,
                      "lift: expected N x T input for block-hankel");
        const int dt = spec.d_t;
        const int dtp = spec.t - dt + 1;
        ComplexMatrix m(dt * d, dtp * dp);
        for (int r = 0; r < dt; ++r) {
            for (int c = 0; c < dtp; ++c) {
                m.block(r * d, c * dp, d, dp) = detail::hankel_block(x.col(r + c), d);
            }
        }
        return m;
    }
    detail::check(x.rows() == N && x.cols() == 1, "lift: expected length-N vector");
    const ComplexVector v = x.col(0);
    ComplexMatrix h = detail::hankel_block(v, d);
    if (spec.kind == LiftKind::hankel) {
        return h;
    }
    ComplexMatrix m(d, 2 * dp);
    m.leftCols(dp) = h;
    if (spec.dh_mode == DoubleHankelMode::duplicate) {
        m.rightCols(dp) = h;
    } else {
        m.rightCols(dp) = detail::hankel_block(v.reverse().conjugate(), d);
    }
    return m;
}

/// Back projection: entry n is (1/a_n) tr(A_n^T m), the mean over the cells
/// carrying sample n. Satisfies adjoint(lift(x)) == x and the weighted
/// adjoint identity <lift(x), M>_F == <x, adjoint(M)>_c.
inline ComplexMatrix adjoint(const LiftingSpec& spec, const ComplexMatrix& m)
{
    spec.validate();
    const int N = spec.n;
    const int d = spec.d;
    const int dp = N - d + 1;
    detail::check(m.rows() == spec.rows() && m.cols() == spec.cols(),
                  "adjoint: matrix shape does not match spec");
    if (spec.kind == LiftKind::block_hankel) {
        const int dt = spec.d_t;
        const int dtp = spec.t - dt + 1;
        ComplexMatrix out = ComplexMatrix::Zero(N, spec.t);
        RealVector tcnt = RealVector::Zero(spec.t);
        ComplexVector acc(N);
        for (int r = 0; r < dt; ++r) {
            for (int c = 0; c < dtp; ++c) {
                acc.setZero();
                detail::hankel_accumulate(m.block(r * d, c * dp, d, dp), acc);
                out.col(r + c) += acc;
                tcnt(r + c) += 1.0;
            }
        }
        for (int t = 0; t < spec.t; ++t) {
            for (int n = 0; n < N; ++n) {
                out(n, t) /= tcnt(t) * hankel_diag_count(N, d, n + 1);
            }
        }
        return out;
    }
    ComplexVector acc = ComplexVector::Zero(N);
    detail::hankel_accumulate(m.leftCols(dp), acc);
    if (spec.kind == LiftKind::hankel) {
        for (int n = 0; n < N; ++n) {
            acc(n) /= hankel_diag_count(N, d, n + 1);
        }
        return acc;
    }
    if (spec.dh_mode == DoubleHankelMode::duplicate) {
        detail::hankel_accumulate(m.rightCols(dp), acc);
        for (int n = 0; n < N; ++n) {
            acc(n) /= 2 * hankel_diag_count(N, d, n + 1);
        }
        return acc;
    }
    // reversed-conjugate block: sample n appears conjugated on anti-diagonal
    // N+1-n of the second block; average the two estimates by multiplicity.
    ComplexVector acc2 = ComplexVector::Zero(N);
    detail::hankel_accumulate(m.rightCols(dp), acc2);
    ComplexVector out(N);
    for (int n = 0; n < N; ++n) {
        const int rev = N - 1 - n;
        const double c1 = hankel_diag_count(N, d, n + 1);
        const double c2 = hankel_diag_count(N, d, rev + 1);
        out(n) = (acc(n) + std::conj(acc2(rev))) / (c1 + c2);
    }
    return out;
}

} // namespace wlidoa

#endif // WLIDOA_LIFTING_HPP

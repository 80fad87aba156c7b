///
/// \file doa.hpp
///
/// Angle and amplitude extraction from a completed uniform array: a
/// matrix-pencil (signal-subspace shift-invariance) frequency estimator with
/// least-squares amplitudes, a grid-based l1 baseline, and the wrap-around
/// separation utilities.
///
#ifndef WLIDOA_DOA_HPP
#define WLIDOA_DOA_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "wlidoa/array_model.hpp"
#include "wlidoa/lifting.hpp"
#include "wlidoa/types.hpp"

namespace wlidoa {

struct DoaEstimate {
    std::vector<double> taus;   ///< sorted ascending, in (-0.5, 0.5]
    std::vector<double> thetas; ///< degrees; NaN where |tau/spacing| > 1
    std::vector<Complex> amps;
    double residual = 1.0;      ///< ||V b - y|| / ||y||
};

struct GridSpec {
    int resolution = 4096;   ///< number of segments of [-1, 1] in sin(theta)
    double lambda_reg = 0.0; ///< l1 weight; 0 selects the scale-adaptive default
    int iters = 500;
    double amp_floor_rel = 1e-3; ///< report atoms above this fraction of the peak
};

namespace detail {

inline double wrap_tau(double tau)
{
    tau -= std::round(tau);
    if (tau <= -0.5) {
        tau += 1.0;
    }
    return tau;
}

inline double theta_from_tau(double tau, double spacing_ratio)
{
    const double s = tau / spacing_ratio;
    if (std::abs(s) > 1.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::asin(s) * 180.0 / pi;
}

inline ComplexMatrix vandermonde(const std::vector<double>& taus, int n)
{
    ComplexMatrix v(n, static_cast<int>(taus.size()));
    for (std::size_t k = 0; k < taus.size(); ++k) {
        v.col(static_cast<int>(k)) = steering_vector(taus[k], n);
    }
    return v;
}

} // namespace detail

/// Least-squares amplitudes for known frequencies: minimizes ||V(taus) b - y||.
inline std::vector<Complex> amplitudes_ls(const ComplexVector& y, const std::vector<double>& taus)
{
    const int n = static_cast<int>(y.size());
    detail::check(static_cast<int>(taus.size()) <= n, "amplitudes_ls: more sources than samples");
    if (taus.empty()) {
        return {};
    }
    for (std::size_t a = 0; a < taus.size(); ++a) {
        for (std::size_t b = a + 1; b < taus.size(); ++b) {
            if (std::abs(taus[a] - taus[b]) < 1e-12) {
                throw IllConditionedError("amplitudes_ls: duplicate frequencies");
            }
        }
    }
    const ComplexMatrix v = detail::vandermonde(taus, n);
    const ComplexVector b = v.colPivHouseholderQr().solve(y);
    std::vector<Complex> out(b.size());
    for (int i = 0; i < b.size(); ++i) {
        out[static_cast<std::size_t>(i)] = b(i);
    }
    return out;
}

namespace detail {

inline DoaEstimate finalize(const ComplexVector& y, std::vector<double> taus,
                            double spacing_ratio)
{
    std::sort(taus.begin(), taus.end());
    DoaEstimate est;
    est.taus = taus;
    est.amps = amplitudes_ls(y, taus);
    for (double t : taus) {
        est.thetas.push_back(theta_from_tau(t, spacing_ratio));
    }
    const double yn = y.norm();
    if (yn > 0.0) {
        ComplexVector fit = ComplexVector::Zero(y.size());
        if (!taus.empty()) {
            const ComplexMatrix v = vandermonde(taus, static_cast<int>(y.size()));
            for (std::size_t k = 0; k < taus.size(); ++k) {
                fit += est.amps[k] * v.col(static_cast<int>(k));
            }
        }
        est.residual = (fit - y).norm() / yn;
    }
    return est;
}

} // namespace detail

/// Matrix-pencil frequency estimation on a full ULA vector. Forms the Hankel
/// lift, keeps the rank-khat signal subspace (singular values above
/// noise_tol * sigma_1, capped at k_max), and solves the shift-invariance
/// equation for the frequencies exp(-j 2 pi tau). A zero input yields an
/// empty estimate.
inline DoaEstimate matrix_pencil(const ComplexVector& y, int k_max, int pencil_d = 0,
                                 double noise_tol = 1e-8, double spacing_ratio = 0.5)
{
    const int n = static_cast<int>(y.size());
    detail::check(k_max >= 1, "matrix_pencil: k must be positive");
    detail::check(n >= 2 * k_max + 1, "invalid-argument: need N >= 2k + 1");
    const int d = pencil_d > 0 ? pencil_d : default_pencil(n);
    detail::check(d >= 2 && d <= n - 1, "matrix_pencil: pencil parameter out of range");

    const ComplexMatrix h = lift(LiftingSpec::hankel(n, d), y);
    Eigen::BDCSVD<ComplexMatrix> svd(h, Eigen::ComputeThinU);
    const RealVector sv = svd.singularValues();
    int khat = 0;
    while (khat < std::min<int>(k_max, static_cast<int>(sv.size())) &&
           sv(khat) > noise_tol * sv(0)) {
        ++khat;
    }
    if (khat == 0 || sv(0) == 0.0) {
        return detail::finalize(y, {}, spacing_ratio);
    }

    const ComplexMatrix u = svd.matrixU().leftCols(khat);
    const ComplexMatrix u_up = u.topRows(d - 1);
    const ComplexMatrix u_dn = u.bottomRows(d - 1);
    const ComplexMatrix phi = u_up.colPivHouseholderQr().solve(u_dn);
    Eigen::ComplexEigenSolver<ComplexMatrix> eig(phi);
    std::vector<double> taus;
    taus.reserve(khat);
    for (int k = 0; k < khat; ++k) {
        taus.push_back(detail::wrap_tau(-std::arg(eig.eigenvalues()(k)) / (2.0 * pi)));
    }
    return detail::finalize(y, std::move(taus), spacing_ratio);
}

/// Grid-based basis pursuit: min_x lambda ||x||_1 + 0.5 ||A x - y||^2 over the
/// steering dictionary on a uniform sin(theta) grid, solved by monotone FISTA
/// (soft thresholding with acceleration and a descent safeguard). Returns the
/// grid atoms above the amplitude floor.
inline DoaEstimate bp_grid(const ComplexVector& y_obs, const IndexSet& omega, int n,
                           const GridSpec& grid, double spacing_ratio = 0.5)
{
    detail::check(grid.resolution >= 2, "bp_grid: resolution must be >= 2");
    validate_omega(omega, n);
    const int m = static_cast<int>(y_obs.size());
    detail::check(static_cast<int>(omega.size()) == m, "bp_grid: |omega| mismatch");
    const int gsize = grid.resolution;

    std::vector<double> grid_taus(gsize);
    ComplexMatrix a(m, gsize);
    for (int gi = 0; gi < gsize; ++gi) {
        const double sin_theta = -1.0 + 2.0 * (gi + 0.5) / gsize; // segment centers
        grid_taus[gi] = spacing_ratio * sin_theta;
        for (int r = 0; r < m; ++r) {
            const int pos = omega[r] - 1;
            a(r, gi) = std::polar(1.0, -2.0 * pi * grid_taus[gi] * pos);
        }
    }

    DoaEstimate est;
    const double ynorm = y_obs.norm();
    if (ynorm == 0.0) {
        est.residual = 0.0;
        return est;
    }

    const ComplexVector corr = a.adjoint() * y_obs;
    const double lambda =
        grid.lambda_reg > 0.0 ? grid.lambda_reg : 1e-2 * corr.cwiseAbs().maxCoeff();

    // Lipschitz constant of the gradient: ||A||^2 via a few power iterations.
    ComplexVector pv = corr / std::max(corr.norm(), 1e-300);
    double lip = 1.0;
    for (int k = 0; k < 30; ++k) {
        ComplexVector av = a.adjoint() * (a * pv);
        lip = av.norm();
        if (lip == 0.0) {
            break;
        }
        pv = av / lip;
    }
    lip = std::max(lip, 1e-12);
    const double stepsz = 1.0 / lip;

    auto objective = [&](const ComplexVector& v) {
        return lambda * v.cwiseAbs().sum() + 0.5 * (a * v - y_obs).squaredNorm();
    };
    auto shrink = [&](ComplexVector v) {
        for (int i = 0; i < v.size(); ++i) {
            const double mag = std::abs(v(i));
            v(i) = mag <= lambda * stepsz ? Complex(0, 0)
                                          : v(i) * (1.0 - lambda * stepsz / mag);
        }
        return v;
    };

    ComplexVector x = ComplexVector::Zero(gsize);
    ComplexVector momentum = x;
    double t_acc = 1.0;
    double best_obj = objective(x);
    for (int it = 0; it < grid.iters; ++it) {
        const ComplexVector grad = a.adjoint() * (a * momentum - y_obs);
        const ComplexVector cand = shrink(momentum - stepsz * grad);
        const double cand_obj = objective(cand);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc));
        if (cand_obj <= best_obj) {
            momentum = cand + ((t_acc - 1.0) / t_next) * (cand - x);
            x = cand;
            best_obj = cand_obj;
        } else {
            momentum = x + (t_acc / t_next) * (cand - x); // keep the monotone iterate
        }
        t_acc = t_next;
    }

    const double peak = x.cwiseAbs().maxCoeff();
    std::vector<double> taus;
    std::vector<Complex> amps;
    for (int gi = 0; gi < gsize; ++gi) {
        if (std::abs(x(gi)) > grid.amp_floor_rel * peak && peak > 0.0) {
            taus.push_back(grid_taus[gi]);
            amps.push_back(x(gi));
        }
    }
    est.taus = taus;
    est.amps = amps;
    for (double t : taus) {
        est.thetas.push_back(detail::theta_from_tau(t, spacing_ratio));
    }
    ComplexVector fit = ComplexVector::Zero(m);
    for (std::size_t k = 0; k < taus.size(); ++k) {
        for (int r = 0; r < m; ++r) {
            fit(r) += amps[k] * std::polar(1.0, -2.0 * pi * taus[k] * (omega[r] - 1));
        }
    }
    est.residual = (fit - y_obs).norm() / ynorm;
    return est;
}

/// Minimal wrap-around distance: min over distinct pairs and integer q of
/// |sin(theta_i) - sin(theta_j) + q|.
inline double wrap_separation(const std::vector<double>& thetas_deg)
{
    if (thetas_deg.size() < 2) {
        throw UndefinedMetricError("wrap_separation: need at least two angles");
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < thetas_deg.size(); ++i) {
        for (std::size_t j = i + 1; j < thetas_deg.size(); ++j) {
            const double diff =
                std::sin(thetas_deg[i] * pi / 180.0) - std::sin(thetas_deg[j] * pi / 180.0);
            for (int q = -2; q <= 2; ++q) {
                best = std::min(best, std::abs(diff + q));
            }
        }
    }
    return best;
}

/// Separation condition for unique super-resolution: wrap-around distance at
/// least 2.52 / (spacing_ratio * N).
inline bool separation_ok(const std::vector<double>& thetas_deg, int n, double spacing_ratio)
{
    return wrap_separation(thetas_deg) >= 2.52 / (spacing_ratio * n);
}

} // namespace wlidoa

#endif // WLIDOA_DOA_HPP

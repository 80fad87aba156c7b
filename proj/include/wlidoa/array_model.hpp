///
/// \file array_model.hpp
///
/// Array measurement synthesis: steering atoms, source superposition, noise
/// models, projection onto an observed element set, and sampling masks.
///
/// Conventions. Element positions are indexed 0..N-1 inside the steering
/// exponent so the first element carries zero phase; the observed index set
/// omega uses 1-based sample positions. Angles are degrees at the API
/// surface; the normalized frequency tau = spacing_ratio * sin(theta) is the
/// internal coordinate.
///
#ifndef WLIDOA_ARRAY_MODEL_HPP
#define WLIDOA_ARRAY_MODEL_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wlidoa/rng.hpp"
#include "wlidoa/types.hpp"

namespace wlidoa {

struct Source {
    double theta_deg = 0.0;
    Complex amplitude{0.0, 0.0};
};

struct SourceSet {
    std::vector<Source> sources;
    double spacing_ratio = 0.5; ///< element spacing over wavelength, s_d / lambda

    int count() const { return static_cast<int>(sources.size()); }

    double tau(int k) const
    {
        return spacing_ratio * std::sin(sources[k].theta_deg * pi / 180.0);
    }

    std::vector<double> taus() const
    {
        std::vector<double> out(sources.size());
        for (std::size_t k = 0; k < sources.size(); ++k) {
            out[k] = tau(static_cast<int>(k));
        }
        return out;
    }
};

/// How per-element noise amplitude is specified.
enum class NoiseSpec { none, eta, snr_db };

struct ArrayScene {
    int n = 0;               ///< ULA length N
    IndexSet omega;          ///< observed 1-based indices, sorted unique
    NoiseSpec noise = NoiseSpec::none;
    double eta = 0.0;        ///< per-element noise amplitude bound (NoiseSpec::eta)
    double snr_db = 0.0;     ///< SNR in dB (NoiseSpec::snr_db)
    int snapshots = 1;       ///< T
    std::uint64_t seed = 0;

    void validate() const
    {
        detail::check(n >= 1, "scene: N must be positive");
        detail::check(snapshots >= 1, "scene: T must be positive");
        detail::check(static_cast<int>(omega.size()) <= n, "scene: |omega| must be <= N");
        validate_omega(omega, n);
        if (noise == NoiseSpec::eta) {
            detail::check(eta >= 0.0, "scene: eta must be nonnegative");
        }
    }
};

struct Snapshot {
    ComplexMatrix y_full; ///< N x T ground truth (noise-free), if synthesized
    ComplexMatrix y_obs;  ///< M x T observed samples
    ComplexMatrix noise;  ///< N x T realized noise (diagnostic)
    double realized_eta = 0.0; ///< max |e_n| actually drawn
};

/// Phase shift of a source at angle theta (degrees) seen by element n
/// (0-based): exp(-j 2 pi * spacing_ratio * n * sin(theta)). Unit modulus.
inline Complex steering_atom(double theta_deg, int n, double spacing_ratio)
{
    const double phase = -2.0 * pi * spacing_ratio * n * std::sin(theta_deg * pi / 180.0);
    return std::polar(1.0, phase);
}

/// Steering vector over elements 0..N-1 for normalized frequency tau.
inline ComplexVector steering_vector(double tau, int n_elems)
{
    ComplexVector v(n_elems);
    for (int n = 0; n < n_elems; ++n) {
        v(n) = std::polar(1.0, -2.0 * pi * tau * n);
    }
    return v;
}

/// Keeps the entries of y indexed by omega (1-based).
inline ComplexVector project(const ComplexVector& y, const IndexSet& omega)
{
    validate_omega(omega, static_cast<int>(y.size()));
    ComplexVector out(static_cast<int>(omega.size()));
    for (std::size_t i = 0; i < omega.size(); ++i) {
        out(static_cast<int>(i)) = y(omega[i] - 1);
    }
    return out;
}

inline ComplexMatrix project(const ComplexMatrix& y, const IndexSet& omega)
{
    validate_omega(omega, static_cast<int>(y.rows()));
    ComplexMatrix out(static_cast<int>(omega.size()), y.cols());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        out.row(static_cast<int>(i)) = y.row(omega[i] - 1);
    }
    return out;
}

/// Adjoint of project: zero-fills the complement of omega.
inline ComplexVector embed(const ComplexVector& y_obs, const IndexSet& omega, int n)
{
    validate_omega(omega, n);
    detail::check(static_cast<int>(omega.size()) == y_obs.size(),
                  "embed: |omega| must equal observation length");
    ComplexVector out = ComplexVector::Zero(n);
    for (std::size_t i = 0; i < omega.size(); ++i) {
        out(omega[i] - 1) = y_obs(static_cast<int>(i));
    }
    return out;
}

inline ComplexMatrix embed(const ComplexMatrix& y_obs, const IndexSet& omega, int n)
{
    validate_omega(omega, n);
    detail::check(static_cast<int>(omega.size()) == y_obs.rows(),
                  "embed: |omega| must equal observation rows");
    ComplexMatrix out = ComplexMatrix::Zero(n, y_obs.cols());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        out.row(omega[i] - 1) = y_obs.row(static_cast<int>(i));
    }
    return out;
}

/// Uniformly random M-subset of [N], sorted; deterministic for a fixed seed.
inline IndexSet sample_mask_random(int n, int m, std::uint64_t seed)
{
    Rng rng(seed);
    return rng.subset(n, m);
}

/// Independent inclusion of index n with probability
/// p_n = min(1, c * mu_n * K^2 * log^3(N) / N). Used by the leverage-driven
/// phase-transition experiment; may return an empty set.
inline IndexSet sample_mask_leverage(const RealVector& mu, int k_tilde, int n, double c,
                                     std::uint64_t seed)
{
    detail::check(mu.size() == n, "sample_mask_leverage: mu must have length N");
    for (int i = 0; i < n; ++i) {
        detail::check(mu(i) >= 0.0, "sample_mask_leverage: leverage scores must be >= 0");
    }
    Rng rng(seed);
    const double logn = std::log(static_cast<double>(n));
    const double scale = c * k_tilde * k_tilde * logn * logn * logn / n;
    IndexSet out;
    for (int i = 0; i < n; ++i) {
        const double p = std::min(1.0, mu(i) * scale);
        if (rng.uniform() < p) {
            out.push_back(i + 1);
        }
    }
    return out;
}

/// Superposition of the source atoms plus noise over T snapshots.
///
/// Noise: circular complex gaussian. With NoiseSpec::eta the draw is rescaled
/// so the realized max|e_n| equals eta; with NoiseSpec::snr_db the variance is
/// set from SNR = ||y||^2 / (N T sigma^2). When vary_amplitudes is set and
/// T > 1, each snapshot redraws the amplitude phases (magnitudes kept).
inline Snapshot synthesize(const SourceSet& sources, const ArrayScene& scene,
                           bool vary_amplitudes = false)
{
    scene.validate();
    const int N = scene.n;
    const int T = scene.snapshots;
    Rng rng(scene.seed);
    const auto taus = sources.taus();

    ComplexMatrix y = ComplexMatrix::Zero(N, T);
    for (int t = 0; t < T; ++t) {
        for (int k = 0; k < sources.count(); ++k) {
            Complex b = sources.sources[k].amplitude;
            if (vary_amplitudes && T > 1) {
                b = std::abs(b) * std::polar(1.0, 2.0 * pi * rng.uniform());
            }
            const ComplexVector a = steering_vector(taus[k], N);
            y.col(t) += b * a;
        }
    }

    ComplexMatrix e = ComplexMatrix::Zero(N, T);
    if (scene.noise != NoiseSpec::none) {
        for (int t = 0; t < T; ++t) {
            for (int i = 0; i < N; ++i) {
                e(i, t) = rng.complex_gaussian();
            }
        }
        if (scene.noise == NoiseSpec::eta) {
            const double emax = e.cwiseAbs().maxCoeff();
            e *= (scene.eta > 0.0 && emax > 0.0) ? scene.eta / emax : 0.0;
        } else {
            const double sig2 =
                y.squaredNorm() / (static_cast<double>(N) * T * std::pow(10.0, scene.snr_db / 10.0));
            e *= std::sqrt(sig2);
        }
    }

    Snapshot snap;
    snap.y_full = y;
    snap.noise = e;
    snap.realized_eta = e.size() > 0 ? e.cwiseAbs().maxCoeff() : 0.0;
    snap.y_obs = project(ComplexMatrix(y + e), scene.omega);
    return snap;
}

/// Named Table-style scene presets with fixed angles and real amplitudes.
inline SourceSet preset_sources(const std::string& name)
{
    auto mk = [](std::initializer_list<double> th, std::initializer_list<double> am) {
        SourceSet s;
        auto it = am.begin();
        for (double t : th) {
            s.sources.push_back({t, Complex(*it++, 0.0)});
        }
        return s;
    };
    if (name == "table1-a") {
        return mk({-71.56, -34.58, -34.44, -14.58, 8.74, 26.80, 26.92, 48.08},
                  {3.79, 3.06, 3.89, 4.14, 2.18, 2.02, 3.85, 2.18});
    }
    if (name == "table1-b") {
        return mk({-36.17, -22.66, 35.20, 35.48, 35.76, 49.60, 59.66, 60.11, 60.58},
                  {3.07, 2.28, 2.17, 2.18, 3.43, 2.78, 2.46, 3.60, 3.31});
    }
    if (name == "table1-c") {
        return mk({-25.48, -24.04, -22.79, 47.12, 48.83}, {2.66, 2.59, 2.61, 3.75, 2.83});
    }
    if (name == "table1-d") {
        return mk({-30.46, -6.89, 41.29}, {2.62, 3.86, 3.48});
    }
    throw std::invalid_argument("unknown source preset: " + name);
}

} // namespace wlidoa

#endif // WLIDOA_ARRAY_MODEL_HPP

#include <catch2/catch_amalgamated.hpp>

#include "wlidoa/array_model.hpp"
#include "wlidoa/leverage.hpp"

using namespace wlidoa;

namespace {

ComplexVector superpose(const std::vector<double>& taus, const std::vector<Complex>& amps, int n)
{
    ComplexVector y = ComplexVector::Zero(n);
    for (std::size_t k = 0; k < taus.size(); ++k) {
        y += amps[k] * steering_vector(taus[k], n);
    }
    return y;
}

} // namespace

TEST_CASE("identity weights, all-ones vector: mu is N * max(1/d, 1/(N-d+1))")
{
    const auto spec = LiftingSpec::hankel(9, 5);
    const ComplexMatrix h = lift(spec, ComplexVector(ComplexVector::Ones(9)));
    const auto rep = leverage_scores(spec, h, WeightPair::identity(spec));
    REQUIRE(rep.k_tilde == 1);
    for (int n = 0; n < 9; ++n) {
        CHECK(rep.mu(n) == Catch::Approx(1.8).margin(1e-10));
    }
    CHECK(rep.beta == Catch::Approx(9.0).margin(1e-10));
}

TEST_CASE("full-rank identity projections give mu = N / Ktilde")
{
    const int n = 9, d = 4;
    const auto spec = LiftingSpec::hankel(n, d);
    Rng rng(5);
    ComplexVector y(n);
    for (int i = 0; i < n; ++i) {
        y(i) = rng.complex_gaussian();
    }
    const ComplexMatrix h = lift(spec, y);
    LeverageOptions opts;
    opts.k_fixed = d; // full row rank
    const auto rep = leverage_scores(spec, h, WeightPair::identity(spec), opts);
    REQUIRE(rep.k_tilde == d);
    for (int i = 0; i < n; ++i) {
        CHECK(rep.mu(i) == Catch::Approx(static_cast<double>(n) / d).margin(1e-8));
    }
    CHECK(rep.beta == Catch::Approx(static_cast<double>(n) / d).margin(1e-8));
}

TEST_CASE("scores are invariant to weight scaling and input phase")
{
    const int n = 15, d = 8;
    const auto spec = LiftingSpec::hankel(n, d);
    const ComplexVector y = superpose({0.12, -0.31}, {Complex(1.5, 0.3), Complex(0.4, -1.1)}, n);
    const ComplexMatrix h = lift(spec, y);
    const auto omega = sample_mask_random(n, 7, 99);
    const WeightPair w = design_weights_minimax(spec, omega, 0.05);

    const auto rep = leverage_scores(spec, h, w);
    WeightPair scaled = w;
    scaled.w_left *= 3.7;
    scaled.w_right *= 3.7;
    const auto rep2 = leverage_scores(spec, h, scaled);
    CHECK((rep.mu - rep2.mu).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(rep.k_tilde == rep2.k_tilde);

    const ComplexMatrix rotated = std::polar(1.0, 1.234) * h;
    const auto rep3 = leverage_scores(spec, h, w);
    const auto rep4 = leverage_scores(spec, rotated, w);
    CHECK(std::abs(rep3.beta - rep4.beta) < 1e-9);
    CHECK((rep3.mu - rep4.mu).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("Lemma-1 bound holds for designed weights on random instances")
{
    Rng rng(123);
    for (int t = 0; t < 20; ++t) {
        const int n = 21 + 2 * static_cast<int>(rng.uniform_below(11)); // odd, up to 41
        const int k = 1 + static_cast<int>(rng.uniform_below(3));
        const int d = default_pencil(n);
        std::vector<double> taus;
        std::vector<Complex> amps;
        for (int i = 0; i < k; ++i) {
            taus.push_back(-0.5 + rng.uniform());
            amps.push_back(std::polar(1.0 + rng.uniform(), 2 * pi * rng.uniform()));
        }
        const auto spec = LiftingSpec::hankel(n, d);
        const ComplexMatrix h = lift(spec, superpose(taus, amps, n));
        const int m = k + 2 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n / 2)));
        const auto omega = sample_mask_random(n, m, 300 + static_cast<std::uint64_t>(t));
        for (const auto& w : {design_weights_minimax(spec, omega, 0.05),
                              design_weights_surrogate(spec, omega, 0.05)}) {
            LeverageOptions opts;
            opts.k_fixed = k;
            const auto rep = leverage_scores(spec, h, w, opts);
            CHECK(rep.mu.sum() * rep.k_tilde / n <= 4.0 * std::log(n) + 1e-9);
            CHECK(rep.bound_ok);
        }
    }
}

TEST_CASE("Proposition-1 elementwise bound with the same weights")
{
    const int n = 21, d = 11;
    const auto spec = LiftingSpec::hankel(n, d);
    const ComplexVector y = superpose({0.05, 0.27, -0.4}, {Complex(2, 0), Complex(1, 1), Complex(0, -2)}, n);
    const ComplexMatrix h = lift(spec, y);
    const auto omega = sample_mask_random(n, 9, 17);
    const WeightPair w = design_weights_minimax(spec, omega, 0.05);
    LeverageOptions opts;
    opts.k_fixed = 3;
    const auto rep = leverage_scores(spec, h, w, opts);

    // sorted cumulative sums of the squared diagonals up to floor(N / (beta K))
    const int cut = std::max(1, static_cast<int>(std::floor(n / (rep.beta * rep.k_tilde))));
    auto sorted_prefix = [cut](RealVector v) {
        std::sort(v.data(), v.data() + v.size());
        double s = 0.0;
        for (int i = 0; i < std::min<int>(cut, static_cast<int>(v.size())); ++i) {
            s += v(i);
        }
        return s;
    };
    const double denom_l = sorted_prefix(w.w_left);
    const double denom_r = sorted_prefix(w.w_right);
    const auto bas = basis(spec);
    for (int i = 0; i < n; ++i) {
        double left = 0.0, right = 0.0;
        for (const auto& [r, c] : bas[static_cast<std::size_t>(i)].support) {
            const double v2 = bas[static_cast<std::size_t>(i)].value * bas[static_cast<std::size_t>(i)].value;
            left += v2 * w.w_left(r);
            right += v2 * w.w_right(c);
        }
        const double bound = std::max(left / denom_l, right / denom_r);
        CHECK(rep.mu(i) * rep.k_tilde / n <= bound + 1e-9);
    }
}

TEST_CASE("degenerate weights raise the dedicated error")
{
    // Concentrating all left mass on one row collapses the weighted matrix to
    // rank 1; forcing Ktilde = 2 then makes the left Gram singular.
    const auto spec = LiftingSpec::hankel(9, 5);
    const ComplexMatrix h = lift(spec, ComplexVector(ComplexVector::Ones(9)));
    WeightPair w = WeightPair::identity(spec);
    w.w_left.setZero();
    w.w_left(0) = 1.0;
    LeverageOptions opts;
    opts.k_fixed = 2;
    CHECK_THROWS_AS(leverage_scores(spec, h, w, opts), DegenerateWeightsError);
}

TEST_CASE("zero matrix yields an empty report")
{
    const auto spec = LiftingSpec::hankel(7, 4);
    const ComplexMatrix zero = ComplexMatrix::Zero(4, 4);
    const auto rep = leverage_scores(spec, zero, WeightPair::identity(spec));
    CHECK(rep.k_tilde == 0);
    CHECK(rep.mu.norm() == 0.0);
}

#include <catch2/catch_amalgamated.hpp>

#include "wlidoa/array_model.hpp"

using namespace wlidoa;

namespace {

ArrayScene full_scene(int n, std::uint64_t seed = 0)
{
    ArrayScene s;
    s.n = n;
    s.omega.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        s.omega[static_cast<std::size_t>(i)] = i + 1;
    }
    s.seed = seed;
    return s;
}

} // namespace

TEST_CASE("steering atom values at analytic angles")
{
    CHECK(std::abs(steering_atom(0.0, 7, 0.5) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(steering_atom(90.0, 1, 0.5) - Complex(-1, 0)) < 1e-12);
    CHECK(std::abs(steering_atom(30.0, 2, 0.5) - Complex(-1, 0)) < 1e-12);
    for (double theta : {-63.2, -10.0, 12.5, 88.0}) {
        for (int n : {0, 3, 11}) {
            CHECK(std::abs(steering_atom(theta, n, 0.5)) == Catch::Approx(1.0).margin(1e-15));
        }
    }
}

TEST_CASE("synthesize matches the direct superposition oracle")
{
    SECTION("single source at broadside gives all ones")
    {
        SourceSet src;
        src.sources.push_back({0.0, Complex(1, 0)});
        const Snapshot snap = synthesize(src, full_scene(5));
        for (int i = 0; i < 5; ++i) {
            CHECK(std::abs(snap.y_full(i, 0) - Complex(1, 0)) < 1e-14);
        }
    }
    SECTION("no sources gives the zero vector")
    {
        const Snapshot snap = synthesize(SourceSet{}, full_scene(4));
        CHECK(snap.y_full.norm() == 0.0);
    }
    SECTION("two-source superposition, elementwise direct sum")
    {
        // tau values 0.1 and 0.3 expressed through angles: tau = 0.5 sin(theta)
        const double th1 = std::asin(0.2) * 180.0 / pi;
        const double th2 = std::asin(0.6) * 180.0 / pi;
        SourceSet src;
        src.sources.push_back({th1, Complex(1, 0)});
        src.sources.push_back({th2, Complex(2, 0)});
        const int n = 8;
        const Snapshot snap = synthesize(src, full_scene(n));
        for (int i = 0; i < n; ++i) {
            const Complex direct = std::polar(1.0, -2.0 * pi * 0.1 * i) +
                                   2.0 * std::polar(1.0, -2.0 * pi * 0.3 * i);
            CHECK(std::abs(snap.y_full(i, 0) - direct) < 1e-12);
        }
    }
}

TEST_CASE("eta noise mode hits the requested max amplitude exactly")
{
    SourceSet src;
    src.sources.push_back({10.0, Complex(1, 0)});
    ArrayScene scene = full_scene(32, 3);
    scene.noise = NoiseSpec::eta;
    scene.eta = 0.25;
    const Snapshot snap = synthesize(src, scene);
    CHECK(snap.noise.cwiseAbs().maxCoeff() == Catch::Approx(0.25).margin(1e-12));
    CHECK(snap.realized_eta == Catch::Approx(0.25).margin(1e-12));
    // observed samples equal projection of y_full + noise
    const ComplexMatrix expect = project(ComplexMatrix(snap.y_full + snap.noise), scene.omega);
    CHECK((expect - snap.y_obs).norm() == 0.0);
}

TEST_CASE("snr mode sets the noise variance from the signal energy")
{
    SourceSet src = preset_sources("table1-d");
    ArrayScene scene = full_scene(201, 9);
    scene.noise = NoiseSpec::snr_db;
    scene.snr_db = 20.0;
    const Snapshot snap = synthesize(src, scene);
    const double sig2 = snap.y_full.squaredNorm() / (201.0 * std::pow(10.0, 2.0));
    const double sample_var = snap.noise.squaredNorm() / 201.0;
    CHECK(sample_var == Catch::Approx(sig2).epsilon(0.25)); // statistical
}

TEST_CASE("project and embed")
{
    ComplexVector y(4);
    y << Complex(1, 1), Complex(2, 0), Complex(3, 0), Complex(4, -1);
    const IndexSet omega = {1, 4};

    const ComplexVector p = project(y, omega);
    REQUIRE(p.size() == 2);
    CHECK(p(0) == y(0));
    CHECK(p(1) == y(3));

    const ComplexVector e = embed(p, omega, 4);
    CHECK(e(0) == y(0));
    CHECK(e(1) == Complex(0, 0));
    CHECK(e(2) == Complex(0, 0));
    CHECK(e(3) == y(3));

    SECTION("project after embed is the identity; embed after project idempotent")
    {
        Rng rng(4);
        ComplexVector v(2);
        v << rng.complex_gaussian(), rng.complex_gaussian();
        CHECK((project(embed(v, omega, 4), omega) - v).norm() == 0.0);
        const ComplexVector once = embed(project(y, omega), omega, 4);
        const ComplexVector twice = embed(project(once, omega), omega, 4);
        CHECK((once - twice).norm() == 0.0);
    }

    SECTION("out-of-range index raises invalid omega")
    {
        CHECK_THROWS_AS(project(y, IndexSet{0, 2}), std::invalid_argument);
        CHECK_THROWS_AS(project(y, IndexSet{2, 5}), std::invalid_argument);
        CHECK_THROWS_AS(project(y, IndexSet{3, 3}), std::invalid_argument);
    }
}

TEST_CASE("random masks: determinism, full set, inclusion frequency")
{
    CHECK(sample_mask_random(5, 5, 123) == IndexSet{1, 2, 3, 4, 5});
    CHECK(sample_mask_random(10, 1, 7) == sample_mask_random(10, 1, 7));
    CHECK_THROWS_AS(sample_mask_random(4, 5, 1), std::invalid_argument);

    // empirical inclusion frequency ~ M/N within 3 sigma binomial
    const int n = 10, m = 4, draws = 10000;
    std::vector<int> hits(static_cast<std::size_t>(n), 0);
    for (int t = 0; t < draws; ++t) {
        for (int idx : sample_mask_random(n, m, 9000 + static_cast<std::uint64_t>(t))) {
            ++hits[static_cast<std::size_t>(idx - 1)];
        }
    }
    const double p = static_cast<double>(m) / n;
    const double sigma = std::sqrt(p * (1 - p) * draws);
    for (int i = 0; i < n; ++i) {
        CHECK(std::abs(hits[static_cast<std::size_t>(i)] - p * draws) < 3.5 * sigma);
    }
}

TEST_CASE("leverage-driven masks follow the clipped inclusion probabilities")
{
    const int n = 12;
    RealVector mu(n);
    for (int i = 0; i < n; ++i) {
        mu(i) = 0.05 + 0.1 * i;
    }
    const int k = 2;
    const double c = 0.08;

    SECTION("zero constant gives the empty set")
    {
        CHECK(sample_mask_leverage(mu, k, n, 0.0, 1).empty());
    }
    SECTION("clipped probabilities are always included")
    {
        RealVector big = mu;
        big(3) = 1e9;
        for (int t = 0; t < 50; ++t) {
            const auto mask = sample_mask_leverage(big, k, n, c, 100 + static_cast<std::uint64_t>(t));
            CHECK(std::find(mask.begin(), mask.end(), 4) != mask.end());
        }
    }
    SECTION("inclusion rates match p_n within binomial tolerance")
    {
        const int draws = 10000;
        const double logn = std::log(static_cast<double>(n));
        std::vector<int> hits(static_cast<std::size_t>(n), 0);
        for (int t = 0; t < draws; ++t) {
            for (int idx : sample_mask_leverage(mu, k, n, c, 500 + static_cast<std::uint64_t>(t))) {
                ++hits[static_cast<std::size_t>(idx - 1)];
            }
        }
        for (int i = 0; i < n; ++i) {
            const double p = std::min(1.0, c * mu(i) * k * k * logn * logn * logn / n);
            const double sigma = std::sqrt(std::max(p * (1 - p) * draws, 1.0));
            CHECK(std::abs(hits[static_cast<std::size_t>(i)] - p * draws) < 4.0 * sigma);
        }
    }
}

TEST_CASE("fixed seed reproduces masks and noise bit for bit")
{
    SourceSet src = preset_sources("table1-c");
    ArrayScene scene = full_scene(31, 42);
    scene.noise = NoiseSpec::snr_db;
    scene.snr_db = 15.0;
    const Snapshot a = synthesize(src, scene);
    const Snapshot b = synthesize(src, scene);
    REQUIRE(a.noise.size() == b.noise.size());
    CHECK(std::memcmp(a.noise.data(), b.noise.data(),
                      sizeof(Complex) * static_cast<std::size_t>(a.noise.size())) == 0);
    CHECK(sample_mask_random(31, 12, 42) == sample_mask_random(31, 12, 42));
}

TEST_CASE("multi-snapshot synthesis")
{
    SourceSet src = preset_sources("table1-d");
    ArrayScene scene = full_scene(21, 11);
    scene.snapshots = 3;

    SECTION("fixed amplitudes repeat the same snapshot")
    {
        const Snapshot snap = synthesize(src, scene, false);
        CHECK((snap.y_full.col(0) - snap.y_full.col(1)).norm() == 0.0);
        CHECK((snap.y_full.col(0) - snap.y_full.col(2)).norm() == 0.0);
    }
    SECTION("independent draws keep magnitudes but change phases")
    {
        const Snapshot snap = synthesize(src, scene, true);
        CHECK((snap.y_full.col(0) - snap.y_full.col(1)).norm() > 1e-6);
        for (int t = 0; t < 3; ++t) {
            CHECK(snap.y_full.col(t).norm() > 0.0);
        }
    }
}

TEST_CASE("preset scenarios carry the published table values")
{
    const SourceSet d = preset_sources("table1-d");
    REQUIRE(d.count() == 3);
    CHECK(d.sources[0].theta_deg == Catch::Approx(-30.46));
    CHECK(d.sources[1].theta_deg == Catch::Approx(-6.89));
    CHECK(d.sources[2].theta_deg == Catch::Approx(41.29));
    CHECK(std::abs(d.sources[0].amplitude) == Catch::Approx(2.62));
    CHECK(std::abs(d.sources[1].amplitude) == Catch::Approx(3.86));
    CHECK(std::abs(d.sources[2].amplitude) == Catch::Approx(3.48));
    CHECK(preset_sources("table1-a").count() == 8);
    CHECK(preset_sources("table1-b").count() == 9);
    CHECK(preset_sources("table1-c").count() == 5);
    CHECK_THROWS_AS(preset_sources("table1-x"), std::invalid_argument);

    // derived tau stays within [-spacing, spacing]
    for (const char* name : {"table1-a", "table1-b", "table1-c", "table1-d"}) {
        const SourceSet s = preset_sources(name);
        for (int k = 0; k < s.count(); ++k) {
            CHECK(std::abs(s.tau(k)) <= s.spacing_ratio + 1e-12);
        }
    }
}

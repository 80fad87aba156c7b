#include <catch2/catch_amalgamated.hpp>

#include <Eigen/SVD>

#include "wlidoa/array_model.hpp"
#include "wlidoa/lifting.hpp"
#include "wlidoa/rng.hpp"

using namespace wlidoa;

namespace {

ComplexVector random_vector(int n, std::uint64_t seed)
{
    Rng rng(seed);
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = rng.complex_gaussian();
    }
    return v;
}

ComplexMatrix random_matrix(int r, int c, std::uint64_t seed)
{
    Rng rng(seed);
    ComplexMatrix m(r, c);
    for (int j = 0; j < c; ++j) {
        for (int i = 0; i < r; ++i) {
            m(i, j) = rng.complex_gaussian();
        }
    }
    return m;
}

ComplexMatrix dense(const BasisMatrix& b, int rows, int cols)
{
    ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
    for (const auto& [i, j] : b.support) {
        m(i, j) += b.value;
    }
    return m;
}

} // namespace

TEST_CASE("hankel basis N=3 d=2 matches the enumerated anti-diagonals")
{
    const auto spec = LiftingSpec::hankel(3, 2);
    const auto bas = basis(spec);
    REQUIRE(bas.size() == 3);
    // A_2 is supported on {(2,1),(1,2)} in 1-based coordinates
    const auto& a2 = bas[1];
    REQUIRE(a2.support.size() == 2);
    CHECK(a2.value == Catch::Approx(1.0 / std::sqrt(2.0)));
    CHECK(a2.scale == Catch::Approx(std::sqrt(2.0)));
    std::vector<std::pair<int, int>> expect = {{0, 1}, {1, 0}};
    for (const auto& cell : expect) {
        CHECK(std::find(a2.support.begin(), a2.support.end(), cell) != a2.support.end());
    }
}

TEST_CASE("basis properties hold for every generated family")
{
    const std::vector<LiftingSpec> specs = {
        LiftingSpec::hankel(7, 4),
        LiftingSpec::double_hankel(7, 3),
        LiftingSpec::block_hankel(5, 3, 3, 2),
    };
    for (const auto& spec : specs) {
        const auto bas = basis(spec);
        const int rows = spec.rows();
        const int cols = spec.cols();
        std::vector<ComplexMatrix> mats;
        for (const auto& b : bas) {
            mats.push_back(dense(b, rows, cols));
        }
        for (std::size_t a = 0; a < mats.size(); ++a) {
            // unit Frobenius norm, equal positive entries
            CHECK(mats[a].norm() == Catch::Approx(1.0).margin(1e-12));
            CHECK(bas[a].value > 0.0);
            // at most one nonzero per column: sum of column sums squared is 1
            double colsq = 0.0;
            for (int j = 0; j < cols; ++j) {
                colsq += std::norm(mats[a].col(j).sum());
            }
            CHECK(colsq == Catch::Approx(1.0).margin(1e-12));
            // pairwise trace orthogonality
            for (std::size_t b = a + 1; b < mats.size(); ++b) {
                const Complex tr = (mats[a].transpose() * mats[b]).trace();
                CHECK(std::abs(tr) < 1e-12);
            }
        }
    }
}

TEST_CASE("hankel lift matches the textbook matrix")
{
    ComplexVector x(4);
    x << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);

    const ComplexMatrix h = lift(LiftingSpec::hankel(4, 2), x);
    REQUIRE(h.rows() == 2);
    REQUIRE(h.cols() == 3);
    ComplexMatrix expect(2, 3);
    expect << 1, 2, 3, 2, 3, 4;
    CHECK((h - expect).norm() == 0.0);

    const ComplexMatrix h2 = lift(LiftingSpec::double_hankel(4, 2), x);
    REQUIRE(h2.cols() == 6);
    CHECK((h2.leftCols(3) - expect).norm() == 0.0);
    CHECK((h2.rightCols(3) - expect).norm() == 0.0);
}

TEST_CASE("block-hankel with d_t=1 is the horizontal concatenation")
{
    const int n = 5, d = 3, t = 2;
    ComplexMatrix y = random_matrix(n, t, 11);
    const ComplexMatrix m = lift(LiftingSpec::block_hankel(n, d, t, 1), y);
    REQUIRE(m.rows() == d);
    REQUIRE(m.cols() == 2 * (n - d + 1));
    CHECK((m.leftCols(3) - lift(LiftingSpec::hankel(n, d), y.col(0))).norm() == 0.0);
    CHECK((m.rightCols(3) - lift(LiftingSpec::hankel(n, d), y.col(1))).norm() == 0.0);
}

TEST_CASE("adjoint inverts lift and satisfies the weighted adjoint identity")
{
    const std::vector<LiftingSpec> specs = {
        LiftingSpec::hankel(9, 4),
        LiftingSpec::double_hankel(9, 4),
        LiftingSpec::double_hankel(9, 4, DoubleHankelMode::conjugate_reflect),
        LiftingSpec::block_hankel(9, 4, 3, 2),
    };
    for (const auto& spec : specs) {
        const int t = spec.kind == LiftKind::block_hankel ? spec.t : 1;
        const ComplexMatrix x = random_matrix(spec.n, t, 21 + spec.d);
        const ComplexMatrix lifted = lift(spec, x);
        REQUIRE(lifted.rows() == spec.rows());
        REQUIRE(lifted.cols() == spec.cols());
        const ComplexMatrix back = adjoint(spec, lifted);
        CHECK((back - x).norm() < 1e-12 * std::max(1.0, x.norm()));

        if (spec.kind == LiftKind::double_hankel &&
            spec.dh_mode == DoubleHankelMode::conjugate_reflect) {
            continue; // conjugation is not C-linear; only the round trip applies
        }
        // <lift(x), M>_F == <x, adjoint(M)>_c with c_n the cell multiplicities
        const ComplexMatrix m = random_matrix(spec.rows(), spec.cols(), 77 + spec.d);
        const ComplexMatrix am = adjoint(spec, m);
        const Complex lhs = (lifted.adjoint() * m).trace();
        Complex rhs(0, 0);
        const auto bas = basis(spec);
        for (const auto& b : bas) {
            const int col = (b.index - 1) / spec.n;
            const int row = (b.index - 1) % spec.n;
            rhs += static_cast<double>(b.support.size()) * std::conj(x(row, col)) * am(row, col);
        }
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("all-ones hankel-shaped matrix back-projects to all ones")
{
    const auto spec = LiftingSpec::hankel(4, 2);
    const ComplexMatrix ones = ComplexMatrix::Ones(2, 3);
    const ComplexMatrix back = adjoint(spec, ones);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(back(i, 0) - Complex(1, 0)) < 1e-15);
    }
}

TEST_CASE("diag_count closed form matches enumeration")
{
    CHECK(diag_count(LiftingSpec::hankel(5, 3), 1) == 1);
    CHECK(diag_count(LiftingSpec::hankel(5, 3), 3) == 3);
    CHECK(diag_count(LiftingSpec::hankel(5, 3), 5) == 1);
    for (int n = 1; n <= 8; ++n) {
        const auto spec = LiftingSpec::hankel(8, 3);
        const auto bas = basis(spec);
        CHECK(diag_count(spec, n) == static_cast<int>(bas[static_cast<std::size_t>(n - 1)].support.size()));
    }
    // double-hankel doubles every multiplicity
    const auto d2 = LiftingSpec::double_hankel(8, 3);
    const auto bas2 = basis(d2);
    for (int n = 1; n <= 8; ++n) {
        CHECK(diag_count(d2, n) == static_cast<int>(bas2[static_cast<std::size_t>(n - 1)].support.size()));
    }
}

TEST_CASE("lifted noiseless superpositions have rank at most K")
{
    for (int n : {9, 15}) {
        for (int k = 1; k <= 3; ++k) {
            Rng rng(1000 + static_cast<std::uint64_t>(n * k));
            SourceSet src;
            for (int i = 0; i < k; ++i) {
                src.sources.push_back({-80.0 + 160.0 * rng.uniform(),
                                       std::polar(1.0 + rng.uniform(), 2 * pi * rng.uniform())});
            }
            ArrayScene scene;
            scene.n = n;
            scene.omega.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) scene.omega[static_cast<std::size_t>(i)] = i + 1;
            scene.seed = 5;
            const Snapshot snap = synthesize(src, scene);
            const ComplexMatrix h = lift(LiftingSpec::hankel(n, default_pencil(n)), snap.y_full.col(0));
            const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(h).singularValues();
            REQUIRE(sv.size() > k);
            CHECK(sv(k) <= 1e-10 * sv(0));
        }
    }
}

TEST_CASE("shape violations are rejected")
{
    ComplexVector x(4);
    x.setZero();
    CHECK_THROWS_AS(lift(LiftingSpec::hankel(5, 3), x), std::invalid_argument);
    CHECK_THROWS_AS(adjoint(LiftingSpec::hankel(5, 3), ComplexMatrix::Zero(2, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(basis(LiftingSpec::double_hankel(4, 2, DoubleHankelMode::conjugate_reflect)),
                    std::invalid_argument);
}

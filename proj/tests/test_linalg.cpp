#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "vem/linalg.hpp"
#include "vem/rng.hpp"

using namespace vem;

namespace {

// dense Gaussian elimination with partial pivoting, independent of the sparse
// path under test
Eigen::VectorXd dense_solve(Eigen::MatrixXd A, Eigen::VectorXd b) {
    const int n = static_cast<int>(A.rows());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
        A.row(col).swap(A.row(piv));
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < n; ++r) {
            const double f = A(r, col) / A(col, col);
            A.row(r) -= f * A.row(col);
            b[r] -= f * b[col];
        }
    }
    Eigen::VectorXd x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= A(r, c) * x[c];
        x[r] = s / A(r, r);
    }
    return x;
}

}  // namespace

TEST_CASE("assemble: empties, duplicates, invariants") {
    const CsrMatrix zero = assemble(3, 3, {});
    CHECK(zero.nnz() == 0);
    CHECK(zero.row_offsets == std::vector<int>{0, 0, 0, 0});

    const CsrMatrix dup = assemble(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}});
    REQUIRE(dup.nnz() == 1);
    CHECK(dup.values[0] == 3.0);

    CHECK_THROWS_AS(assemble(2, 2, {{0, 2, 1.0}}), std::out_of_range);
}

TEST_CASE("assemble: matvec against a dense accumulation oracle") {
    SplitMix64 rng(13);
    std::vector<Triplet> trips;
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(50, 50);
    for (int i = 0; i < 600; ++i) {
        const int r = static_cast<int>(rng.next() % 50);
        const int c = static_cast<int>(rng.next() % 50);
        const double v = rng.uniform(-1, 1);
        trips.push_back({r, c, v});
        dense(r, c) += v;
    }
    const CsrMatrix A = assemble(50, 50, trips);

    // CSR structure invariants
    for (int r = 0; r < 50; ++r) {
        CHECK(A.row_offsets[r] <= A.row_offsets[r + 1]);
        for (int k = A.row_offsets[r] + 1; k < A.row_offsets[r + 1]; ++k)
            CHECK(A.col_indices[k - 1] < A.col_indices[k]);
    }

    Eigen::VectorXd x(50);
    for (int i = 0; i < 50; ++i) x[i] = rng.uniform(-1, 1);
    CHECK((A.multiply(x) - dense * x).lpNorm<Eigen::Infinity>() < 1e-13);

    // deterministic independently of triplet order
    std::vector<Triplet> shuffled = trips;
    std::reverse(shuffled.begin(), shuffled.end());
    const CsrMatrix B = assemble(50, 50, shuffled);
    REQUIRE(B.nnz() == A.nnz());
    for (std::size_t i = 0; i < A.values.size(); ++i) CHECK(B.values[i] == A.values[i]);
}

TEST_CASE("solve: trivial systems") {
    const CsrMatrix eye = assemble(3, 3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
    Eigen::VectorXd b(3);
    b << 4.0, -1.0, 0.5;
    CHECK((solve(eye, b) - b).lpNorm<Eigen::Infinity>() < 1e-14);

    const CsrMatrix diag = assemble(2, 2, {{0, 0, 2.0}, {1, 1, 3.0}});
    Eigen::VectorXd rhs(2);
    rhs << 2.0, 3.0;
    const Eigen::VectorXd x = solve(diag, rhs);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("solve: random diagonally dominant system against dense elimination") {
    SplitMix64 rng(99);
    const int n = 100;
    std::vector<Triplet> trips;
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < n; ++r) {
        double offdiag = 0.0;
        for (int j = 0; j < 6; ++j) {
            const int c = static_cast<int>(rng.next() % n);
            if (c == r) continue;
            const double v = rng.uniform(-1, 1);
            trips.push_back({r, c, v});
            dense(r, c) += v;
            offdiag += std::abs(v);
        }
        const double d = offdiag + 1.0;
        trips.push_back({r, r, d});
        dense(r, r) += d;
    }
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b[i] = rng.uniform(-1, 1);

    const CsrMatrix A = assemble(n, n, trips);
    const Eigen::VectorXd x_direct = solve(A, b);
    const Eigen::VectorXd x_dense = dense_solve(dense, b);
    CHECK((x_direct - x_dense).lpNorm<Eigen::Infinity>() < 1e-9);

    SolveOptions iter;
    iter.iterative = true;
    iter.tol = 1e-12;
    const Eigen::VectorXd x_krylov = solve(A, b, iter);
    CHECK((x_krylov - x_dense).lpNorm<Eigen::Infinity>() < 1e-8);

    // determinism: identical inputs, bit-identical solutions
    const Eigen::VectorXd x_again = solve(A, b);
    for (int i = 0; i < n; ++i) CHECK(x_again[i] == x_direct[i]);
}

TEST_CASE("solve: failures are reported, never silent") {
    // structurally singular (empty row)
    const CsrMatrix singular = assemble(2, 2, {{0, 0, 1.0}});
    Eigen::VectorXd b(2);
    b << 1.0, 1.0;
    CHECK_THROWS_AS(solve(singular, b), SolverError);

    const CsrMatrix rect = assemble(2, 3, {{0, 0, 1.0}});
    CHECK_THROWS_AS(solve(rect, b), std::invalid_argument);

    const CsrMatrix nonfinite =
        assemble(1, 1, {{0, 0, std::numeric_limits<double>::quiet_NaN()}});
    Eigen::VectorXd one(1);
    one << 1.0;
    CHECK_THROWS_AS(solve(nonfinite, one), SolverError);
}

#include "vem/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace vem {

Eigen::VectorXd CsrMatrix::multiply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);
    for (int r = 0; r < rows; ++r)
        for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
            y[r] += values[k] * x[col_indices[k]];
    return y;
}

CsrMatrix assemble(int rows, int cols, std::vector<Triplet> triplets) {
    for (const Triplet& t : triplets)
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw std::out_of_range("assemble: triplet index out of range");

    // Canonical order (row, col, value bits) makes the summation order, and
    // hence the rounded sums, independent of the input permutation.
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        if (a.row != b.row) return a.row < b.row;
        if (a.col != b.col) return a.col < b.col;
        return std::bit_cast<std::uint64_t>(a.value) < std::bit_cast<std::uint64_t>(b.value);
    });

    CsrMatrix A;
    A.rows = rows;
    A.cols = cols;
    A.row_offsets.assign(rows + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        const int r = triplets[i].row, c = triplets[i].col;
        double sum = 0.0;
        while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c)
            sum += triplets[i++].value;
        A.col_indices.push_back(c);
        A.values.push_back(sum);
        ++A.row_offsets[r + 1];
    }
    for (int r = 0; r < rows; ++r) A.row_offsets[r + 1] += A.row_offsets[r];
    return A;
}

namespace {

Eigen::SparseMatrix<double> to_eigen(const CsrMatrix& A) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nnz());
    for (int r = 0; r < A.rows; ++r)
        for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k)
            trips.emplace_back(r, A.col_indices[k], A.values[k]);
    Eigen::SparseMatrix<double> M(A.rows, A.cols);
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();
    return M;
}

}  // namespace

Eigen::VectorXd solve(const CsrMatrix& A, const Eigen::VectorXd& b, const SolveOptions& opts) {
    if (A.rows != A.cols) throw std::invalid_argument("solve: matrix must be square");
    if (b.size() != A.rows) throw std::invalid_argument("solve: rhs size mismatch");
    for (double v : A.values)
        if (!std::isfinite(v)) throw SolverError("solve: non-finite matrix entry");

    const Eigen::SparseMatrix<double> M = to_eigen(A);
    Eigen::VectorXd x;

    if (opts.iterative) {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> krylov;
        krylov.setTolerance(opts.tol);
        krylov.setMaxIterations(opts.max_iterations);
        krylov.compute(M);
        if (krylov.info() != Eigen::Success) throw SolverError("solve: ILUT preconditioner failed");
        x = krylov.solve(b);
        if (krylov.info() != Eigen::Success) {
            std::ostringstream msg;
            msg << "solve: BiCGSTAB did not converge after " << krylov.iterations()
                << " iterations (residual " << krylov.error() << ")";
            throw SolverError(msg.str());
        }
    } else {
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        lu.analyzePattern(M);
        lu.factorize(M);
        if (lu.info() != Eigen::Success)
            throw SolverError("solve: sparse LU factorization failed (" + lu.lastErrorMessage() +
                              ")");
        x = lu.solve(b);
        // one iterative-refinement pass tightens ill-scaled systems to the contract
        const double bnorm = std::max(b.norm(), 1e-300);
        if ((M * x - b).norm() / bnorm > 0.1 * opts.tol) {
            const Eigen::VectorXd r = b - M * x;
            x += lu.solve(r);
        }
    }

    const double bnorm = std::max(b.norm(), std::numeric_limits<double>::min());
    const double res = (M * x - b).norm() / bnorm;
    if (!(res <= opts.tol)) {
        // stochastic lower bound on the condition number for the diagnostic
        double cond = 0.0;
        if (!opts.iterative) {
            Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
            lu.compute(M);
            if (lu.info() == Eigen::Success) {
                Eigen::VectorXd probe = Eigen::VectorXd::Ones(A.rows);
                probe[0] = -1.0;
                const Eigen::VectorXd y = lu.solve(probe);
                double anorm = 0.0;
                for (int r = 0; r < A.rows; ++r) {
                    double s = 0.0;
                    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k)
                        s += std::abs(A.values[k]);
                    anorm = std::max(anorm, s);
                }
                cond = anorm * y.lpNorm<Eigen::Infinity>() / probe.lpNorm<Eigen::Infinity>();
            }
        }
        std::ostringstream msg;
        msg << "solve: residual contract violated (" << res << " > " << opts.tol
            << ", condition estimate " << cond << ")";
        throw SolverError(msg.str());
    }
    return x;
}

}  // namespace vem

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vem {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

struct CsrMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_offsets;  ///< size rows+1, nondecreasing
    std::vector<int> col_indices;  ///< sorted and unique per row
    std::vector<double> values;

    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
    std::size_t nnz() const { return values.size(); }
};

/// Sums duplicate triplets into CSR form. The result is independent of the
/// triplet order (duplicates are summed in a canonical order).
CsrMatrix assemble(int rows, int cols, std::vector<Triplet> triplets);

struct SolveOptions {
    double tol = 1e-11;          ///< relative residual contract
    bool iterative = false;      ///< BiCGSTAB + ILUT instead of sparse LU
    int max_iterations = 2000;   ///< iterative only
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Direct sparse solve (fill-reducing LU) by default. The returned solution
/// satisfies ||Ax-b|| <= tol * max(||b||, eps); anything worse throws
/// SolverError rather than returning silently.
Eigen::VectorXd solve(const CsrMatrix& A, const Eigen::VectorXd& b, const SolveOptions& opts = {});

}  // namespace vem

#pragma once

#include <span>
#include <vector>

#include "parhom/errors.hpp"

namespace parhom {

struct Triplet {
    int row;
    int col;
    double val;
};

// Compressed sparse row matrix.
class SparseMatrix {
public:
    SparseMatrix() = default;
    static SparseMatrix from_triplets(int n, std::vector<Triplet> triplets, bool symmetric);

    int dim() const { return n_; }
    bool symmetric() const { return symmetric_; }
    std::size_t nnz() const { return val_.size(); }

    void matvec(std::span<const double> x, std::span<double> y) const;
    std::vector<double> matvec(std::span<const double> x) const;
    std::vector<double> diagonal() const;
    double coeff(int row, int col) const;  // 0 if not stored

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return val_; }

private:
    int n_ = 0;
    bool symmetric_ = false;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> val_;
};

struct SolveOptions {
    double tol = 1e-10;          // relative residual
    int max_iter = -1;           // default 20 * dimension
    const double* initial = nullptr;
};

// Jacobi-preconditioned conjugate gradients. Deterministic; throws
// NoConvergenceError when the iteration cap is hit.
std::vector<double> sparse_solve(const SparseMatrix& A, std::span<const double> b,
                                 const SolveOptions& opts = {});

// alpha*A + beta*B for matrices over the same index set
SparseMatrix sparse_axpby(double alpha, const SparseMatrix& A, double beta, const SparseMatrix& B);

// Small dense matrix with LU solve, used for the coarse systems.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

    DenseMatrix& operator+=(const DenseMatrix& o);
    DenseMatrix& operator-=(const DenseMatrix& o);
    DenseMatrix& scale(double s);

    std::vector<double> matvec(std::span<const double> x) const;
    // LU with partial pivoting; throws SingularSystemError
    std::vector<double> solve(std::span<const double> b) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

}  // namespace parhom

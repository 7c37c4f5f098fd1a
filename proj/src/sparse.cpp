#include "parhom/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace parhom {

SparseMatrix SparseMatrix::from_triplets(int n, std::vector<Triplet> triplets, bool symmetric) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m;
    m.n_ = n;
    m.symmetric_ = symmetric;
    m.row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        std::size_t j = i;
        double s = 0.0;
        while (j < triplets.size() && triplets[j].row == triplets[i].row &&
               triplets[j].col == triplets[i].col) {
            s += triplets[j].val;
            ++j;
        }
        m.col_idx_.push_back(triplets[i].col);
        m.val_.push_back(s);
        ++m.row_ptr_[triplets[i].row + 1];
        i = j;
    }
    for (int r = 0; r < n; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

void SparseMatrix::matvec(std::span<const double> x, std::span<double> y) const {
    for (int r = 0; r < n_; ++r) {
        double s = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += val_[k] * x[col_idx_[k]];
        y[r] = s;
    }
}

std::vector<double> SparseMatrix::matvec(std::span<const double> x) const {
    std::vector<double> y(n_);
    matvec(x, y);
    return y;
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (int r = 0; r < n_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            if (col_idx_[k] == r) d[r] = val_[k];
    return d;
}

double SparseMatrix::coeff(int row, int col) const {
    for (int k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
        if (col_idx_[k] == col) return val_[k];
    return 0.0;
}

namespace {
double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }
}  // namespace

std::vector<double> sparse_solve(const SparseMatrix& A, std::span<const double> b,
                                 const SolveOptions& opts) {
    const int n = A.dim();
    std::vector<double> x(n, 0.0);
    const double nb = norm2(b);
    if (nb == 0.0) return x;

    std::vector<double> r(b.begin(), b.end());
    if (opts.initial) {
        std::copy(opts.initial, opts.initial + n, x.begin());
        std::vector<double> ax = A.matvec(x);
        for (int i = 0; i < n; ++i) r[i] = b[i] - ax[i];
    }
    std::vector<double> invd = A.diagonal();
    for (double& d : invd) d = (d != 0.0) ? 1.0 / d : 1.0;

    std::vector<double> z(n), p(n), ap(n);
    for (int i = 0; i < n; ++i) z[i] = invd[i] * r[i];
    p = z;
    double rz = dot(r, z);
    double rn = norm2(r);
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 20 * n;
    int it = 0;
    while (rn > opts.tol * nb) {
        if (it++ >= max_iter) {
            char msg[128];
            std::snprintf(msg, sizeof(msg),
                          "pcg: no convergence after %d iterations (residual %.3e, target %.3e)",
                          max_iter, rn / nb, opts.tol);
            throw NoConvergenceError(msg);
        }
        A.matvec(p, ap);
        const double alpha = rz / dot(p, ap);
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for (int i = 0; i < n; ++i) z[i] = invd[i] * r[i];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rn = norm2(r);
    }
    return x;
}

SparseMatrix sparse_axpby(double alpha, const SparseMatrix& A, double beta, const SparseMatrix& B) {
    std::vector<Triplet> t;
    t.reserve(A.nnz() + B.nnz());
    for (int r = 0; r < A.dim(); ++r) {
        for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k)
            t.push_back({r, A.col_idx()[k], alpha * A.values()[k]});
        for (int k = B.row_ptr()[r]; k < B.row_ptr()[r + 1]; ++k)
            t.push_back({r, B.col_idx()[k], beta * B.values()[k]});
    }
    return SparseMatrix::from_triplets(A.dim(), std::move(t), A.symmetric() && B.symmetric());
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

DenseMatrix& DenseMatrix::scale(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

std::vector<double> DenseMatrix::matvec(std::span<const double> x) const {
    std::vector<double> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> DenseMatrix::solve(std::span<const double> b) const {
    const int n = rows_;
    std::vector<double> lu = a_;
    std::vector<double> x(b.begin(), b.end());
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    auto at = [&](int i, int j) -> double& { return lu[std::size_t(i) * n + j]; };
    for (int k = 0; k < n; ++k) {
        int pr = k;
        double pv = std::abs(at(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(at(i, k)) > pv) {
                pv = std::abs(at(i, k));
                pr = i;
            }
        }
        if (pv == 0.0) throw SingularSystemError("dense solve: singular matrix");
        if (pr != k) {
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(pr, j));
            std::swap(x[k], x[pr]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = at(i, k) / at(k, k);
            at(i, k) = f;
            for (int j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
            x[i] -= f * x[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= at(i, j) * x[j];
        x[i] /= at(i, i);
    }
    return x;
}

}  // namespace parhom

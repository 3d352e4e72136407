#pragma once

#include <span>
#include <vector>

namespace steig {

// Dense column-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double operator()(int i, int j) const { return a_[size_t(j) * rows_ + i]; }
    double& operator()(int i, int j) { return a_[size_t(j) * rows_ + i]; }

    const double* col(int j) const { return a_.data() + size_t(j) * rows_; }
    double* col(int j) { return a_.data() + size_t(j) * rows_; }

    std::span<const double> data() const { return a_; }
    std::span<double> data() { return a_; }

    static Matrix identity(int n);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

// n x n real symmetric matrix. Full column-major storage with the lower
// triangle authoritative; the upper triangle is a bit-exact mirror kept in
// sync by every mutator. All entries are required to be finite.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : n_(n), a_(size_t(n) * n, 0.0) {}

    // Builds from a full column-major buffer; throws if the buffer is not
    // exactly symmetric or contains non-finite values.
    static SymMatrix from_full(int n, std::span<const double> full);

    // Builds from the lower triangle (column-major, packed by columns:
    // (0,0),(1,0),...,(n-1,0),(1,1),...), mirroring to the upper triangle.
    static SymMatrix from_lower(int n, std::span<const double> lower);

    static SymMatrix identity(int n);

    int dim() const { return n_; }

    double operator()(int i, int j) const { return a_[size_t(j) * n_ + i]; }

    // Writes both (i,j) and (j,i).
    void set(int i, int j, double v) {
        a_[size_t(j) * n_ + i] = v;
        a_[size_t(i) * n_ + j] = v;
    }

    std::span<const double> data() const { return a_; }

    // Throws std::invalid_argument on NaN/Inf entries.
    void check_finite() const;

private:
    int n_ = 0;
    std::vector<double> a_;
};

// Result of the power-iteration 2-norm estimator. The estimate never
// exceeds the true 2-norm (it is the norm of M applied to a unit vector),
// so value <= ||M||_F always holds.
struct Norm2Estimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct NormOptions {
    double tol = 1e-6;
    int max_iter = 200;
};

// fl(A - sigma*B), computed on the lower triangle and mirrored so the result
// is symmetric bit-for-bit.
SymMatrix shifted_subtract(const SymMatrix& a, const SymMatrix& b, double sigma);

// y = M x with a deterministic (column-major) summation order.
std::vector<double> sym_matvec(const SymMatrix& m, std::span<const double> x);

// Symmetric power iteration with a deterministic all-ones start vector.
// If the start vector is annihilated (it was orthogonal to the dominant
// eigenspace), restarts once from a fixed pseudo-random vector.
Norm2Estimate norm2_estimate(const SymMatrix& m, const NormOptions& opts = {});

// ||X||_2 for a rectangular X, via power iteration on X^T X.
Norm2Estimate norm2_estimate_rect(const Matrix& x, const NormOptions& opts = {});

double frobenius_norm(const SymMatrix& m);
double frobenius_norm(const Matrix& m);

namespace detail {

inline double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double nrm2(std::span<const double> x);

} // namespace detail

} // namespace steig

#include "steig/matrix.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace steig {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SymMatrix SymMatrix::from_full(int n, std::span<const double> full) {
    if (int64_t(full.size()) != int64_t(n) * n)
        throw std::invalid_argument("SymMatrix::from_full: buffer size mismatch");
    SymMatrix m(n);
    for (int j = 0; j < n; ++j) {
        for (int i = j; i < n; ++i) {
            const double lo = full[size_t(j) * n + i];
            const double up = full[size_t(i) * n + j];
            if (lo != up)
                throw std::invalid_argument("SymMatrix::from_full: matrix not symmetric");
            m.set(i, j, lo);
        }
    }
    m.check_finite();
    return m;
}

SymMatrix SymMatrix::from_lower(int n, std::span<const double> lower) {
    if (int64_t(lower.size()) != int64_t(n) * (n + 1) / 2)
        throw std::invalid_argument("SymMatrix::from_lower: buffer size mismatch");
    SymMatrix m(n);
    size_t k = 0;
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) m.set(i, j, lower[k++]);
    m.check_finite();
    return m;
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

void SymMatrix::check_finite() const {
    for (double v : a_)
        if (!std::isfinite(v)) throw std::invalid_argument("SymMatrix: non-finite entry");
}

SymMatrix shifted_subtract(const SymMatrix& a, const SymMatrix& b, double sigma) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("shifted_subtract: dimension mismatch");
    if (!std::isfinite(sigma))
        throw std::invalid_argument("shifted_subtract: sigma not finite");
    const int n = a.dim();
    SymMatrix out(n);
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) out.set(i, j, a(i, j) - sigma * b(i, j));
    out.check_finite();
    return out;
}

std::vector<double> sym_matvec(const SymMatrix& m, std::span<const double> x) {
    const int n = m.dim();
    if (int(x.size()) != n) throw std::invalid_argument("sym_matvec: dimension mismatch");
    std::vector<double> y(n, 0.0);
    const double* a = m.data().data();
    for (int j = 0; j < n; ++j) {
        const double xj = x[j];
        const double* col = a + size_t(j) * n;
        for (int i = 0; i < n; ++i) y[i] += col[i] * xj;
    }
    return y;
}

double detail::nrm2(std::span<const double> x) {
    // Two-pass scaled norm; safe against overflow for the magnitudes here.
    double maxabs = 0.0;
    for (double v : x) maxabs = std::max(maxabs, std::abs(v));
    if (maxabs == 0.0) return 0.0;
    double s = 0.0;
    for (double v : x) {
        const double t = v / maxabs;
        s += t * t;
    }
    return maxabs * std::sqrt(s);
}

namespace {

// Deterministic fallback start vector (xorshift from seed 0 offset).
std::vector<double> seeded_unit_vector(int n) {
    std::vector<double> x(n);
    uint64_t state = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < n; ++i) {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        x[i] = double(state >> 11) / double(1ull << 53) - 0.5;
    }
    const double nv = detail::nrm2(x);
    for (double& v : x) v /= nv;
    return x;
}

Norm2Estimate power_iteration(int n, const std::function<void(const double*, double*)>& apply,
                              const NormOptions& opts) {
    Norm2Estimate est;
    if (n == 0) {
        est.converged = true;
        return est;
    }
    std::vector<double> x(n, 1.0 / std::sqrt(double(n)));
    std::vector<double> y(n);
    bool restarted = false;
    double prev = -1.0;
    for (int it = 1; it <= opts.max_iter; ++it) {
        apply(x.data(), y.data());
        const double ny = detail::nrm2(y);
        est.iterations = it;
        if (ny == 0.0) {
            // Start vector annihilated: either M = 0 or we were orthogonal
            // to the dominant eigenspace. One restart decides which.
            if (!restarted) {
                x = seeded_unit_vector(n);
                restarted = true;
                prev = -1.0;
                continue;
            }
            est.value = 0.0;
            est.converged = true;
            return est;
        }
        est.value = ny;
        if (prev >= 0.0 && std::abs(ny - prev) <= opts.tol * std::max(ny, prev)) {
            est.converged = true;
            return est;
        }
        prev = ny;
        for (int i = 0; i < n; ++i) x[i] = y[i] / ny;
    }
    est.converged = false;
    return est;
}

} // namespace

Norm2Estimate norm2_estimate(const SymMatrix& m, const NormOptions& opts) {
    const int n = m.dim();
    const double* a = m.data().data();
    auto apply = [n, a](const double* x, double* y) {
        for (int i = 0; i < n; ++i) y[i] = 0.0;
        for (int j = 0; j < n; ++j) {
            const double xj = x[j];
            const double* col = a + size_t(j) * n;
            for (int i = 0; i < n; ++i) y[i] += col[i] * xj;
        }
    };
    return power_iteration(n, apply, opts);
}

Norm2Estimate norm2_estimate_rect(const Matrix& x, const NormOptions& opts) {
    const int rows = x.rows();
    const int cols = x.cols();
    if (rows == 0 || cols == 0) return {0.0, 0, true};
    std::vector<double> tmp(rows);
    auto apply = [&](const double* v, double* y) {
        // y = X^T (X v), symmetric PSD in v.
        for (int i = 0; i < rows; ++i) tmp[i] = 0.0;
        for (int j = 0; j < cols; ++j) {
            const double vj = v[j];
            const double* col = x.col(j);
            for (int i = 0; i < rows; ++i) tmp[i] += col[i] * vj;
        }
        for (int j = 0; j < cols; ++j) {
            const double* col = x.col(j);
            double s = 0.0;
            for (int i = 0; i < rows; ++i) s += col[i] * tmp[i];
            y[j] = s;
        }
    };
    Norm2Estimate gram = power_iteration(cols, apply, opts);
    gram.value = std::sqrt(gram.value);
    return gram;
}

double frobenius_norm(const SymMatrix& m) { return detail::nrm2(m.data()); }

double frobenius_norm(const Matrix& m) { return detail::nrm2(m.data()); }

} // namespace steig

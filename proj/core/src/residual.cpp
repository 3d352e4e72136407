#include "steig/residual.hpp"

#include <cmath>
#include <stdexcept>

#include "steig/factor.hpp"

namespace steig {

std::vector<double> pencil_residual_vector(const SymMatrix& a, const SymMatrix& b, double alpha,
                                           double beta, std::span<const double> v) {
    const std::vector<double> av = sym_matvec(a, v);
    const std::vector<double> bv = sym_matvec(b, v);
    std::vector<double> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = beta * av[i] - alpha * bv[i];
    return r;
}

double relative_residual(const SymMatrix& a, const SymMatrix& b, double alpha, double beta,
                         std::span<const double> v, const PencilNorms& norms) {
    if (alpha == 0.0 && beta == 0.0)
        throw std::invalid_argument("relative_residual: (alpha, beta) = (0, 0)");
    const double nv = detail::nrm2(v);
    if (nv == 0.0) throw std::invalid_argument("relative_residual: zero eigenvector");
    const std::vector<double> r = pencil_residual_vector(a, b, alpha, beta, v);
    const double denom = (std::abs(beta) * norms.norm_a + std::abs(alpha) * norms.norm_b) * nv;
    return detail::nrm2(r) / denom;
}

double RankOneUpdate::norm2() const {
    return std::abs(scale) * detail::nrm2(col) * detail::nrm2(row);
}

std::vector<double> RankOneUpdate::apply(std::span<const double> x) const {
    const double s = scale * detail::dot(row, x);
    std::vector<double> y(col.size());
    for (size_t i = 0; i < col.size(); ++i) y[i] = s * col[i];
    return y;
}

Matrix RankOneUpdate::materialize() const {
    Matrix m(int(col.size()), int(row.size()));
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i) m(i, j) = scale * col[i] * row[j];
    return m;
}

BackwardErrorPair backward_error_pair(double alpha, double beta, std::span<const double> v,
                                      std::span<const double> r, const PencilNorms& norms) {
    const double nv = detail::nrm2(v);
    if (nv == 0.0) throw std::invalid_argument("backward_error_pair: zero eigenvector");
    if (alpha == 0.0 && beta == 0.0)
        throw std::invalid_argument("backward_error_pair: (alpha, beta) = (0, 0)");

    const double denom =
        (std::abs(beta) * norms.norm_a + std::abs(alpha) * norms.norm_b) * nv * nv;
    const double sign_beta = beta > 0.0 ? 1.0 : (beta < 0.0 ? -1.0 : 0.0);
    const double sign_alpha = alpha > 0.0 ? 1.0 : (alpha < 0.0 ? -1.0 : 0.0);

    BackwardErrorPair out;
    out.e.scale = -sign_beta * norms.norm_a / denom;
    out.e.col.assign(r.begin(), r.end());
    out.e.row.assign(v.begin(), v.end());
    out.f.scale = sign_alpha * norms.norm_b / denom;
    out.f.col.assign(r.begin(), r.end());
    out.f.row.assign(v.begin(), v.end());
    return out;
}

namespace {

// M^{-1} x through the signed factor: M = Ca Da Ca^T, Da^{-1} = Da.
std::vector<double> apply_inverse(const SignedFactor& f, std::span<const double> x) {
    const int n = f.dim();
    Matrix rhs(n, 1);
    std::copy(x.begin(), x.end(), rhs.col(0));
    Matrix t = solve_ca(f, rhs);
    for (int i = 0; i < n; ++i) t(i, 0) *= f.d_a[i];
    Matrix y = solve_ca_transpose(f, t);
    return std::vector<double>(y.col(0), y.col(0) + n);
}

} // namespace

double best_possible_residual(const SymMatrix& a, const SymMatrix& b, double alpha, double beta,
                              const PencilNorms& norms, const BestResidualOptions& opts) {
    if (alpha == 0.0 && beta == 0.0)
        throw std::invalid_argument("best_possible_residual: (alpha, beta) = (0, 0)");
    const int n = a.dim();
    if (n != b.dim()) throw std::invalid_argument("best_possible_residual: dimension mismatch");

    // M = beta*A - alpha*B; sigma_min(M) = min |eigenvalue| since M = M^T.
    SymMatrix m(n);
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) m.set(i, j, beta * a(i, j) - alpha * b(i, j));

    SignedFactor f;
    try {
        f = to_signed_factor(ldlt_rook(m));
    } catch (const SingularShiftError&) {
        return 0.0; // singular pencil combination: the pair is exact
    }

    // Inverse iteration, deterministic all-ones start, Rayleigh quotient
    // convergence test.
    std::vector<double> x(n, 1.0 / std::sqrt(double(n)));
    double rho = 0.0;
    bool have_rho = false;
    for (int it = 0; it < opts.max_iter; ++it) {
        std::vector<double> y = apply_inverse(f, x);
        const double ny = detail::nrm2(y);
        if (ny == 0.0) break;
        for (int i = 0; i < n; ++i) x[i] = y[i] / ny;
        const std::vector<double> mx = sym_matvec(m, x);
        const double next = detail::dot(x, mx);
        if (have_rho && std::abs(next - rho) <= opts.rayleigh_tol * std::abs(next)) {
            rho = next;
            break;
        }
        rho = next;
        have_rho = true;
    }

    const double denom = std::abs(beta) * norms.norm_a + std::abs(alpha) * norms.norm_b;
    return std::abs(rho) / denom;
}

} // namespace steig

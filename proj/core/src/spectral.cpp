#include "steig/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace steig {

namespace {

constexpr double kUnitRoundoff = 0x1p-53;

std::string guard_message(double eta_x, double etax_max) {
    return "The given sigma failed to provide a suitable bound on eta*||X||: eta*||X|| = " +
           std::to_string(eta_x) + " > " + std::to_string(etax_max);
}

} // namespace

GuardError::GuardError(double eta_x_, double etax_max_)
    : std::runtime_error(guard_message(eta_x_, etax_max_)), eta_x(eta_x_), etax_max(etax_max_) {}

SymMatrix form_w(const Matrix& x, std::span<const double> d_a) {
    const int n = x.rows();
    const int r = x.cols();
    if (int(d_a.size()) != n) throw std::invalid_argument("form_w: dimension mismatch");

    Matrix dax(n, r);
    for (int j = 0; j < r; ++j) {
        const double* xc = x.col(j);
        double* dc = dax.col(j);
        for (int i = 0; i < n; ++i) dc[i] = d_a[i] * xc[i]; // exact: d_a is +/-1
    }
    Matrix m(r, r);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < r; ++i)
            m(i, j) = detail::dot(std::span<const double>(x.col(i), size_t(n)),
                                  std::span<const double>(dax.col(j), size_t(n)));
    SymMatrix w(r);
    for (int j = 0; j < r; ++j)
        for (int i = j; i < r; ++i) w.set(i, j, 0.5 * (m(i, j) + m(j, i)));
    return w;
}

ShiftDiagnostics shift_diagnostics(const Norm2Estimate& norm_a, const Norm2Estimate& norm_b,
                                   const Norm2Estimate& norm_shifted, const XFactor& xf,
                                   double sigma, const std::vector<double>* theta,
                                   const SymMatrix* w, const NormOptions& opts) {
    ShiftDiagnostics d;
    d.sigma = sigma;
    d.norm_a = norm_a;
    d.norm_b = norm_b;
    d.norm_shifted = norm_shifted;
    d.norm_x = xf.norm2_x;
    d.norm_options = opts;
    d.sigma0 = norm_a.value > 0.0 ? sigma * norm_b.value / norm_a.value : 0.0;
    d.eta = norm_b.value > 0.0 ? std::sqrt(norm_shifted.value / norm_b.value) : 0.0;
    d.eta_x = d.eta * d.norm_x.value;
    d.gamma = norm_shifted.value > 0.0 ? norm_a.value / norm_shifted.value : 0.0;

    double w_norm = 0.0;
    if (theta != nullptr && !theta->empty()) {
        for (double t : *theta) w_norm = std::max(w_norm, std::abs(t));
    } else if (w != nullptr) {
        w_norm = norm2_estimate(*w, opts).value;
    }
    const double x2 = d.norm_x.value * d.norm_x.value;
    d.mu = w_norm > 0.0 ? x2 / w_norm : std::numeric_limits<double>::infinity();
    return d;
}

ScaledShift sigma_from_scaled(const SymMatrix& a, const SymMatrix& b, double sigma0,
                              const NormOptions& opts) {
    ScaledShift s;
    s.norm_a = norm2_estimate(a, opts);
    s.norm_b = norm2_estimate(b, opts);
    if (s.norm_a.value == 0.0 || s.norm_b.value == 0.0)
        throw std::invalid_argument("sigma_from_scaled: zero norm estimate (A or B is zero)");
    s.sigma = sigma0 * s.norm_a.value / s.norm_b.value;
    return s;
}

SpectralResult spectral_trans_eig(const SymMatrix& a, const SymMatrix& b, double sigma,
                                  const SolveSettings& settings) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("spectral_trans_eig: dimension mismatch");
    if (settings.etax_max <= 0.0)
        throw std::invalid_argument("spectral_trans_eig: etax_max must be positive");
    const int n = a.dim();

    const SymMatrix abreve = shifted_subtract(a, b, sigma);
    const SignedFactor ca = to_signed_factor(ldlt_rook(abreve));
    const SemidefFactor cb = pivoted_cholesky(b, settings.cholesky_rel_tol);
    const int r = cb.rank;

    const Norm2Estimate norm_a = norm2_estimate(a, settings.norms);
    const Norm2Estimate norm_b = norm2_estimate(b, settings.norms);
    const Norm2Estimate norm_shifted = norm2_estimate(abreve, settings.norms);

    const XFactor xf = form_x(ca, cb, settings.norms);
    const double eta = norm_b.value > 0.0 ? std::sqrt(norm_shifted.value / norm_b.value) : 0.0;
    const double eta_x = eta * xf.norm2_x.value;
    if (eta_x > settings.etax_max) throw GuardError(eta_x, settings.etax_max);

    const SymMatrix w = form_w(xf.x, ca.d_a);
    const EigDecomp eig = sym_eig(w);

    // Right-hand side Da * X * U, then Ca^T V = rhs, column by column.
    Matrix rhs(n, r);
    for (int j = 0; j < r; ++j) {
        double* out = rhs.col(j);
        for (int i = 0; i < n; ++i) out[i] = 0.0;
        for (int k = 0; k < r; ++k) {
            const double ukj = eig.u(k, j);
            if (ukj == 0.0) continue;
            const double* xc = xf.x.col(k);
            for (int i = 0; i < n; ++i) out[i] += xc[i] * ukj;
        }
        for (int i = 0; i < n; ++i) out[i] *= ca.d_a[i];
    }
    Matrix v = solve_ca_transpose(ca, rhs);

    // Exact theta = 0 is the (1, 0) infinite eigenvalue. When even Cb*u
    // vanishes, the transformed problem says nothing about A and the
    // eigenvector is u itself (zero-padded if rank-deficient).
    const double cb_norm_proxy = std::sqrt(std::max(norm_b.value, 0.0));
    for (int j = 0; j < r; ++j) {
        if (eig.theta[j] != 0.0) continue;
        std::vector<double> cbu(n, 0.0);
        for (int k = 0; k < r; ++k) {
            const double ukj = eig.u(k, j);
            const double* cbc = cb.cb.col(k);
            for (int i = 0; i < n; ++i) cbu[i] += cbc[i] * ukj;
        }
        if (detail::nrm2(cbu) <= double(n) * kUnitRoundoff * cb_norm_proxy) {
            for (int i = 0; i < n; ++i) v(i, j) = i < r ? eig.u(i, j) : 0.0;
        }
    }

    for (int j = 0; j < r; ++j) {
        double* col = v.col(j);
        const double nv = detail::nrm2(std::span<const double>(col, size_t(n)));
        if (nv > 0.0)
            for (int i = 0; i < n; ++i) col[i] /= nv;
    }

    SpectralResult res;
    res.n = n;
    res.rank = r;
    res.infinite_count = n - r;
    res.v = std::move(v);
    res.pairs.resize(r);
    for (int j = 0; j < r; ++j) {
        const double theta = eig.theta[j];
        EigenPair& p = res.pairs[j];
        p.theta = theta;
        p.alpha = 1.0 + sigma * theta;
        p.beta = theta;
        p.lambda = theta != 0.0 ? p.alpha / p.beta : std::numeric_limits<double>::infinity();
    }
    res.diagnostics = shift_diagnostics(norm_a, norm_b, norm_shifted, xf, sigma, &eig.theta,
                                        nullptr, settings.norms);
    return res;
}

namespace {

// Unpivoted lower Cholesky; returns false on a nonpositive pivot.
bool cholesky_lower(const SymMatrix& b, Matrix& l) {
    const int n = b.dim();
    l = Matrix(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) l(i, j) = b(i, j);
    for (int k = 0; k < n; ++k) {
        const double d = l(k, k);
        if (d <= 0.0) return false;
        const double s = std::sqrt(d);
        l(k, k) = s;
        for (int i = k + 1; i < n; ++i) l(i, k) /= s;
        for (int j = k + 1; j < n; ++j) {
            const double ljk = l(j, k);
            if (ljk == 0.0) continue;
            for (int i = j; i < n; ++i) l(i, j) -= l(i, k) * ljk;
        }
    }
    return true;
}

void forward_solve(const Matrix& l, double* t, int n) {
    for (int j = 0; j < n; ++j) {
        t[j] /= l(j, j);
        const double tj = t[j];
        if (tj == 0.0) continue;
        const double* col = l.col(j);
        for (int i = j + 1; i < n; ++i) t[i] -= col[i] * tj;
    }
}

void backward_solve_transpose(const Matrix& l, double* t, int n) {
    for (int j = n - 1; j >= 0; --j) {
        double s = t[j];
        const double* col = l.col(j);
        for (int i = j + 1; i < n; ++i) s -= col[i] * t[i];
        t[j] = s / l(j, j);
    }
}

} // namespace

SpectralResult standard_cholesky_eig(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("standard_cholesky_eig: dimension mismatch");
    const int n = a.dim();

    Matrix l;
    if (!cholesky_lower(b, l))
        throw NotPosDefError("B not positive definite - standard method inapplicable");

    // M = Cb^{-1} A Cb^{-T}, formed by triangular solves and symmetrized.
    Matrix y(n, n);
    for (int j = 0; j < n; ++j) {
        double* col = y.col(j);
        for (int i = 0; i < n; ++i) col[i] = a(i, j);
        forward_solve(l, col, n);
    }
    // Z = Y Cb^{-T}: solve row-wise via Z^T = Cb^{-1} Y^T.
    Matrix z(n, n);
    std::vector<double> row(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) row[j] = y(i, j);
        forward_solve(l, row.data(), n);
        for (int j = 0; j < n; ++j) z(i, j) = row[j];
    }
    SymMatrix m(n);
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) m.set(i, j, 0.5 * (z(i, j) + z(j, i)));

    EigDecomp eig = sym_eig(m);

    Matrix v(n, n);
    for (int j = 0; j < n; ++j) {
        double* col = v.col(j);
        std::copy(eig.u.col(j), eig.u.col(j) + n, col);
        backward_solve_transpose(l, col, n);
        const double nv = detail::nrm2(std::span<const double>(col, size_t(n)));
        if (nv > 0.0)
            for (int i = 0; i < n; ++i) col[i] /= nv;
    }

    SpectralResult res;
    res.n = n;
    res.rank = n;
    res.infinite_count = 0;
    res.v = std::move(v);
    res.pairs.resize(n);
    for (int j = 0; j < n; ++j) {
        EigenPair& p = res.pairs[j];
        p.alpha = eig.theta[j];
        p.beta = 1.0;
        p.theta = eig.theta[j];
        p.lambda = eig.theta[j];
    }
    return res;
}

} // namespace steig

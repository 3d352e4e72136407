#include "steig/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace steig {

namespace {

// Work buffer holding the lower triangle of a symmetric matrix in full
// column-major storage. Only elements (i, j) with i >= j are referenced.
struct LowerWork {
    int n;
    std::vector<double> a;

    explicit LowerWork(const SymMatrix& m) : n(m.dim()), a(m.data().begin(), m.data().end()) {}

    double& at(int i, int j) { return a[size_t(j) * n + i]; } // requires i >= j

    // Symmetric row/column swap k <-> p (k < p) touching only the lower
    // triangle. Rows [0, k) carry already-finished L columns; swapping them
    // here applies the permutation to L as well.
    void sym_swap(int k, int p) {
        if (k == p) return;
        for (int i = 0; i < k; ++i) std::swap(at(k, i), at(p, i));
        std::swap(at(k, k), at(p, p));
        for (int i = k + 1; i < p; ++i) std::swap(at(i, k), at(p, i));
        for (int i = p + 1; i < n; ++i) std::swap(at(i, k), at(i, p));
    }
};

} // namespace

SemidefFactor pivoted_cholesky(const SymMatrix& b, double rel_tol) {
    const int n = b.dim();
    if (n == 0) throw std::invalid_argument("pivoted_cholesky: empty matrix");
    if (rel_tol < 0.0) throw std::invalid_argument("pivoted_cholesky: negative tolerance");

    LowerWork w(b);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    double diag_max0 = w.at(0, 0);
    for (int i = 1; i < n; ++i) diag_max0 = std::max(diag_max0, w.at(i, i));
    const double threshold = rel_tol * std::max(diag_max0, 0.0);

    std::vector<double> pivots;
    int r = n;
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = w.at(k, k);
        for (int i = k + 1; i < n; ++i) {
            if (w.at(i, i) > best) {
                best = w.at(i, i);
                p = i;
            }
        }
        if (best <= threshold) {
            r = k;
            break;
        }
        w.sym_swap(k, p);
        std::swap(perm[k], perm[p]);

        pivots.push_back(best);
        const double d = std::sqrt(best);
        w.at(k, k) = d;
        for (int i = k + 1; i < n; ++i) w.at(i, k) /= d;
        for (int j = k + 1; j < n; ++j) {
            const double cjk = w.at(j, k);
            for (int i = j; i < n; ++i) w.at(i, j) -= w.at(i, k) * cjk;
        }
    }

    if (r == 0) throw std::runtime_error("pivoted_cholesky: matrix not positive semidefinite");

    SemidefFactor out;
    out.perm.assign(perm.begin(), perm.end());
    out.rank = r;
    out.pivots = std::move(pivots);
    out.cb = Matrix(n, r);
    // Rows back to original order: B ~= cb cb^T directly.
    for (int j = 0; j < r; ++j)
        for (int i = j; i < n; ++i) out.cb(perm[i], j) = w.at(i, j);
    return out;
}

namespace {

constexpr double kRookAlpha = 0.6403882032022076; // (1 + sqrt(17)) / 8

// Largest |off-diagonal| in column c of the trailing block [k, n), and the
// row achieving it (lowest index on ties).
std::pair<double, int> col_offdiag_max(LowerWork& w, int k, int c) {
    double best = -1.0;
    int arg = -1;
    for (int i = k; i < w.n; ++i) {
        if (i == c) continue;
        const double v = std::abs(i >= c ? w.at(i, c) : w.at(c, i));
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    return {best < 0.0 ? 0.0 : best, arg};
}

[[noreturn]] void throw_singular() {
    throw SingularShiftError(
        "A - sigma*B numerically singular; choose a different shift");
}

} // namespace

LdltFactor ldlt_rook(const SymMatrix& abreve) {
    const int n = abreve.dim();
    if (n == 0) throw std::invalid_argument("ldlt_rook: empty matrix");

    LowerWork w(abreve);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<PivotBlock> blocks;

    std::vector<double> w1(n), w2(n);

    int k = 0;
    while (k < n) {
        bool use_two = false;
        int pr = k, pp = -1;

        if (k == n - 1) {
            if (w.at(k, k) == 0.0) throw_singular();
        } else {
            auto [omega_r, p] = col_offdiag_max(w, k, k);
            if (omega_r == 0.0) {
                if (w.at(k, k) == 0.0) throw_singular();
                // Column already diagonal; 1x1 pivot in place.
            } else if (std::abs(w.at(k, k)) >= kRookAlpha * omega_r) {
                // Diagonal dominates its column.
            } else {
                // Rook search: walk to the column of the current off-diagonal
                // max until some diagonal wins or the max dominates both its
                // row and column. omega is nondecreasing along the walk, so
                // the loop terminates.
                int r = k;
                for (;;) {
                    auto [omega_p, q] = col_offdiag_max(w, k, p);
                    if (std::abs(w.at(p, p)) >= kRookAlpha * omega_p) {
                        pr = p;
                        break;
                    }
                    if (omega_p <= omega_r) {
                        use_two = true;
                        pr = std::min(r, p);
                        pp = std::max(r, p);
                        break;
                    }
                    r = p;
                    omega_r = omega_p;
                    p = q;
                }
            }
        }

        if (!use_two) {
            w.sym_swap(k, pr);
            std::swap(perm[k], perm[pr]);
            const double d = w.at(k, k);
            if (d == 0.0) throw_singular();
            blocks.push_back({1, d, 0.0, 0.0});
            for (int i = k + 1; i < n; ++i) {
                w1[i] = w.at(i, k);
                w.at(i, k) = w1[i] / d;
            }
            for (int j = k + 1; j < n; ++j) {
                const double s = w1[j] / d;
                if (s == 0.0) continue;
                for (int i = j; i < n; ++i) w.at(i, j) -= w1[i] * s;
            }
            k += 1;
        } else {
            w.sym_swap(k, pr);
            std::swap(perm[k], perm[pr]);
            w.sym_swap(k + 1, pp); // pp > pr, untouched by the first swap
            std::swap(perm[k + 1], perm[pp]);

            const double e11 = w.at(k, k);
            const double e21 = w.at(k + 1, k);
            const double e22 = w.at(k + 1, k + 1);
            // Rook acceptance makes the block safely indefinite:
            // det <= (alpha^2 - 1) e21^2 < 0.
            const double det = e11 * e22 - e21 * e21;
            if (det == 0.0) throw_singular();
            const double i11 = e22 / det;
            const double i21 = -e21 / det;
            const double i22 = e11 / det;
            blocks.push_back({2, e11, e21, e22});

            for (int i = k + 2; i < n; ++i) {
                w1[i] = w.at(i, k);
                w2[i] = w.at(i, k + 1);
                w.at(i, k) = w1[i] * i11 + w2[i] * i21;
                w.at(i, k + 1) = w1[i] * i21 + w2[i] * i22;
            }
            for (int j = k + 2; j < n; ++j) {
                const double l1 = w.at(j, k);
                const double l2 = w.at(j, k + 1);
                if (l1 == 0.0 && l2 == 0.0) continue;
                for (int i = j; i < n; ++i) w.at(i, j) -= w1[i] * l1 + w2[i] * l2;
            }
            k += 2;
        }
    }

    LdltFactor out;
    out.perm = std::move(perm);
    out.blocks = std::move(blocks);
    out.unit_lower = Matrix(n, n);
    int col = 0;
    for (const PivotBlock& blk : out.blocks) {
        for (int b = 0; b < blk.size; ++b) {
            const int j = col + b;
            out.unit_lower(j, j) = 1.0;
            for (int i = col + blk.size; i < n; ++i) out.unit_lower(i, j) = w.at(i, j);
        }
        col += blk.size;
    }
    return out;
}

Eig2x2 sym_eig_2x2(double a, double b, double c) {
    const double sm = a + c;
    const double df = a - c;
    const double adf = std::abs(df);
    const double tb = 2.0 * b;
    const double ab = std::abs(tb);

    double acmx, acmn;
    if (std::abs(a) > std::abs(c)) {
        acmx = a;
        acmn = c;
    } else {
        acmx = c;
        acmn = a;
    }

    double rt;
    if (adf > ab)
        rt = adf * std::sqrt(1.0 + (ab / adf) * (ab / adf));
    else if (adf < ab)
        rt = ab * std::sqrt(1.0 + (adf / ab) * (adf / ab));
    else
        rt = ab * std::sqrt(2.0);

    Eig2x2 out;
    int sgn1;
    if (sm < 0.0) {
        out.l1 = 0.5 * (sm - rt);
        sgn1 = -1;
        out.l2 = (acmx / out.l1) * acmn - (b / out.l1) * b;
    } else if (sm > 0.0) {
        out.l1 = 0.5 * (sm + rt);
        sgn1 = 1;
        out.l2 = (acmx / out.l1) * acmn - (b / out.l1) * b;
    } else {
        out.l1 = 0.5 * rt;
        out.l2 = -0.5 * rt;
        sgn1 = 1;
    }

    double cs, sgn2;
    if (df >= 0.0) {
        cs = df + rt;
        sgn2 = 1.0;
    } else {
        cs = df - rt;
        sgn2 = -1.0;
    }
    const double acs = std::abs(cs);
    if (acs > ab) {
        const double ct = -tb / cs;
        out.sn = 1.0 / std::sqrt(1.0 + ct * ct);
        out.cs = ct * out.sn;
    } else if (ab == 0.0) {
        out.cs = 1.0;
        out.sn = 0.0;
    } else {
        const double tn = -cs / tb;
        out.cs = 1.0 / std::sqrt(1.0 + tn * tn);
        out.sn = tn * out.cs;
    }
    if (sgn1 == int(sgn2)) {
        const double t = out.cs;
        out.cs = -out.sn;
        out.sn = t;
    }
    return out;
}

SignedFactor to_signed_factor(const LdltFactor& f) {
    const int n = f.dim();
    SignedFactor out;
    out.perm = f.perm;
    out.unit_lower = f.unit_lower;
    out.d_sigma.resize(n);
    out.d_a.resize(n);

    int k = 0;
    for (const PivotBlock& blk : f.blocks) {
        out.block_structure.push_back(blk.size);
        if (blk.size == 1) {
            if (blk.d11 == 0.0)
                throw SingularShiftError("to_signed_factor: numerically singular shift");
            out.q_blocks.push_back({1, 1.0, 0.0});
            out.d_sigma[k] = std::sqrt(std::abs(blk.d11));
            out.d_a[k] = blk.d11 > 0.0 ? 1.0 : -1.0;
            k += 1;
        } else {
            const Eig2x2 e = sym_eig_2x2(blk.d11, blk.d21, blk.d22);
            if (e.l1 == 0.0 || e.l2 == 0.0)
                throw SingularShiftError("to_signed_factor: numerically singular shift");
            out.q_blocks.push_back({2, e.cs, e.sn});
            out.d_sigma[k] = std::sqrt(std::abs(e.l1));
            out.d_sigma[k + 1] = std::sqrt(std::abs(e.l2));
            out.d_a[k] = e.l1 > 0.0 ? 1.0 : -1.0;
            out.d_a[k + 1] = e.l2 > 0.0 ? 1.0 : -1.0;
            k += 2;
        }
    }
    return out;
}

namespace {

// In-place building blocks for the Ca = P L Q Dsigma chain.

void apply_q(const SignedFactor& f, std::vector<double>& t) {
    int k = 0;
    for (const RotationBlock& q : f.q_blocks) {
        if (q.size == 2) {
            const double t0 = t[k], t1 = t[k + 1];
            t[k] = q.cs * t0 - q.sn * t1;
            t[k + 1] = q.sn * t0 + q.cs * t1;
        }
        k += q.size;
    }
}

void apply_q_transpose(const SignedFactor& f, std::vector<double>& t) {
    int k = 0;
    for (const RotationBlock& q : f.q_blocks) {
        if (q.size == 2) {
            const double t0 = t[k], t1 = t[k + 1];
            t[k] = q.cs * t0 + q.sn * t1;
            t[k + 1] = -q.sn * t0 + q.cs * t1;
        }
        k += q.size;
    }
}

void forward_unit_lower(const Matrix& l, std::vector<double>& t) {
    const int n = l.rows();
    for (int j = 0; j < n; ++j) {
        const double tj = t[j];
        if (tj == 0.0) continue;
        const double* col = l.col(j);
        for (int i = j + 1; i < n; ++i) t[i] -= col[i] * tj;
    }
}

void backward_unit_lower_transpose(const Matrix& l, std::vector<double>& t) {
    const int n = l.rows();
    for (int j = n - 1; j >= 0; --j) {
        const double* col = l.col(j);
        double s = t[j];
        for (int i = j + 1; i < n; ++i) s -= col[i] * t[i];
        t[j] = s;
    }
}

std::vector<double> solve_ca_column(const SignedFactor& f, std::span<const double> b) {
    const int n = f.dim();
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = b[f.perm[i]]; // P^T b
    forward_unit_lower(f.unit_lower, t);             // L^{-1}
    apply_q_transpose(f, t);                         // Q^T
    for (int i = 0; i < n; ++i) t[i] /= f.d_sigma[i];
    return t;
}

std::vector<double> solve_ca_transpose_column(const SignedFactor& f, std::span<const double> b) {
    const int n = f.dim();
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = b[i] / f.d_sigma[i];
    apply_q(f, t);
    backward_unit_lower_transpose(f.unit_lower, t); // L^{-T}
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[f.perm[i]] = t[i]; // P t
    return v;
}

} // namespace

Matrix solve_ca(const SignedFactor& f, const Matrix& rhs) {
    if (rhs.rows() != f.dim()) throw std::invalid_argument("solve_ca: dimension mismatch");
    Matrix x(rhs.rows(), rhs.cols());
    for (int j = 0; j < rhs.cols(); ++j) {
        std::vector<double> t =
            solve_ca_column(f, std::span<const double>(rhs.col(j), size_t(rhs.rows())));
        std::copy(t.begin(), t.end(), x.col(j));
    }
    return x;
}

Matrix solve_ca_transpose(const SignedFactor& f, const Matrix& rhs) {
    if (rhs.rows() != f.dim())
        throw std::invalid_argument("solve_ca_transpose: dimension mismatch");
    Matrix x(rhs.rows(), rhs.cols());
    for (int j = 0; j < rhs.cols(); ++j) {
        std::vector<double> t =
            solve_ca_transpose_column(f, std::span<const double>(rhs.col(j), size_t(rhs.rows())));
        std::copy(t.begin(), t.end(), x.col(j));
    }
    return x;
}

std::vector<double> apply_ca(const SignedFactor& f, std::span<const double> x) {
    const int n = f.dim();
    std::vector<double> t(x.begin(), x.end());
    for (int i = 0; i < n; ++i) t[i] *= f.d_sigma[i];
    apply_q(f, t);
    // t <- L t, computed bottom-up so finished entries are not reused.
    for (int i = n - 1; i >= 0; --i) {
        double s = t[i];
        for (int j = 0; j < i; ++j) s += f.unit_lower(i, j) * t[j];
        t[i] = s;
    }
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[f.perm[i]] = t[i];
    return y;
}

std::vector<double> apply_ca_transpose(const SignedFactor& f, std::span<const double> x) {
    const int n = f.dim();
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = x[f.perm[i]];
    // t <- L^T t, top-down.
    for (int j = 0; j < n; ++j) {
        double s = t[j];
        for (int i = j + 1; i < n; ++i) s += f.unit_lower(i, j) * t[i];
        t[j] = s;
    }
    apply_q_transpose(f, t);
    for (int i = 0; i < n; ++i) t[i] *= f.d_sigma[i];
    return t;
}

XFactor form_x(const SignedFactor& ca, const SemidefFactor& cb, const NormOptions& opts) {
    XFactor out;
    out.x = solve_ca(ca, cb.cb);
    out.norm2_x = norm2_estimate_rect(out.x, opts);
    return out;
}

} // namespace steig

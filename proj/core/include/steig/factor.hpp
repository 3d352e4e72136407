#pragma once

#include <stdexcept>
#include <vector>

#include "steig/matrix.hpp"

namespace steig {

// Thrown when a shifted matrix A - sigma*B turns out to be numerically
// singular during factorization or sign extraction.
class SingularShiftError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Truncated pivoted Cholesky factor of a positive (semi)definite B:
// B ~= cb * cb^T with cb n x r, rows in original order.
struct SemidefFactor {
    std::vector<int> perm;      // perm[k] = original index eliminated at step k
    Matrix cb;                  // n x r
    int rank = 0;
    std::vector<double> pivots; // pivot values in elimination order (nonincreasing)
};

// Diagonal-pivoted outer-product Cholesky. Stops at the first pivot that is
// <= rel_tol * max(diag(B), 0); with the default rel_tol = 0 this is the
// "factor until a nonpositive pivot appears" truncation rule. Throws
// std::runtime_error if the very first pivot already fails the test.
SemidefFactor pivoted_cholesky(const SymMatrix& b, double rel_tol = 0.0);

// One diagonal block of the block-diagonal D in P^T A P = L D L^T.
struct PivotBlock {
    int size = 1;               // 1 or 2
    double d11 = 0.0;
    double d21 = 0.0;           // 2x2 only
    double d22 = 0.0;           // 2x2 only
};

struct LdltFactor {
    std::vector<int> perm;          // perm[i] = original index at position i
    Matrix unit_lower;              // n x n, unit diagonal
    std::vector<PivotBlock> blocks;
    int dim() const { return int(perm.size()); }
};

// LDL^T with rook pivoting: the pivot search alternates row/column maxima
// until a candidate dominates both its row and its column, with the
// alpha = (1 + sqrt(17)) / 8 acceptance test. Every |L(i,j)| <= 1/(1-alpha)
// < 2.79. Throws SingularShiftError when an exactly singular pivot block is
// encountered.
LdltFactor ldlt_rook(const SymMatrix& abreve);

// A 1x1 (identity) or 2x2 rotation block of the orthogonal Q.
struct RotationBlock {
    int size = 1;
    double cs = 1.0;
    double sn = 0.0;
};

// A - sigma*B = Ca * Da * Ca^T held in product form Ca = P * L * Q * Dsigma,
// where Q is block diagonal orthogonal, Dsigma > 0 diagonal and Da = +/-1
// diagonal. Kept factored: solves are the only consumers.
struct SignedFactor {
    std::vector<int> perm;
    Matrix unit_lower;
    std::vector<RotationBlock> q_blocks;
    std::vector<double> d_sigma;        // > 0
    std::vector<double> d_a;            // +1 / -1
    std::vector<int> block_structure;   // pivot sizes, in order
    int dim() const { return int(perm.size()); }
};

// Eigendecomposes each diagonal block of D (closed-form 2x2 rotations),
// factors signs into Da and square roots into Dsigma. Throws
// SingularShiftError on a zero eigenvalue.
SignedFactor to_signed_factor(const LdltFactor& f);

// Solves Ca * X = rhs, column by column (column j of the result depends only
// on column j of rhs).
Matrix solve_ca(const SignedFactor& f, const Matrix& rhs);

// Solves Ca^T * V = rhs, column by column.
Matrix solve_ca_transpose(const SignedFactor& f, const Matrix& rhs);

// y = Ca * x and y = Ca^T * x; used by residual checks.
std::vector<double> apply_ca(const SignedFactor& f, std::span<const double> x);
std::vector<double> apply_ca_transpose(const SignedFactor& f, std::span<const double> x);

// X = Ca^{-1} Cb together with its estimated 2-norm.
struct XFactor {
    Matrix x;
    Norm2Estimate norm2_x;
};

XFactor form_x(const SignedFactor& ca, const SemidefFactor& cb, const NormOptions& opts = {});

// Eigendecomposition of [[a, b], [b, c]]: block = R diag(l1, l2) R^T with
// R = [[cs, -sn], [sn, cs]]; l1 carries the larger magnitude. Guarded
// half-angle rotation formula.
struct Eig2x2 {
    double l1 = 0.0, l2 = 0.0;
    double cs = 1.0, sn = 0.0;
};

Eig2x2 sym_eig_2x2(double a, double b, double c);

} // namespace steig

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "steig/factor.hpp"
#include "steig/matrix.hpp"
#include "steig/symeig.hpp"

namespace steig {

// Raised when eta * ||X||_2 exceeds the configured guard.
class GuardError : public std::runtime_error {
public:
    GuardError(double eta_x, double etax_max);
    double eta_x;
    double etax_max;
};

// Thrown by the standard Cholesky-based method when B is not positive
// definite.
class NotPosDefError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shift quality measures. All norms are power-iteration estimates; the
// options used are recorded alongside.
struct ShiftDiagnostics {
    double sigma = 0.0;
    double sigma0 = 0.0;  // sigma * ||B|| / ||A||
    double eta = 0.0;     // sqrt(||A - sigma B|| / ||B||)
    double eta_x = 0.0;   // eta * ||X||
    double gamma = 0.0;   // ||A|| / ||A - sigma B||
    double mu = 0.0;      // ||X||^2 / ||X^T Da X||; +inf when X^T Da X == 0
    Norm2Estimate norm_a;
    Norm2Estimate norm_b;
    Norm2Estimate norm_shifted;
    Norm2Estimate norm_x;
    NormOptions norm_options;
};

// One generalized eigenvalue (alpha, beta) of beta*A*v = alpha*B*v.
// lambda = alpha / beta when beta != 0, +inf otherwise.
struct EigenPair {
    double alpha = 0.0;
    double beta = 0.0;
    double theta = 0.0;
    double lambda = 0.0;
    bool finite() const { return beta != 0.0; }
};

struct SpectralResult {
    std::vector<EigenPair> pairs;  // sorted by theta nondecreasing
    Matrix v;                      // n x r, unit 2-norm columns
    std::optional<ShiftDiagnostics> diagnostics;
    int n = 0;
    int rank = 0;                  // r = number of finite eigenvalues returned
    int infinite_count = 0;        // n - r eigenvalues at infinity (count only)
};

struct SolveSettings {
    double etax_max = 1e4;
    NormOptions norms{};
    double cholesky_rel_tol = 0.0; // truncation tolerance for B
};

// The shifted-and-inverted driver:
//   factor A - sigma*B = Ca Da Ca^T and B = Cb Cb^T, solve Ca X = Cb,
//   guard on eta*||X||, W = X^T Da X, W = U Theta U^T,
//   solve Ca^T V = Da X U, alpha = 1 + sigma*theta, beta = theta.
SpectralResult spectral_trans_eig(const SymMatrix& a, const SymMatrix& b, double sigma,
                                  const SolveSettings& settings = {});

// W = X^T (Da X), averaged with its transpose so the result is exactly
// symmetric.
SymMatrix form_w(const Matrix& x, std::span<const double> d_a);

// Assembles diagnostics from the factored state. theta, when available, is
// used for ||X^T Da X|| (= max |theta_i|); otherwise the norm is estimated.
ShiftDiagnostics shift_diagnostics(const Norm2Estimate& norm_a, const Norm2Estimate& norm_b,
                                   const Norm2Estimate& norm_shifted, const XFactor& xf,
                                   double sigma, const std::vector<double>* theta,
                                   const SymMatrix* w, const NormOptions& opts);

// sigma = sigma0 * ||A|| / ||B|| together with the estimates used.
struct ScaledShift {
    double sigma = 0.0;
    Norm2Estimate norm_a;
    Norm2Estimate norm_b;
};

ScaledShift sigma_from_scaled(const SymMatrix& a, const SymMatrix& b, double sigma0,
                              const NormOptions& opts = {});

// The classic method: B = Cb Cb^T (unpivoted Cholesky), eigendecompose
// Cb^{-1} A Cb^{-T}, map vectors back through Cb^{-T}. Returns pairs
// (lambda_i, 1). Throws NotPosDefError when the Cholesky factorization hits
// a nonpositive pivot.
SpectralResult standard_cholesky_eig(const SymMatrix& a, const SymMatrix& b);

} // namespace steig

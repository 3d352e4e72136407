#pragma once

#include <optional>
#include <span>
#include <vector>

#include "steig/matrix.hpp"

namespace steig {

// 2-norm estimates of A and B shared by all residual evaluations of a pencil.
struct PencilNorms {
    double norm_a = 0.0;
    double norm_b = 0.0;
};

// ||beta*A*v - alpha*B*v|| / ((|beta| ||A|| + |alpha| ||B||) ||v||).
// Throws std::invalid_argument on v = 0 or (alpha, beta) = (0, 0).
double relative_residual(const SymMatrix& a, const SymMatrix& b, double alpha, double beta,
                         std::span<const double> v, const PencilNorms& norms);

// r = beta*A*v - alpha*B*v.
std::vector<double> pencil_residual_vector(const SymMatrix& a, const SymMatrix& b, double alpha,
                                           double beta, std::span<const double> v);

// scale * col * row^T, kept in factored form.
struct RankOneUpdate {
    double scale = 0.0;
    std::vector<double> col;
    std::vector<double> row;

    double norm2() const;                                  // |scale| ||col|| ||row||
    std::vector<double> apply(std::span<const double> x) const; // (scale col row^T) x
    Matrix materialize() const;
};

// The explicit rank-one perturbations E and F with
// (beta (A+E) - alpha (B+F)) v = 0 and
// max(||E||/||A||, ||F||/||B||) <= relative_residual(...).
struct BackwardErrorPair {
    RankOneUpdate e;
    RankOneUpdate f;
};

BackwardErrorPair backward_error_pair(double alpha, double beta, std::span<const double> v,
                                      std::span<const double> r, const PencilNorms& norms);

struct BestResidualOptions {
    double rayleigh_tol = 1e-8;
    int max_iter = 100;
};

// sigma_min(beta*A - alpha*B) / (|beta| ||A|| + |alpha| ||B||): the smallest
// relative residual any candidate eigenvector could achieve. sigma_min is
// computed by inverse iteration on the symmetric pencil combination; an
// exactly singular factorization means the pair is exact and 0 is returned.
double best_possible_residual(const SymMatrix& a, const SymMatrix& b, double alpha, double beta,
                              const PencilNorms& norms, const BestResidualOptions& opts = {});

struct ResidualRecord {
    int index = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double lambda = 0.0;
    double rel_res = 0.0;
    std::optional<double> best_res;
    std::optional<double> backward_eps; // max(||E||/||A||, ||F||/||B||)
};

} // namespace steig

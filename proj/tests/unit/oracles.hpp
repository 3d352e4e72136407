// Test-side oracles and generators, independent of the library's own
// factorization / eigensolver paths.
#pragma once

#include <cstdint>
#include <vector>

#include "steig/factor.hpp"
#include "steig/matrix.hpp"

namespace oracles {

// Deterministic generator (splitmix64-based uniforms).
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}
    uint64_t next_u64();
    double uniform(double lo = 0.0, double hi = 1.0);
    int uniform_int(int lo, int hi); // inclusive

private:
    uint64_t state_;
};

steig::SymMatrix random_symmetric(Rng& rng, int n, double scale = 1.0);

// B = Q diag(d) Q^T with Q a product of random Householder reflectors;
// d log-spaced in [1/cond, 1] * scale, so kappa_2(B) = cond.
steig::SymMatrix random_spd(Rng& rng, int n, double cond, double scale = 1.0);

// Positive semidefinite with exact rank r: sum of r scaled outer products of
// random orthogonalized directions.
steig::SymMatrix random_semidefinite(Rng& rng, int n, int r);

std::vector<double> random_vector(Rng& rng, int n);

// Cyclic Jacobi run to convergence; eigenvalues sorted ascending.
// Independent of the library's Householder + QL path.
std::vector<double> jacobi_eigenvalues(const steig::SymMatrix& m, int max_sweeps = 100);

// Dense reconstruction helpers.
steig::Matrix materialize_ca(const steig::SignedFactor& f);
steig::Matrix matmul(const steig::Matrix& a, const steig::Matrix& b);
steig::Matrix matmul_transpose_b(const steig::Matrix& a, const steig::Matrix& b); // a * b^T

// ||a - b||_F over all entries.
double frob_diff(const steig::Matrix& a, const steig::Matrix& b);
double frob_diff_sym(const steig::Matrix& a, const steig::SymMatrix& b);

// Angle between the lines spanned by x and y (sign-insensitive), in radians.
double line_angle(std::span<const double> x, std::span<const double> y);

} // namespace oracles

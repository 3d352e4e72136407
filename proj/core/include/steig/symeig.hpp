#pragma once

#include <vector>

#include "steig/matrix.hpp"

namespace steig {

// W = U diag(theta) U^T with theta sorted nondecreasing and U orthogonal to
// roundoff.
struct EigDecomp {
    Matrix u;
    std::vector<double> theta;
};

struct Tridiag {
    Matrix q;               // accumulated Householder product: W = Q T Q^T
    std::vector<double> diag;
    std::vector<double> off; // off[i] = T(i+1, i), size n-1
};

// Householder reduction to tridiagonal form with accumulated reflectors.
Tridiag tridiagonalize(const SymMatrix& w);

// Implicit-shift symmetric QL with Wilkinson shift on tridiagonal data;
// rotations are accumulated onto q. Deflates when
// |off(i)| <= u * (|diag(i)| + |diag(i+1)|). Throws std::runtime_error if an
// eigenvalue fails to converge within 50 sweeps.
EigDecomp tql_implicit(std::vector<double> diag, std::vector<double> off, Matrix q);

// Full symmetric eigendecomposition: tridiagonalize + implicit QL.
EigDecomp sym_eig(const SymMatrix& w);

} // namespace steig

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "steig/matrix.hpp"

namespace steig {

class MatrixMarketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MatrixMarketInfo {
    enum class Kind { coordinate, array };
    Kind kind = Kind::coordinate;
    std::string symmetry;   // "symmetric" or "general"
    int n = 0;
    int m = 0;
    long nnz = 0;           // coordinate only
};

// Accepts "matrix coordinate real symmetric" and
// "matrix array real symmetric|general" headers, square matrices only.
// Coordinate entries are 1-based; both-triangle duplicates are errors;
// unlisted entries are zero. Throws MatrixMarketError on malformed input.
SymMatrix read_matrix_market(std::istream& in, MatrixMarketInfo* info = nullptr);
SymMatrix read_matrix_market(const std::string& path, MatrixMarketInfo* info = nullptr);

// Writes in coordinate real symmetric format (lower triangle, 1-based,
// 17 significant digits so values round-trip exactly).
void write_matrix_market(std::ostream& out, const SymMatrix& m);
void write_matrix_market(const std::string& path, const SymMatrix& m);

} // namespace steig

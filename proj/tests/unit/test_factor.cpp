#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "steig/factor.hpp"

using namespace steig;

namespace {

constexpr double kU = 0x1p-53;

Matrix cb_gram(const SemidefFactor& f) { return oracles::matmul_transpose_b(f.cb, f.cb); }

// P L D L^T P^T from the block factor.
Matrix reconstruct_ldlt(const LdltFactor& f) {
    const int n = f.dim();
    Matrix d(n, n);
    int k = 0;
    for (const PivotBlock& blk : f.blocks) {
        if (blk.size == 1) {
            d(k, k) = blk.d11;
        } else {
            d(k, k) = blk.d11;
            d(k + 1, k) = blk.d21;
            d(k, k + 1) = blk.d21;
            d(k + 1, k + 1) = blk.d22;
        }
        k += blk.size;
    }
    const Matrix ld = oracles::matmul(f.unit_lower, d);
    const Matrix ldlt = oracles::matmul_transpose_b(ld, f.unit_lower);
    Matrix out(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out(f.perm[i], f.perm[j]) = ldlt(i, j);
    return out;
}

Matrix reconstruct_signed(const SignedFactor& f) {
    const Matrix ca = oracles::materialize_ca(f);
    Matrix cada = ca;
    for (int j = 0; j < f.dim(); ++j)
        for (int i = 0; i < f.dim(); ++i) cada(i, j) *= f.d_a[j];
    return oracles::matmul_transpose_b(cada, ca);
}

double max_abs_lower(const Matrix& l) {
    double m = 0.0;
    for (int j = 0; j < l.cols(); ++j)
        for (int i = j + 1; i < l.rows(); ++i) m = std::max(m, std::abs(l(i, j)));
    return m;
}

} // namespace

TEST_SUITE("factor") {

TEST_CASE("pivoted_cholesky: rank-1 all-ones B truncates after one step") {
    SymMatrix b(2);
    b.set(0, 0, 1.0); b.set(1, 0, 1.0); b.set(1, 1, 1.0);
    const SemidefFactor f = pivoted_cholesky(b);
    CHECK(f.rank == 1);
    REQUIRE(f.cb.cols() == 1);
    CHECK(std::abs(f.cb(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(f.cb(1, 0)) == doctest::Approx(1.0));
    CHECK(f.cb(0, 0) * f.cb(1, 0) > 0.0); // same sign: reconstructs the +1 off-diagonal
}

TEST_CASE("pivoted_cholesky: scalar square root") {
    SymMatrix b(1);
    b.set(0, 0, 4.0);
    const SemidefFactor f = pivoted_cholesky(b);
    CHECK(f.rank == 1);
    CHECK(f.cb(0, 0) == 2.0);
}

TEST_CASE("pivoted_cholesky: known-rank reconstruction") {
    oracles::Rng rng(5);
    const SymMatrix b = oracles::random_semidefinite(rng, 6, 3);
    const SemidefFactor f = pivoted_cholesky(b, 1e-10);
    CHECK(f.rank == 3);
    const double nb = norm2_estimate(b).value;
    CHECK(oracles::frob_diff_sym(cb_gram(f), b) <= 1e-13 * nb);
}

TEST_CASE("pivoted_cholesky: nonincreasing pivots, SPD reconstruction bound") {
    oracles::Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.uniform_int(2, 40);
        const SymMatrix b = oracles::random_spd(rng, n, 1e3);
        const SemidefFactor f = pivoted_cholesky(b);
        CHECK(f.rank == n);
        for (size_t i = 1; i < f.pivots.size(); ++i) CHECK(f.pivots[i] <= f.pivots[i - 1]);
        const double nb = norm2_estimate(b).value;
        CHECK(oracles::frob_diff_sym(cb_gram(f), b) <= 100.0 * n * kU * nb);
    }
}

TEST_CASE("pivoted_cholesky: not positive semidefinite") {
    SymMatrix b(2);
    b.set(0, 0, -1.0); b.set(1, 1, -2.0);
    CHECK_THROWS_WITH_AS(pivoted_cholesky(b), "pivoted_cholesky: matrix not positive semidefinite",
                         std::runtime_error);
}

TEST_CASE("ldlt_rook: diagonal input is its own factorization") {
    SymMatrix a(2);
    a.set(0, 0, 1.0); a.set(1, 1, -1.0);
    const LdltFactor f = ldlt_rook(a);
    REQUIRE(f.blocks.size() == 2);
    CHECK(f.blocks[0].size == 1);
    CHECK(f.blocks[0].d11 == 1.0);
    CHECK(f.blocks[1].d11 == -1.0);
    CHECK(f.perm[0] == 0);
    CHECK(f.perm[1] == 1);
    CHECK(f.unit_lower(1, 0) == 0.0);
}

TEST_CASE("ldlt_rook: zero diagonal forces a single 2x2 pivot") {
    SymMatrix a(2);
    a.set(1, 0, 1.0);
    const LdltFactor f = ldlt_rook(a);
    REQUIRE(f.blocks.size() == 1);
    CHECK(f.blocks[0].size == 2);
    CHECK(f.blocks[0].d11 == 0.0);
    CHECK(f.blocks[0].d21 == 1.0);
    CHECK(f.blocks[0].d22 == 0.0);
    CHECK(f.unit_lower(1, 0) == 0.0);
}

TEST_CASE("ldlt_rook: reconstruction and growth bound on random 10x10") {
    oracles::Rng rng(31);
    const SymMatrix a = oracles::random_symmetric(rng, 10);
    const LdltFactor f = ldlt_rook(a);
    const double na = norm2_estimate(a).value;
    CHECK(oracles::frob_diff_sym(reconstruct_ldlt(f), a) <= 1e-13 * na);
    CHECK(max_abs_lower(f.unit_lower) <= 2.79);
}

TEST_CASE("ldlt_rook: exactly singular matrix is rejected") {
    CHECK_THROWS_AS(ldlt_rook(SymMatrix(3)), SingularShiftError);
    SymMatrix a(2); // rank one
    a.set(0, 0, 1.0); a.set(1, 0, 1.0); a.set(1, 1, 1.0);
    CHECK_THROWS_AS(ldlt_rook(a), SingularShiftError);
}

TEST_CASE("to_signed_factor: diagonal blocks") {
    SymMatrix a(2);
    a.set(0, 0, 4.0); a.set(1, 1, -9.0);
    const SignedFactor f = to_signed_factor(ldlt_rook(a));
    // diagonal columns are accepted in place: Dsigma = diag(2, 3)
    CHECK(f.d_sigma[0] == doctest::Approx(2.0));
    CHECK(f.d_sigma[1] == doctest::Approx(3.0));
    CHECK(f.d_a[0] == 1.0);
    CHECK(f.d_a[1] == -1.0);
    CHECK(oracles::frob_diff_sym(reconstruct_signed(f), a) <= 1e-14);
}

TEST_CASE("to_signed_factor: 2x2 rotation block reconstructs [[0,1],[1,0]]") {
    SymMatrix a(2);
    a.set(1, 0, 1.0);
    const SignedFactor f = to_signed_factor(ldlt_rook(a));
    REQUIRE(f.block_structure.size() == 1);
    CHECK(f.block_structure[0] == 2);
    CHECK(f.d_sigma[0] == doctest::Approx(1.0));
    CHECK(f.d_sigma[1] == doctest::Approx(1.0));
    CHECK(f.d_a[0] * f.d_a[1] == -1.0);
    CHECK(oracles::frob_diff_sym(reconstruct_signed(f), a) <= 1e-15);
}

TEST_CASE("to_signed_factor: the sign-split diagonal stays untouched") {
    SymMatrix a(2);
    a.set(0, 0, 1.0); a.set(1, 1, -1.0);
    const SignedFactor f = to_signed_factor(ldlt_rook(a));
    CHECK(f.d_sigma[0] == 1.0);
    CHECK(f.d_sigma[1] == 1.0);
    CHECK(f.d_a[0] == 1.0);
    CHECK(f.d_a[1] == -1.0);
}

TEST_CASE("signed factor invariants on random matrices") {
    oracles::Rng rng(37);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = rng.uniform_int(2, 60);
        const SymMatrix a = oracles::random_symmetric(rng, n);
        const SignedFactor f = to_signed_factor(ldlt_rook(a));
        const double na = norm2_estimate(a).value;

        for (double d : f.d_a) CHECK(std::abs(d) == 1.0);
        for (double d : f.d_sigma) CHECK(d > 0.0);
        CHECK(max_abs_lower(f.unit_lower) <= 2.79);
        CHECK(oracles::frob_diff_sym(reconstruct_signed(f), a) <= 100.0 * n * kU * na);

        // ||Ca||^2 <= 10 n ||A - sigma B|| (rook growth surrogate)
        const Matrix ca = oracles::materialize_ca(f);
        const double nca = norm2_estimate_rect(ca).value;
        CHECK(nca * nca <= 10.0 * n * na);

        // Q orthogonality per block
        for (const RotationBlock& q : f.q_blocks) {
            if (q.size == 1) continue;
            const double r1 = q.cs * q.cs + q.sn * q.sn - 1.0;
            CHECK(std::abs(r1) <= 50.0 * kU);
        }
    }
}

TEST_CASE("solve_ca: identity factor and scalar scaling") {
    SymMatrix eye(2);
    eye.set(0, 0, 1.0); eye.set(1, 1, -1.0); // Ca = I, Da = diag(1,-1)
    const SignedFactor f = to_signed_factor(ldlt_rook(eye));
    Matrix rhs(2, 1);
    rhs(0, 0) = 1.0; rhs(1, 0) = 1.0;
    const Matrix x = solve_ca(f, rhs);
    CHECK(x(0, 0) == 1.0);
    CHECK(x(1, 0) == 1.0);

    SymMatrix four = SymMatrix(2); // Ca = 2I
    four.set(0, 0, 4.0); four.set(1, 1, 4.0);
    const SignedFactor f4 = to_signed_factor(ldlt_rook(four));
    const Matrix x4 = solve_ca(f4, Matrix::identity(2));
    CHECK(x4(0, 0) == doctest::Approx(0.5));
    CHECK(x4(1, 1) == doctest::Approx(0.5));
    CHECK(x4(1, 0) == 0.0);
}

TEST_CASE("solve_ca / solve_ca_transpose: residuals on random systems") {
    oracles::Rng rng(41);
    const SymMatrix a = oracles::random_spd(rng, 8, 10.0); // well conditioned
    const SignedFactor f = to_signed_factor(ldlt_rook(a));
    Matrix rhs(8, 2);
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 8; ++i) rhs(i, j) = rng.uniform(-1.0, 1.0);

    const Matrix x = solve_ca(f, rhs);
    const Matrix ca = oracles::materialize_ca(f);
    const double nca = norm2_estimate_rect(ca).value;
    const double nx = norm2_estimate_rect(x).value;
    CHECK(oracles::frob_diff(oracles::matmul(ca, x), rhs) <= 1e-13 * nca * nx);

    const Matrix v = solve_ca_transpose(f, rhs);
    Matrix cav(8, 2);
    for (int j = 0; j < 2; ++j) {
        const std::vector<double> col =
            apply_ca_transpose(f, std::span<const double>(v.col(j), 8));
        for (int i = 0; i < 8; ++i) cav(i, j) = col[i];
    }
    const double nv = norm2_estimate_rect(v).value;
    CHECK(oracles::frob_diff(cav, rhs) <= 1e-13 * nca * nv);
}

TEST_CASE("solve_ca_transpose: identity-factor chain recovers [1,-1]") {
    SymMatrix abreve(2);
    abreve.set(0, 0, 1.0); abreve.set(1, 1, -1.0);
    const SignedFactor f = to_signed_factor(ldlt_rook(abreve));
    Matrix rhs(2, 1);
    rhs(0, 0) = 1.0; rhs(1, 0) = -1.0; // Da X u
    const Matrix v = solve_ca_transpose(f, rhs);
    CHECK(v(0, 0) == 1.0);
    CHECK(v(1, 0) == -1.0);
}

TEST_CASE("solve_ca: column permutation of the rhs permutes the solution bit-exactly") {
    oracles::Rng rng(43);
    const SymMatrix a = oracles::random_symmetric(rng, 7);
    const SignedFactor f = to_signed_factor(ldlt_rook(a));
    Matrix rhs(7, 3);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 7; ++i) rhs(i, j) = rng.uniform(-1.0, 1.0);
    Matrix swapped(7, 3);
    for (int i = 0; i < 7; ++i) {
        swapped(i, 0) = rhs(i, 2);
        swapped(i, 1) = rhs(i, 0);
        swapped(i, 2) = rhs(i, 1);
    }
    const Matrix x = solve_ca(f, rhs);
    const Matrix y = solve_ca(f, swapped);
    for (int i = 0; i < 7; ++i) {
        CHECK(y(i, 0) == x(i, 2));
        CHECK(y(i, 1) == x(i, 0));
        CHECK(y(i, 2) == x(i, 1));
    }
}

TEST_CASE("form_x: X factor carries a consistent residual") {
    oracles::Rng rng(47);
    const SymMatrix abreve = oracles::random_symmetric(rng, 9);
    const SymMatrix b = oracles::random_spd(rng, 9, 100.0);
    const SignedFactor ca = to_signed_factor(ldlt_rook(abreve));
    const SemidefFactor cb = pivoted_cholesky(b);
    const XFactor xf = form_x(ca, cb);
    const Matrix cax = oracles::matmul(oracles::materialize_ca(ca), xf.x);
    const double nca = norm2_estimate_rect(oracles::materialize_ca(ca)).value;
    CHECK(oracles::frob_diff(cax, cb.cb) <= 100.0 * 9 * kU * nca * xf.norm2_x.value);
}

} // TEST_SUITE

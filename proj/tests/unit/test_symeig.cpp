#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "steig/symeig.hpp"

using namespace steig;

namespace {

constexpr double kU = 0x1p-53;

// ||U^T U - I||_F
double ortho_residual(const Matrix& u) {
    const int n = u.cols();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double d = 0.0;
            for (int k = 0; k < u.rows(); ++k) d += u(k, i) * u(k, j);
            if (i == j) d -= 1.0;
            s += d * d;
        }
    return std::sqrt(s);
}

double eig_residual(const SymMatrix& w, const EigDecomp& e) {
    // ||W U - U diag(theta)||_F
    const int n = w.dim();
    double s = 0.0;
    for (int j = 0; j < int(e.theta.size()); ++j) {
        const std::vector<double> wu =
            sym_matvec(w, std::span<const double>(e.u.col(j), size_t(n)));
        for (int i = 0; i < n; ++i) {
            const double d = wu[i] - e.theta[j] * e.u(i, j);
            s += d * d;
        }
    }
    return std::sqrt(s);
}

} // namespace

TEST_SUITE("symeig") {

TEST_CASE("tridiagonalize: diagonal and already-tridiagonal input") {
    SymMatrix d(3);
    d.set(0, 0, 3.0); d.set(1, 1, 1.0); d.set(2, 2, 2.0);
    const Tridiag t = tridiagonalize(d);
    CHECK(t.diag == std::vector<double>{3.0, 1.0, 2.0});
    CHECK(t.off == std::vector<double>{0.0, 0.0});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(t.q(i, j) == (i == j ? 1.0 : 0.0));

    SymMatrix tri(4);
    tri.set(0, 0, 1.0); tri.set(1, 0, 0.5); tri.set(1, 1, 2.0);
    tri.set(2, 1, -0.25); tri.set(2, 2, 3.0); tri.set(3, 2, 1.5); tri.set(3, 3, 4.0);
    const Tridiag t2 = tridiagonalize(tri);
    CHECK(t2.diag == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(t2.off == std::vector<double>{0.5, -0.25, 1.5});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(t2.q(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("tridiagonalize: similarity reconstruction on random 10x10") {
    oracles::Rng rng(3);
    const SymMatrix w = oracles::random_symmetric(rng, 10);
    const Tridiag t = tridiagonalize(w);
    // Q^T W Q should equal the tridiagonal T.
    Matrix wq(10, 10);
    for (int j = 0; j < 10; ++j) {
        const std::vector<double> col =
            sym_matvec(w, std::span<const double>(t.q.col(j), 10));
        for (int i = 0; i < 10; ++i) wq(i, j) = col[i];
    }
    Matrix qtwq(10, 10);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            double s = 0.0;
            for (int k = 0; k < 10; ++k) s += t.q(k, i) * wq(k, j);
            qtwq(i, j) = s;
        }
    Matrix tmat(10, 10);
    for (int i = 0; i < 10; ++i) tmat(i, i) = t.diag[i];
    for (int i = 0; i + 1 < 10; ++i) {
        tmat(i + 1, i) = t.off[i];
        tmat(i, i + 1) = t.off[i];
    }
    const double nw = norm2_estimate(w).value;
    CHECK(oracles::frob_diff(qtwq, tmat) <= 1e-13 * nw);
}

TEST_CASE("tql_implicit: trivial diagonal and 2x2 swap matrix") {
    const EigDecomp d =
        tql_implicit({1.0, 1.0}, {0.0}, Matrix::identity(2));
    CHECK(d.theta == std::vector<double>{1.0, 1.0});
    CHECK(d.u(0, 0) == 1.0);
    CHECK(d.u(1, 1) == 1.0);

    SymMatrix swap(2);
    swap.set(1, 0, 1.0);
    const EigDecomp e = sym_eig(swap);
    CHECK(e.theta[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(e.theta[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tql_implicit: matches the Jacobi oracle on random 12x12") {
    oracles::Rng rng(9);
    const SymMatrix w = oracles::random_symmetric(rng, 12);
    const EigDecomp e = sym_eig(w);
    const std::vector<double> oracle = oracles::jacobi_eigenvalues(w);
    const double nw = norm2_estimate(w).value;
    REQUIRE(e.theta.size() == oracle.size());
    for (size_t i = 0; i < oracle.size(); ++i)
        CHECK(std::abs(e.theta[i] - oracle[i]) <= 1e-12 * nw);
}

TEST_CASE("sym_eig: 1x1 zero, identity, analytic diagonal") {
    SymMatrix z(1);
    const EigDecomp e0 = sym_eig(z);
    CHECK(e0.theta == std::vector<double>{0.0});
    CHECK(e0.u(0, 0) == 1.0);

    const EigDecomp e1 = sym_eig(SymMatrix::identity(3));
    CHECK(e1.theta == std::vector<double>{1.0, 1.0, 1.0});

    SymMatrix d(2);
    d.set(0, 0, 1.0 / 3.0); d.set(1, 1, 0.25);
    const EigDecomp e2 = sym_eig(d);
    CHECK(e2.theta[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(e2.theta[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("sym_eig: decomposition invariants up to n = 200") {
    oracles::Rng rng(15);
    for (int n : {5, 40, 200}) {
        const SymMatrix w = oracles::random_symmetric(rng, n);
        const EigDecomp e = sym_eig(w);
        const double nw = norm2_estimate(w).value;
        for (size_t i = 1; i < e.theta.size(); ++i) CHECK(e.theta[i] >= e.theta[i - 1]);
        CHECK(ortho_residual(e.u) <= 500.0 * n * kU);
        CHECK(eig_residual(w, e) <= 500.0 * n * kU * nw);

        double trace = 0.0, sum = 0.0;
        for (int i = 0; i < n; ++i) trace += w(i, i);
        for (double t : e.theta) sum += t;
        CHECK(std::abs(trace - sum) <= 1e-12 * nw * n);
    }
}

TEST_CASE("sym_eig: Weyl perturbation bound") {
    oracles::Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.uniform_int(2, 30);
        const SymMatrix w = oracles::random_symmetric(rng, n);
        const SymMatrix g = oracles::random_symmetric(rng, n, 0.05);
        SymMatrix wg(n);
        for (int j = 0; j < n; ++j)
            for (int i = j; i < n; ++i) wg.set(i, j, w(i, j) + g(i, j));
        const EigDecomp ew = sym_eig(w);
        const EigDecomp ewg = sym_eig(wg);
        const std::vector<double> geig = oracles::jacobi_eigenvalues(g);
        double gnorm = 0.0;
        for (double t : geig) gnorm = std::max(gnorm, std::abs(t));
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(ew.theta[i] - ewg.theta[i]) <= gnorm * (1.0 + 1e-10));
    }
}

} // TEST_SUITE

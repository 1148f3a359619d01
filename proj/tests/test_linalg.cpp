#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rdpg/linalg.hpp"

using namespace rdpg;

namespace {

DenseMatrix random_spd(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DenseMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = dist(rng);
    DenseMatrix a = matmul(b.transposed(), b);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += double(n);
    return a;
}

}  // namespace

TEST_CASE("cholesky_solve on the identity returns the rhs", "[linalg]") {
    auto a = DenseMatrix::identity(4);
    std::vector<double> b = {1.0, -2.0, 3.5, 0.25};
    auto x = cholesky_solve(a, b);
    for (std::size_t i = 0; i < 4; ++i) CHECK(x[i] == Catch::Approx(b[i]).margin(0.0));
}

TEST_CASE("cholesky_solve reproduces exact Hilbert 5x5 inverse columns", "[linalg]") {
    // H_ij = 1/(i+j+1). Inverse entries are integers; first column is
    // (25, -300, 1050, -1400, 630).
    DenseMatrix h(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) h(i, j) = 1.0 / double(i + j + 1);
    std::vector<double> e0 = {1, 0, 0, 0, 0};
    auto x = cholesky_solve(h, e0);
    const double expected[5] = {25, -300, 1050, -1400, 630};
    for (std::size_t i = 0; i < 5; ++i) CHECK(x[i] == Catch::Approx(expected[i]).epsilon(1e-9));
}

TEST_CASE("cholesky_solve residual on random SPD systems", "[linalg]") {
    for (std::uint64_t seed : {11u, 22u, 33u}) {
        auto a = random_spd(20, seed);
        std::mt19937_64 rng(seed + 1000);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> b(20);
        for (auto& v : b) v = dist(rng);
        auto x = cholesky_solve(a, b);
        auto r = a.apply(x);
        double rn = 0.0, bn = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            rn += (r[i] - b[i]) * (r[i] - b[i]);
            bn += b[i] * b[i];
        }
        CHECK(std::sqrt(rn) <= 1e-11 * std::sqrt(bn));
    }
}

TEST_CASE("cholesky rejects indefinite matrices", "[linalg]") {
    DenseMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    CHECK_THROWS(CholeskyFactor(a));
}

TEST_CASE("sym_gen_eig with M = I matches the standard problem", "[linalg]") {
    DenseMatrix s(3, 3);
    s(0, 0) = 2.0; s(1, 1) = 5.0; s(2, 2) = 9.0;
    s(0, 1) = s(1, 0) = 1.0;
    auto e = sym_gen_eig(s, DenseMatrix::identity(3));
    auto ref = jacobi_eigensolver(s);
    REQUIRE(e.values.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(e.values[i] == Catch::Approx(ref.values[i]).epsilon(1e-12));
}

TEST_CASE("sym_gen_eig with S = 2M gives all eigenvalues 2", "[linalg]") {
    auto m = random_spd(6, 7u);
    DenseMatrix s(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) s(i, j) = 2.0 * m(i, j);
    auto e = sym_gen_eig(s, m);
    for (double v : e.values) CHECK(v == Catch::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("sym_gen_eig 2x2 hand-computed pair", "[linalg]") {
    // S = [[2,0],[0,8]], M = [[1,0],[0,2]] -> lambda = {2, 4}.
    DenseMatrix s(2, 2), m(2, 2);
    s(0, 0) = 2.0; s(1, 1) = 8.0;
    m(0, 0) = 1.0; m(1, 1) = 2.0;
    auto e = sym_gen_eig(s, m);
    CHECK(e.values[0] == Catch::Approx(2.0).epsilon(1e-13));
    CHECK(e.values[1] == Catch::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("sym_gen_eig residual bound per pair", "[linalg]") {
    auto s = random_spd(12, 5u);
    auto m = random_spd(12, 6u);
    auto e = sym_gen_eig(s, m);
    const double sn = s.frobenius_norm(), mn = m.frobenius_norm();
    for (std::size_t k = 0; k < 12; ++k) {
        std::vector<double> phi(12);
        for (std::size_t i = 0; i < 12; ++i) phi[i] = e.vectors(i, k);
        auto sp = s.apply(phi);
        auto mp = m.apply(phi);
        double rn = 0.0;
        for (std::size_t i = 0; i < 12; ++i) {
            const double r = sp[i] - e.values[k] * mp[i];
            rn += r * r;
        }
        CHECK(std::sqrt(rn) <= 1e-10 * (sn + std::abs(e.values[k]) * mn));
    }
}

TEST_CASE("cg_solve on a diagonal system", "[linalg]") {
    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t i = 0; i < 10; ++i) t.push_back({i, i, double(i + 1)});
    SparseMatrix a(10, t, true);
    std::vector<double> b(10, 1.0);
    auto res = cg_solve(a, b, 1e-13);
    for (std::size_t i = 0; i < 10; ++i) CHECK(res.x[i] == Catch::Approx(1.0 / double(i + 1)).epsilon(1e-10));
}

TEST_CASE("cg_solve matches dense solve for the 1D Laplacian", "[linalg]") {
    const std::size_t n = 40;
    std::vector<SparseMatrix::Triplet> t;
    DenseMatrix ad(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back({i, i, 2.0});
        ad(i, i) = 2.0;
        if (i + 1 < n) {
            t.push_back({i, i + 1, -1.0});
            t.push_back({i + 1, i, -1.0});
            ad(i, i + 1) = ad(i + 1, i) = -1.0;
        }
    }
    SparseMatrix a(n, t, true);
    CHECK(a.is_structurally_symmetric());
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = std::sin(0.3 * double(i));
    auto xs = cg_solve(a, b, 1e-13).x;
    auto xd = cholesky_solve(ad, b);
    for (std::size_t i = 0; i < n; ++i) CHECK(xs[i] == Catch::Approx(xd[i]).margin(1e-9));
}

TEST_CASE("cg error is nonincreasing in the A-norm", "[linalg]") {
    const std::size_t n = 30;
    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back({i, i, 2.0 + 0.05 * double(i)});
        if (i + 1 < n) {
            t.push_back({i, i + 1, -1.0});
            t.push_back({i + 1, i, -1.0});
        }
    }
    SparseMatrix a(n, t, true);
    std::vector<double> xstar(n);
    for (std::size_t i = 0; i < n; ++i) xstar[i] = std::cos(0.2 * double(i));
    std::vector<double> b(n);
    a.apply(xstar, b);

    auto a_norm_error = [&](const std::vector<double>& x) {
        std::vector<double> e(n), ae(n);
        for (std::size_t i = 0; i < n; ++i) e[i] = x[i] - xstar[i];
        a.apply(e, ae);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += e[i] * ae[i];
        return std::sqrt(std::max(0.0, s));
    };
    // CG iterates are deterministic, so tightening the tolerance only extends
    // the same iteration sequence; the A-norm error along it is nonincreasing.
    double last = std::numeric_limits<double>::infinity();
    for (double tol : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
        auto r = cg_solve(a, b, tol);
        const double err = a_norm_error(r.x);
        CHECK(err <= last * (1.0 + 1e-12) + 1e-15);
        last = err;
    }
}

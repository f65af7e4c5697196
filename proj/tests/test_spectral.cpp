#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fusion/criteria.hpp"
#include "fusion/spectral.hpp"
#include "helpers.hpp"

using namespace fusion;

namespace {

const double pi = std::numbers::pi;

cplx zeta(int n, int k) { return std::polar(1.0, 2 * pi * k / n); }

using th::same_columns;

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("ruled-out 210 character table matches the printed table") {
    auto ct = character_table(th::ring("r7-210-ruledout"));
    auto z = [](int a, int b) { return -zeta(7, a) - zeta(7, b); };
    Eigen::MatrixXcd want(7, 7);
    want << 1, 1, 1, 1, 1, 1, 1,
            5, -1, z(1, 6), z(5, 2), z(4, 3), 0, 0,
            5, -1, z(5, 2), z(4, 3), z(1, 6), 0, 0,
            5, -1, z(4, 3), z(1, 6), z(5, 2), 0, 0,
            6, 0, -1, -1, -1, 1, 1,
            7, 1, 0, 0, 0, 0, -3,
            7, 1, 0, 0, 0, -1, 2;
    CHECK(same_columns(ct.lambda, want, 1e-8));
    CHECK((ct.lambda.col(0) - want.col(0)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(ct.residual < 1e-8);
}

TEST_CASE("F210 and F660 character tables match the printed tables") {
    auto z7 = [](int a, int b) { return -zeta(7, a) - zeta(7, b); };
    auto z5 = [](int a, int b) { return zeta(5, a) + zeta(5, b); };
    Eigen::MatrixXcd f210(7, 7);
    f210 << 1, 1, 1, 1, 1, 1, 1,
            5, -1, z7(1, 6), z7(5, 2), z7(4, 3), 0, 0,
            5, -1, z7(5, 2), z7(4, 3), z7(1, 6), 0, 0,
            5, -1, z7(4, 3), z7(1, 6), z7(5, 2), 0, 0,
            6, 0, -1, -1, -1, 1, 1,
            7, 1, 0, 0, 0, z5(1, 4), z5(2, 3),
            7, 1, 0, 0, 0, z5(2, 3), z5(1, 4);
    CHECK(same_columns(character_table(th::ring("f210")).lambda, f210, 1e-8));

    cplx e1 = zeta(11, 1) + zeta(11, 3) + zeta(11, 4) + zeta(11, 5) + zeta(11, 9);
    cplx e2 = zeta(11, 2) + zeta(11, 6) + zeta(11, 7) + zeta(11, 8) + zeta(11, 10);
    double r3 = std::sqrt(3.0);
    Eigen::MatrixXcd f660(8, 8);
    f660 << 1, 1, 1, 1, 1, 1, 1, 1,
            5, 0, -1, 1, -1, 0, e1, e2,
            5, 0, -1, 1, -1, 0, e2, e1,
            10, 0, 1 + r3, 0, 1 - r3, 0, -1, -1,
            10, 0, 1 - r3, 0, 1 + r3, 0, -1, -1,
            11, 1, -1, -1, -1, 1, 0, 0,
            12, z5(1, 4), 0, 0, 0, z5(2, 3), 1, 1,
            12, z5(2, 3), 0, 0, 0, z5(1, 4), 1, 1;
    CHECK(same_columns(character_table(th::ring("f660")).lambda, f660, 1e-8));
}

TEST_CASE("cyclic groups give the DFT matrix") {
    for (int n = 1; n <= 12; ++n) {
        auto ct = character_table(cyclic_group_ring(n));
        Eigen::MatrixXcd dft(n, n);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) dft(k, j) = zeta(n, j * k);
        CAPTURE(n);
        CHECK(same_columns(ct.lambda, dft, 1e-9));
    }
}

TEST_CASE("rank-3 closed form table on random feasible points") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int done = 0;
    while (done < 50) {
        double n = 0.1 + 9.9 * U(rng), m = n * U(rng), q = 10 * U(rng);
        double p = (m * m + n * n - 1 - m * q) / n;
        if (p < 0) continue;
        auto fd = new_fusion_data({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                                   {{0, 1, 0}, {1, p, m}, {0, m, n}},
                                   {{0, 0, 1}, {0, m, n}, {1, n, q}}},
                                  Mode::Float);
        REQUIRE(verify_axioms(fd).all_pass());
        Eigen::MatrixXcd want = th::rank3_closed_form(m, n, q);
        auto ct = character_table(fd);
        CAPTURE(m);
        CAPTURE(n);
        CAPTURE(q);
        CHECK(same_columns(ct.lambda, want, 1e-8));
        ++done;
    }
}

TEST_CASE("table invariants on the corpus") {
    for (const auto& e : corpus()) {
        CAPTURE(e.id);
        auto ct = character_table(e.fd);
        const auto& d = e.fd.fp_dims();
        int m = e.fd.rank();
        for (int i = 0; i < m; ++i) CHECK(std::abs(ct.lambda(i, 0) - d[i]) < 1e-8);
        for (int j = 0; j < m; ++j) CHECK(std::abs(ct.lambda(0, j) - 1.0) < 1e-12);
        CHECK(verify_character_table(e.fd, ct) <= 1e-8 * (1 + d[m - 1]));
        for (int j = 0; j < m; ++j) CHECK(ct.conjugate(j) >= 0);
    }
}

TEST_CASE("validated tables are stable across reseeds") {
    for (const auto& e : corpus()) {
        auto base = character_table(e.fd);
        for (std::uint64_t s = 1; s <= 100; ++s) {
            SpectralOptions o;
            o.seed = s * 7919;
            auto ct = character_table(e.fd, o);
            double tol = 1e-8 * (1 + e.fd.fp_dims().back());
            if (verify_character_table(e.fd, ct) > tol || (ct.lambda - base.lambda).cwiseAbs().maxCoeff() > 1e-7) {
                FAIL_CHECK(e.id << " seed " << s);
                break;
            }
        }
    }
}

TEST_CASE("verify_character_table detects a zeroed entry") {
    const auto& fd = th::ring("psl25");
    auto ct = character_table(fd);
    auto bad = ct;
    bad.lambda(3, 2) = 0;
    // residual of column 2 under M_4 is |lambda| * |v|, v a unit vector
    double expect = std::abs(ct.lambda(3, 2)) * ct.eigenvectors.col(2).norm();
    CHECK(verify_character_table(fd, bad) >= expect - 1e-9);
    auto triv = new_fusion_data({{{1}}}, Mode::Exact);
    CHECK(verify_character_table(triv, character_table(triv)) == doctest::Approx(0.0));
}

TEST_CASE("non-commutative input is rejected") {
    auto p = th::ring("psl25");
    auto t = p.tensor();
    t[p.idx(1, 2, 3)] += 1;
    auto nc = FusionData::from_tensor(5, t, p.dual(), Mode::Exact);
    CHECK_THROWS_AS(character_table(nc), Error);
}

TEST_CASE("dual projections of cyclic groups are DFT idempotents") {
    for (int n : {2, 3, 5, 8}) {
        auto fd = cyclic_group_ring(n);
        auto ct = character_table(fd);
        auto P = dual_projections(fd, ct);
        REQUIRE(static_cast<int>(P.size()) == n);
        for (const auto& p : P) {
            // find the frequency j with chi(x_1) = zeta^j
            int j = 0;
            for (; j < n; ++j)
                if (n == 1 || std::abs(ct.lambda(1 % n, p.index) - zeta(n, j)) < 1e-9) break;
            REQUIRE(j < n);
            for (int k = 0; k < n; ++k) CHECK(std::abs(p.coeffs[k] - zeta(n, -j * k) / double(n)) < 1e-10);
            CHECK(std::abs(p.trace - 1.0 / n) < 1e-12);
            CHECK(p.normalization == doctest::Approx(double(n)));
        }
    }
}

TEST_CASE("dual projections: idempotent, orthogonal, partition of unity") {
    for (const auto& e : corpus()) {
        CAPTURE(e.id);
        auto ct = character_table(e.fd);
        auto P = dual_projections(e.fd, ct);
        int m = e.fd.rank();
        cplx tr = 0;
        for (int a = 0; a < m; ++a) {
            tr += P[a].trace;
            for (int b = 0; b < m; ++b) {
                auto prod = fusion_product(e.fd, P[a].coeffs, P[b].coeffs);
                Eigen::VectorXcd want = a == b ? P[a].coeffs : Eigen::VectorXcd::Zero(m);
                CHECK((prod - want).norm() < 1e-9);
            }
        }
        CHECK(std::abs(tr - 1.0) < 1e-9);
        CHECK(std::abs(P[0].trace - 1.0 / global_fpdim(e.fd)) < 1e-12);
    }
}

TEST_CASE("the first dual projection is the support projection") {
    const auto& fd = th::ring("f210");
    auto P = dual_projections(fd, character_table(fd));
    const auto& d = fd.fp_dims();
    for (int k = 0; k < 7; ++k) CHECK(std::abs(P[0].coeffs[k] - d[k] / 210.0) < 1e-12);
}

TEST_CASE("the literal d^{-1}-weighted projection formula is not idempotent off group rings") {
    // sum_k d_k^{-1} chi_1(x_k) x_{k*} = sum_k x_k for the Perron character
    const auto& fd = th::ring("psl25");
    Eigen::VectorXcd p = Eigen::VectorXcd::Ones(5);
    auto p2 = fusion_product(fd, p, p);
    cplx c = p.dot(p2) / p.squaredNorm();
    CHECK((p2 - c * p).norm() > 1.0);
}

TEST_CASE("dual fusion coefficients") {
    auto z5 = cyclic_group_ring(5);
    auto ct = character_table(z5);
    auto N = dual_fusion_coefficients(z5, ct);
    for (int j = 0; j < 5; ++j)
        for (int k = 0; k < 5; ++k) {
            int hits = 0;
            for (int s = 0; s < 5; ++s) {
                double v = N[(j * 5 + k) * 5 + s];
                if (std::abs(v - 0.2) < 1e-10) ++hits;
                else CHECK(std::abs(v) < 1e-10);
            }
            CHECK(hits == 1);
        }
    auto minN = [](const FusionData& fd) {
        auto v = dual_fusion_coefficients(fd, character_table(fd));
        return *std::min_element(v.begin(), v.end());
    };
    CHECK(minN(th::ring("r7-210-ruledout")) < -1e-3);
    CHECK(minN(th::ring("f660")) > -1e-9);
}

TEST_CASE("dual coefficient signs agree with triple sums on the corpus") {
    for (const auto& e : corpus()) {
        CAPTURE(e.id);
        auto ct = character_table(e.fd);
        auto N = dual_fusion_coefficients(e.fd, ct);
        double mn = *std::min_element(N.begin(), N.end());
        auto rep = schur_commutative(ct);
        double tol = rep.tolerance;
        CHECK((mn >= -tol) == rep.holds);
    }
}

}  // TEST_SUITE

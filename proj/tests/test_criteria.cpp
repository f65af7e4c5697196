#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "fusion/criteria.hpp"
#include "helpers.hpp"

using namespace fusion;

TEST_SUITE("criteria") {

TEST_CASE("ruled-out 210 ring: the last column gives -65/42") {
    const auto& fd = th::ring("r7-210-ruledout");
    auto ct = character_table(fd);
    auto rep = schur_commutative(ct);
    CHECK_FALSE(rep.holds);
    CHECK(std::abs(rep.worst_value + 65.0 / 42.0) < 1e-8);
    CHECK(rep.worst_triple[0] == rep.worst_triple[1]);
    CHECK(rep.worst_triple[1] == rep.worst_triple[2]);
    // the column is (1,0,0,0,1,-3,2)
    int c = rep.worst_triple[0];
    double col[7] = {1, 0, 0, 0, 1, -3, 2};
    for (int i = 0; i < 7; ++i) CHECK(std::abs(ct.lambda(i, c) - col[i]) < 1e-8);
    // independent hand evaluation: 1 + 1/6 - 27/7 + 8/7
    CHECK(1.0 + 1.0 / 6 - 27.0 / 7 + 8.0 / 7 == doctest::Approx(-65.0 / 42));
}

TEST_CASE("triple (1,1,1) gives mu") {
    for (const auto& e : corpus()) {
        auto ct = character_table(e.fd);
        CHECK(schur_triple_sum(ct, 0, 0, 0).real() == doctest::Approx(global_fpdim(e.fd)).epsilon(1e-10));
    }
}

TEST_CASE("Z/3 triple sums against the DFT table") {
    auto ct = character_table(cyclic_group_ring(3));
    cplx w = std::polar(1.0, 2 * std::numbers::pi / 3);
    auto brute = [&](int a, int b, int c) {
        cplx s = 0;
        for (int k = 0; k < 3; ++k) s += std::pow(w, (a + b + c) * k);
        return s;
    };
    // map table columns to DFT frequencies via chi(x_2)
    int freq[3];
    for (int j = 0; j < 3; ++j)
        for (int f = 0; f < 3; ++f)
            if (std::abs(ct.lambda(1, j) - std::pow(w, f)) < 1e-9) freq[j] = f;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                CHECK(std::abs(schur_triple_sum(ct, a, b, c) - brute(freq[a], freq[b], freq[c])) < 1e-12);
    // a single nontrivial column cubes to the trivial character
    CHECK(std::abs(schur_triple_sum(ct, 1, 1, 1) - 3.0) < 1e-12);
    CHECK(std::abs(schur_triple_sum(ct, 1, 1, ct.conjugate(1))) < 1e-12);
}

TEST_CASE("Schur census over the 34 classified rings") {
    int holds = 0;
    std::vector<std::string> passing;
    for (const auto& e : corpus()) {
        if (!e.simple_frobenius_list) continue;
        auto rep = schur_commutative(character_table(e.fd));
        if (rep.holds) {
            ++holds;
            passing.push_back(e.id);
        }
        CAPTURE(e.id);
        REQUIRE(e.schur);
        CHECK(rep.holds == *e.schur);
    }
    CHECK(holds == 6);
    CHECK(std::find(passing.begin(), passing.end(), "f210") != passing.end());
    CHECK(std::find(passing.begin(), passing.end(), "f660") != passing.end());
}

TEST_CASE("non-Frobenius fixtures") {
    for (const char* id : {"r6-924", "r6-1320", "r7-560", "r7-798"}) {
        CAPTURE(id);
        CHECK(schur_commutative(character_table(th::ring(id))).holds);
    }
}

TEST_CASE("decide mode stops early") {
    auto ct = character_table(th::ring("r7-210-ruledout"));
    SchurOptions o;
    o.survey = false;
    auto quick = schur_commutative(ct, o);
    auto full = schur_commutative(ct);
    CHECK_FALSE(quick.holds);
    CHECK(quick.triples_scanned < full.triples_scanned);
    CHECK(full.triples_scanned == 84);  // C(7+2, 3)
    SchurOptions keep;
    keep.keep_sums = true;
    CHECK(schur_commutative(ct, keep).all_sums.size() == 84);
}

TEST_CASE("triple sums: symmetry, conjugate positivity, small imaginary parts") {
    for (const auto& e : corpus()) {
        CAPTURE(e.id);
        auto ct = character_table(e.fd);
        int m = ct.rank();
        double mu = global_fpdim(e.fd);
        for (int a = 0; a < m; ++a) {
            int ac = ct.conjugate(a);
            REQUIRE(ac >= 0);
            CHECK(schur_triple_sum(ct, a, ac, 0).real() >= -1e-9);
            for (int b = a; b < m; ++b)
                for (int c = b; c < m; ++c) {
                    cplx v = schur_triple_sum(ct, a, b, c);
                    CHECK(std::abs(v.imag()) <= 1e-8 * mu);
                    std::array<int, 3> t{a, b, c};
                    do {
                        CHECK(std::abs(schur_triple_sum(ct, t[0], t[1], t[2]) - v) < 1e-10 * (1 + std::abs(v)));
                    } while (std::next_permutation(t.begin(), t.end()));
                }
        }
    }
}

TEST_CASE("falsifier finds the ruled-out ring and nothing on groups") {
    auto r = schur_noncommutative_falsify(th::ring("r7-210-ruledout"), 10000, 1);
    REQUIRE(r.witness);
    CHECK(r.witness->value < 0);
    // re-evaluate the witness directly
    CHECK(schur_form(th::ring("r7-210-ruledout"), r.witness->u).real() == doctest::Approx(r.witness->value));

    auto z3 = schur_noncommutative_falsify(cyclic_group_ring(3), 3000, 2);
    CHECK_FALSE(z3.witness);
    CHECK(z3.summary().find("not a proof") != std::string::npos);

    auto triv = new_fusion_data({{{1}}}, Mode::Exact);
    std::array<Eigen::VectorXcd, 3> u;
    for (auto& v : u) v = Eigen::VectorXcd::Constant(1, cplx(0.3, -1.2));
    CHECK(schur_form(triv, u).real() == doctest::Approx(std::pow(0.09 + 1.44, 3)));
    CHECK_FALSE(schur_noncommutative_falsify(triv, 500, 3).witness);
}

TEST_CASE("falsifier on random samples never contradicts a passing ring") {
    for (const char* id : {"psl25", "f210", "f660"}) {
        CAPTURE(id);
        CHECK_FALSE(schur_noncommutative_falsify(th::ring(id), 2000, 5).witness);
    }
}

TEST_CASE("obstruction reports") {
    auto f = obstruction_report(th::ring("f660"));
    CHECK(f.simple);
    CHECK(f.perfect);
    CHECK(f.frobenius_type.value());
    REQUIRE(f.schur);
    CHECK(f.schur->holds);
    CHECK(f.bounds.all_hold());
    CHECK_FALSE(obstruction_report(cyclic_group_ring(4)).simple);
    auto n = obstruction_report(th::ring("r6-143-nonfrobenius"));
    CHECK(n.simple);
    CHECK_FALSE(n.frobenius_type.value());
    auto j = f.to_json();
    CHECK(j["schur"]["holds"].get<bool>());
    CHECK(j["type"] == "[[1,1],[5,2],[10,2],[11,1],[12,2]]");
}

}  // TEST_SUITE

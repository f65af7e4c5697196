#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>

#include "fusion/corpus.hpp"
#include "fusion/criteria.hpp"
#include "fusion/search.hpp"
#include "helpers.hpp"
#include "family_oracle.hpp"
#include "naive_enum.hpp"

using namespace fusion;

namespace {

std::vector<std::int64_t> dims_of(const TypeSignature& t) {
    std::vector<std::int64_t> d;
    for (auto [n, mu] : t.entries)
        for (int i = 0; i < mu; ++i) d.push_back(std::llround(n));
    return d;
}

bool has_type(const std::vector<TypeSignature>& v, const std::string& s) {
    for (const auto& t : v)
        if (t.str() == s) return true;
    return false;
}

// cycle counts of an involution per block of equal dimensions
std::vector<int> cycle_shape(const std::vector<std::int64_t>& d, const std::vector<int>& dual) {
    std::map<std::int64_t, int> c;
    for (std::size_t j = 1; j < d.size(); ++j) {
        c[d[j]] += 0;
        if (dual[j] > static_cast<int>(j)) ++c[d[j]];
    }
    std::vector<int> out;
    for (auto& [k, v] : c) out.push_back(v);
    return out;
}

SearchConstraints exact(std::int64_t F, int rank) {
    SearchConstraints c;
    c.fpdim_min = c.fpdim_max = F;
    c.rank_min = c.rank_max = rank;
    return c;
}

}  // namespace

TEST_SUITE("search") {

TEST_CASE("prime power products") {
    for (std::int64_t n : {1, 2, 7, 8, 12, 30, 72, 105}) CHECK(is_prime_power_product(n));
    for (std::int64_t n : {60, 168, 210, 360, 660, 420}) CHECK_FALSE(is_prime_power_product(n));
}

TEST_CASE("type enumeration: examples") {
    SearchConstraints c = exact(60, 5);
    c.require_perfect = c.require_divisibility = true;
    c.min_d2 = 3;
    auto t60 = enumerate_types(c);
    CHECK(has_type(t60, "[[1,1],[3,2],[4,1],[5,1]]"));
    for (const auto& t : t60) CHECK(t.fpdim() == doctest::Approx(60));

    SearchConstraints p = exact(7, 0);
    p.rank_min = 1;
    p.rank_max = 0;
    p.exclude_prime_power_products = true;
    CHECK(enumerate_types(p).empty());

    SearchConstraints s = exact(210, 7);
    s.require_perfect = s.require_divisibility = true;
    CHECK(has_type(enumerate_types(s), "[[1,1],[5,3],[6,1],[7,2]]"));

    SearchConstraints u;
    CHECK_THROWS_AS(enumerate_types(u), Error);
}

TEST_CASE("type enumeration matches a direct multiset count") {
    // all nondecreasing dimension lists starting with 1, sum of squares F, length <= 5
    std::function<int(std::int64_t, std::int64_t, int)> count = [&](std::int64_t rem, std::int64_t lo, int slots) -> int {
        if (rem == 0) return 1;
        if (slots == 0) return 0;
        int n = 0;
        for (std::int64_t x = lo; x * x <= rem; ++x) n += count(rem - x * x, x, slots - 1);
        return n;
    };
    for (std::int64_t F = 1; F <= 40; ++F) {
        SearchConstraints c;
        c.fpdim_min = c.fpdim_max = F;
        c.rank_max = 5;
        auto ts = enumerate_types(c);
        CAPTURE(F);
        CHECK(static_cast<int>(ts.size()) == count(F - 1, 1, 4));
        for (std::size_t i = 1; i < ts.size(); ++i) {
            auto a = dims_of(ts[i - 1]), b = dims_of(ts[i]);
            CHECK((a.size() < b.size() || (a.size() == b.size() && a < b)));
        }
    }
}

TEST_CASE("type enumeration flags") {
    SearchConstraints c;
    c.fpdim_min = 1;
    c.fpdim_max = 200;
    c.rank_max = 6;
    c.require_perfect = true;
    c.require_divisibility = true;
    c.min_d2 = 3;
    c.require_gcd_one = true;
    for (const auto& t : enumerate_types(c)) {
        auto d = dims_of(t);
        std::int64_t F = 0, g = 0;
        for (auto x : d) F += x * x;
        CHECK(d[0] == 1);
        CHECK((d.size() == 1 || d[1] >= 3));
        for (std::size_t i = 1; i < d.size(); ++i) {
            CHECK(F % d[i] == 0);
            g = std::gcd(g, d[i]);
        }
        CHECK(g <= 1);
    }
}

TEST_CASE("involution representatives") {
    auto reps = enumerate_involutions(parse_type("[[1,1],[5,3],[6,1],[7,2]]"));
    REQUIRE(reps.size() == 4);
    CHECK(reps[0] == std::vector<int>{0, 1, 2, 3, 4, 5, 6});
    CHECK(reps[1] == std::vector<int>{0, 2, 1, 3, 4, 5, 6});
    CHECK(reps[2] == std::vector<int>{0, 1, 2, 3, 4, 6, 5});
    CHECK(reps[3] == std::vector<int>{0, 2, 1, 3, 4, 6, 5});
    CHECK(enumerate_involutions(parse_type("[[1,1]]")).size() == 1);
    auto r3 = enumerate_involutions(parse_type("[[1,1],[2,2]]"));
    REQUIRE(r3.size() == 2);
    CHECK(r3[1] == std::vector<int>{0, 2, 1});
    // one class per number of 2-cycles in each block
    auto big = enumerate_involutions(parse_type("[[1,3],[2,5],[3,4]]"));
    CHECK(big.size() == 2 * 3 * 3);
}

TEST_CASE("every integral corpus involution is reachable") {
    for (const auto& e : corpus()) {
        if (!is_integral(e.fd)) continue;
        CAPTURE(e.id);
        auto t = type_signature(e.fd);
        auto d = dims_of(t);
        // relabel so the dimensions ascend
        std::vector<int> order(e.fd.rank());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin() + 1, order.end(), [&](int a, int b) { return e.fd.fp_dims()[a] < e.fd.fp_dims()[b]; });
        std::vector<int> pos(order.size()), dual(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
        for (std::size_t i = 0; i < order.size(); ++i) dual[i] = pos[e.fd.dual(order[i])];
        auto shape = cycle_shape(d, dual);
        bool hit = false;
        for (const auto& r : enumerate_involutions(t)) hit = hit || cycle_shape(d, r) == shape;
        CHECK(hit);
    }
}

TEST_CASE("small types") {
    auto triv = enumerate_fusion_rings(parse_type("[[1,1]]"), {0});
    REQUIRE(triv.size() == 1);
    CHECK(triv[0].rank() == 1);
    // groups of order 4: Z/4 has one dual pair, Z/2 x Z/2 none
    auto t4 = parse_type("[[1,4]]");
    int total = 0;
    for (const auto& inv : enumerate_involutions(t4)) total += static_cast<int>(enumerate_fusion_rings(t4, inv).size());
    CHECK(total == 2);
    // Rep(S3) is the only ring of type [[1,2],[2,1]]
    auto s3 = enumerate_fusion_rings(parse_type("[[1,2],[2,1]]"), {0, 1, 2});
    REQUIRE(s3.size() == 1);
    CHECK(are_isomorphic(s3[0], th::rep_s3()));
}

TEST_CASE("PSL(2,5) type gives exactly the corpus ring") {
    auto t = parse_type("[[1,1],[3,2],[4,1],[5,1]]");
    std::vector<FusionData> all;
    for (const auto& inv : enumerate_involutions(t))
        for (auto& r : enumerate_fusion_rings(t, inv)) all.push_back(r);
    REQUIRE(all.size() == 1);
    CHECK(are_isomorphic(all[0], th::ring("psl25")));
}

TEST_CASE("FPdim 210 type: two rings, one passing Schur") {
    auto t = parse_type("[[1,1],[5,3],[6,1],[7,2]]");
    std::vector<FusionData> all;
    for (const auto& inv : enumerate_involutions(t))
        for (auto& r : enumerate_fusion_rings(t, inv)) all.push_back(r);
    REQUIRE(all.size() == 2);
    int pass = 0;
    bool f = false, ruled = false;
    for (const auto& r : all) {
        CHECK(verify_axioms(r).all_pass());
        CHECK(is_simple(r));
        pass += schur_commutative(character_table(r)).holds;
        f = f || are_isomorphic(r, th::ring("f210")).has_value();
        ruled = ruled || are_isomorphic(r, th::ring("r7-210-ruledout")).has_value();
    }
    CHECK(pass == 1);
    CHECK(f);
    CHECK(ruled);
}

TEST_CASE("FPdim 660 type: fifteen rings, two passing Schur") {
    auto t = parse_type("[[1,1],[5,2],[10,2],[11,1],[12,2]]");
    std::vector<FusionData> all;
    for (const auto& inv : enumerate_involutions(t))
        for (auto& r : enumerate_fusion_rings(t, inv)) all.push_back(r);
    CHECK(all.size() == 15);
    int pass = 0;
    for (const auto& r : all) {
        CHECK(verify_axioms(r).all_pass());
        pass += schur_commutative(character_table(r)).holds;
    }
    CHECK(pass == 2);
    for (const auto& e : corpus()) {
        if (e.type != t.str()) continue;
        CAPTURE(e.id);
        bool hit = false;
        for (const auto& r : all) hit = hit || are_isomorphic(r, e.fd).has_value();
        CHECK(hit);
    }
}

TEST_CASE("completeness: naive enumerator vs pruning on and off, rank <= 4, FPdim <= 40") {
    SearchConstraints c;
    c.fpdim_min = 1;
    c.fpdim_max = 40;
    c.rank_max = 4;
    SearchOptions off;
    off.pruning = false;
    int pairs = 0, rings = 0;
    for (const auto& t : enumerate_types(c)) {
        for (const auto& inv : enumerate_involutions(t)) {
            CAPTURE(t.str());
            auto on = enumerate_fusion_rings(t, inv);
            auto no = enumerate_fusion_rings(t, inv, {}, off);
            auto naive = th::NaiveEnum(dims_of(t), inv).run();
            CHECK(on.size() == naive.size());
            CHECK(no.size() == naive.size());
            for (const auto& r : on) {
                CHECK(verify_axioms(r).all_pass());
                bool hit = false;
                for (const auto& n : naive) hit = hit || are_isomorphic(r, n).has_value();
                CHECK(hit);
            }
            ++pairs;
            rings += static_cast<int>(on.size());
        }
    }
    MESSAGE(pairs << " (type, involution) pairs, " << rings << " rings");
    CHECK(pairs == 66);
    CHECK(rings == 9);
}

TEST_CASE("classification slices") {
    SearchConstraints c;
    c.fpdim_max = 200;
    c.rank_max = 5;
    c.require_perfect = c.require_divisibility = true;
    ClassifyFilters simple;
    simple.simple = true;
    auto a = classify(c, simple);
    CHECK(a.complete);
    REQUIRE(a.rings.size() == 1);
    CHECK(are_isomorphic(a.rings[0].fd, th::ring("psl25")));

    SearchConstraints b = exact(210, 7);
    b.require_perfect = b.require_divisibility = true;
    b.min_d2 = 3;
    auto r = classify(b, simple);
    CHECK(r.rings.size() == 2);
    CHECK(r.count_schur_pass() == 1);
    auto j = r.to_json(false);
    CHECK(j["counts"]["rings"] == 2);
    CHECK(j["search"]["nodes"].get<std::int64_t>() > 0);
    CHECK(j["types"].size() == r.types.size());
}

TEST_CASE("reports are deterministic across thread counts") {
    SearchConstraints c = exact(660, 8);
    c.require_perfect = c.require_divisibility = true;
    c.min_d2 = 3;
    SearchOptions o1, o3;
    o3.threads = 3;
    auto a = classify(c, {}, o1).to_json(false);
    auto b = classify(c, {}, o3).to_json(false);
    CHECK(a == b);
    CHECK(a["counts"]["simple"] == 15);
}

TEST_CASE("budgets produce flagged partial results") {
    auto t = parse_type("[[1,1],[5,2],[10,2],[11,1],[12,2]]");
    SearchOptions o;
    o.node_budget = 100;
    auto r = search_fusion_rings(t, {0, 2, 1, 3, 4, 5, 6, 7}, {}, o);
    CHECK_FALSE(r.complete);
    CHECK(r.stop_reason.find("node budget") != std::string::npos);
    try {
        enumerate_fusion_rings(t, {0, 2, 1, 3, 4, 5, 6, 7}, {}, o);
        FAIL("expected Timeout");
    } catch (const Error& e) {
        CHECK(e.code == Error::Code::Timeout);
    }
    SearchConstraints c = exact(660, 8);
    c.require_perfect = c.require_divisibility = true;
    c.min_d2 = 3;
    auto rep = classify(c, {}, o);
    CHECK_FALSE(rep.complete);
    CHECK_FALSE(rep.to_json()["complete"].get<bool>());
    CHECK(rep.to_json().contains("stop_reason"));
}

TEST_CASE("checkpoint resume") {
    auto path = (std::filesystem::temp_directory_path() / "ff_search_checkpoint.jsonl").string();
    std::filesystem::remove(path);
    SearchConstraints c = exact(210, 7);
    c.require_perfect = c.require_divisibility = true;
    auto first = classify(c, {}, {}, path);
    auto second = classify(c, {}, {}, path);
    CHECK(second.counters.nodes == 0);
    REQUIRE(first.rings.size() == second.rings.size());
    for (std::size_t i = 0; i < first.rings.size(); ++i)
        CHECK(first.rings[i].fd.itensor() == second.rings[i].fd.itensor());
    std::filesystem::remove(path);
}

TEST_CASE("bad involutions are rejected") {
    auto t = parse_type("[[1,1],[2,1],[3,1]]");
    CHECK_THROWS_AS(search_fusion_rings(t, {0, 2, 1}), Error);
    CHECK_THROWS_AS(search_fusion_rings(t, {0, 1}), Error);
}

}  // TEST_SUITE

TEST_SUITE("search_family") {

TEST_CASE("rank-5 family at multiplicity <= 4") {
    auto r = rank5_three_selfadjoint_family(4);
    REQUIRE(r.rings.size() == 47);
    int simple = 0, fail = 0, simple_fail = 0;
    for (const auto& f : r.rings) {
        CHECK(verify_axioms(f).all_pass());
        REQUIRE(is_commutative(f));
        bool s = is_simple(f);
        bool h = schur_commutative(character_table(f)).holds;
        simple += s;
        fail += !h;
        simple_fail += s && !h;
    }
    CHECK(simple == 4);
    CHECK(fail == 6);
    CHECK(simple_fail == 2);
    // the two displayed simple rings are members
    for (const char* id : {"r5-cyclo7", "r5-sqrt6"}) {
        CAPTURE(id);
        bool hit = false;
        for (const auto& f : r.rings) hit = hit || are_isomorphic(f, th::ring(id)).has_value();
        CHECK(hit);
    }
}

TEST_CASE("rank-5 family against the exhaustive oracle") {
    for (int K : {1, 2, 3, 4}) {
        CAPTURE(K);
        auto fast = rank5_three_selfadjoint_family(K).rings;
        auto slow = th::FamilyOracle(K).run();
        CHECK(fast.size() == slow.size());
        for (const auto& f : fast) {
            bool hit = false;
            for (const auto& s : slow) hit = hit || are_isomorphic(f, s).has_value();
            CHECK(hit);
        }
    }
}

TEST_CASE("the single-parameter slice has no associative point") {
    // x2 x3 = 1 + a x2 + a x3 and x2 x2 = a x2 force 1 + 2a^2 = a^2
    for (int a = 0; a <= 4; ++a) {
        std::array<int, 16> p{};
        p[0] = a;
        CHECK_FALSE(verify_axioms(rank5_template(p)).all_pass());
    }
    CHECK_THROWS_AS(rank5_three_selfadjoint_family(0), Error);
}

}  // TEST_SUITE

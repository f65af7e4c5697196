#pragma once

#include <array>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "fusion/ring.hpp"

namespace fusion {

struct SearchConstraints {
    std::int64_t fpdim_min = 1, fpdim_max = 0;  // fpdim_max = 0 means unbounded
    int rank_min = 1, rank_max = 0;             // rank_max = 0 means no cap beyond fpdim
    bool require_divisibility = false;          // every d_i divides FPdim
    bool require_perfect = false;               // m_1 = 1
    int min_d2 = 1;                             // smallest non-unit dimension
    bool require_gcd_one = false;               // gcd of the non-unit dimensions is 1
    bool exclude_prime_power_products = false;  // skip FPdim = p^a q^b or p q r
    bool growth_cap = false;                    // n_{i+1} < n_i^2 for consecutive non-unit dims
    std::optional<int> max_multiplicity;

    nlohmann::json to_json() const;
};

struct SearchOptions {
    bool pruning = true;             // coefficient bounds as domains and running prunes
    bool commutative_only = false;   // add N_{jk}^s = N_{kj}^s to the orbit symmetry
    std::int64_t node_budget = 1000000000;  // per (type, involution)
    double wall_budget = 0;          // seconds for the whole call; 0 = none
    int threads = 1;
};

struct PruneCounters {
    std::int64_t nodes = 0;
    std::int64_t dimension = 0;       // row equation over- or undershoot
    std::int64_t divisibility = 0;    // forced value not an integer
    std::int64_t sum_of_squares = 0;
    std::int64_t pair_products = 0;
    std::int64_t associativity = 0;
    std::int64_t leaves = 0;          // solutions before isomorphism reduction
    std::int64_t domain_cut = 0;      // values removed from orbit domains by the entry bounds

    PruneCounters& operator+=(const PruneCounters& o);
    nlohmann::json to_json() const;
};

struct EnumerationResult {
    std::vector<FusionData> rings;  // up to isomorphism, sorted by canonical tensor
    PruneCounters counters;
    bool complete = true;
    std::string stop_reason;
};

// integer types with Sum m_i n_i^2 in the fpdim range; ordered by (fpdim, rank, dims)
std::vector<TypeSignature> enumerate_types(const SearchConstraints& c);

bool is_prime_power_product(std::int64_t n);

// involutions fixing 0 and preserving dimension blocks, one per conjugacy class
std::vector<std::vector<int>> enumerate_involutions(const TypeSignature& type);

// all dimension- and duality-preserving relabelings fixing 0
std::vector<std::vector<int>> type_automorphisms(const std::vector<std::int64_t>& dims,
                                                 const std::vector<int>& dual);
// lexicographically least tensor over the relabelings
std::vector<std::int64_t> canonical_tensor(const FusionData& fd, const std::vector<std::vector<int>>& autos);

// complete enumeration, or a flagged partial result if a budget runs out
EnumerationResult search_fusion_rings(const TypeSignature& type, const std::vector<int>& dual,
                                      const SearchConstraints& c = {}, const SearchOptions& o = {});
// same, but Timeout on an exhausted budget
std::vector<FusionData> enumerate_fusion_rings(const TypeSignature& type, const std::vector<int>& dual,
                                               const SearchConstraints& c = {}, const SearchOptions& o = {});

struct ClassifyFilters {
    std::optional<bool> simple;
    std::optional<bool> schur;
};

struct FoundRing {
    FusionData fd;
    std::string type;
    std::vector<int> dual;
    bool simple = false;
    bool commutative = true;
    std::optional<bool> schur;  // empty when the ring is noncommutative
    double schur_worst = 0;
};

struct TypeReport {
    TypeSignature type;
    int involutions_tried = 0;
    int rings_found = 0;  // before filters
    int simple = 0;
    int schur_pass = 0;
    bool complete = true;
    PruneCounters counters;
};

struct ClassificationReport {
    SearchConstraints constraints;
    ClassifyFilters filters;
    int types_examined = 0;
    std::int64_t fpdim_completed = 0;  // every FPdim up to this one was fully searched or budget-flagged
    std::vector<TypeReport> types;
    std::vector<FoundRing> rings;  // after filters
    PruneCounters counters;
    bool complete = true;
    std::string stop_reason;
    double wall_seconds = 0;

    int count_simple() const;
    int count_schur_pass() const;
    nlohmann::json to_json(bool include_wall = true) const;
};

// checkpoint: a JSON-lines file of finished (type, involution) pairs and their rings; reused and appended
ClassificationReport classify(const SearchConstraints& c, const ClassifyFilters& f = {},
                              const SearchOptions& o = {}, const std::string& checkpoint = "");

// the rank-5 rings with involution (2 3) and x_4, x_5 self-dual, entries <= max_multiplicity, up to equivalence
struct FamilyResult {
    std::vector<FusionData> rings;
    std::int64_t nodes = 0;
    std::int64_t leaves = 0;
};
FamilyResult rank5_three_selfadjoint_family(int max_multiplicity);
// the 16-parameter template in the order a..p
FusionData rank5_template(const std::array<int, 16>& p, Mode mode = Mode::Exact);

}  // namespace fusion

#pragma once

#include <array>
#include <json.hpp>
#include <optional>
#include <string>

#include "fusion/ring.hpp"
#include "fusion/spectral.hpp"

namespace fusion {

// sum_i lambda_{i,j1} lambda_{i,j2} lambda_{i,j3} / lambda_{i,1}
cplx schur_triple_sum(const CharacterTable& ct, int j1, int j2, int j3);

struct SchurReport {
    bool holds = true;
    bool inconclusive = false;  // worst value negative but within tolerance
    std::array<int, 3> worst_triple{0, 0, 0};
    double worst_value = 0.0;
    double max_imag = 0.0;
    double tolerance = 0.0;
    long triples_scanned = 0;
    std::vector<double> all_sums;  // real parts for j1 <= j2 <= j3, filled on request
};

struct SchurOptions {
    double tol = -1;  // negative: 1e-9 * (1 + mu)
    bool survey = true;  // false: stop at the first decisive negative
    bool keep_sums = false;
};

double default_schur_tol(double mu);

SchurReport schur_commutative(const CharacterTable& ct, const SchurOptions& opt = {});

struct FalsifierWitness {
    std::array<Eigen::VectorXcd, 3> u;
    double value = 0.0;
    long sample = 0;
};

struct FalsifierResult {
    std::optional<FalsifierWitness> witness;
    long samples = 0;
    double min_value = INFINITY;
    std::string summary() const;
};

// sum_i (1/d_i) prod_s (u_s^* M_i u_s) for the fusion matrices M_i
cplx schur_form(const FusionData& fd, const std::array<Eigen::VectorXcd, 3>& u);

FalsifierResult schur_noncommutative_falsify(const FusionData& fd, long num_samples,
                                             std::uint64_t seed, double tol = -1);

struct ObstructionReport {
    std::string label;
    int rank = 0;
    double mu = 0;
    std::string type;
    bool integral = false, simple = false, perfect = false, commutative = false;
    std::optional<bool> frobenius_type;
    std::optional<SchurReport> schur;
    std::optional<FalsifierResult> falsifier;
    BoundsReport bounds;
    nlohmann::json to_json() const;
};

ObstructionReport obstruction_report(const FusionData& fd, long falsifier_samples = 2000,
                                     std::uint64_t seed = 1);

}  // namespace fusion

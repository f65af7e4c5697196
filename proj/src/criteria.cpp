#include "fusion/criteria.hpp"

#include <cmath>
#include <fmt/format.h>
#include <random>

namespace fusion {

cplx schur_triple_sum(const CharacterTable& ct, int j1, int j2, int j3) {
    cplx s = 0;
    for (int i = 0; i < ct.rank(); ++i)
        s += ct.lambda(i, j1) * ct.lambda(i, j2) * ct.lambda(i, j3) / ct.lambda(i, 0);
    return s;
}

double default_schur_tol(double mu) { return 1e-9 * (1 + mu); }

SchurReport schur_commutative(const CharacterTable& ct, const SchurOptions& opt) {
    const int m = ct.rank();
    double mu = 0;
    for (int i = 0; i < m; ++i) mu += std::norm(ct.lambda(i, 0));
    SchurReport r;
    r.tolerance = opt.tol < 0 ? default_schur_tol(mu) : opt.tol;
    r.worst_value = INFINITY;
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b)
            for (int c = b; c < m; ++c) {
                cplx v = schur_triple_sum(ct, a, b, c);
                ++r.triples_scanned;
                r.max_imag = std::max(r.max_imag, std::abs(v.imag()));
                if (opt.keep_sums) r.all_sums.push_back(v.real());
                if (v.real() < r.worst_value) {
                    r.worst_value = v.real();
                    r.worst_triple = {a, b, c};
                }
                if (!opt.survey && v.real() < -r.tolerance) {
                    r.holds = false;
                    return r;
                }
            }
    r.holds = r.worst_value >= -r.tolerance;
    // below the noise floor a negative value is just rounding
    r.inconclusive = r.holds && r.worst_value < -1e-12 * (1 + mu);
    return r;
}

cplx schur_form(const FusionData& fd, const std::array<Eigen::VectorXcd, 3>& u) {
    const int m = fd.rank();
    const auto& d = fd.fp_dims();
    cplx total = 0;
    for (int i = 0; i < m; ++i) {
        cplx prod = 1;
        for (const auto& v : u) {
            cplx q = 0;
            for (int j = 0; j < m; ++j) {
                if (v[j] == 0.0) continue;
                cplx row = 0;
                for (int k = 0; k < m; ++k) row += fd.N(i, j, k) * v[k];
                q += std::conj(v[j]) * row;
            }
            prod *= q;
        }
        total += prod / d[i];
    }
    return total;
}

std::string FalsifierResult::summary() const {
    if (witness) return fmt::format("counterexample found at sample {} with value {:.10g}", witness->sample, witness->value);
    return fmt::format("no counterexample found in {} samples (minimum value {:.6g}); this is not a proof", samples, min_value);
}

FalsifierResult schur_noncommutative_falsify(const FusionData& fd, long num_samples,
                                             std::uint64_t seed, double tol) {
    const int m = fd.rank();
    if (tol < 0) tol = default_schur_tol(global_fpdim(fd));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    auto gauss = [&] {
        Eigen::VectorXcd v(m);
        for (int i = 0; i < m; ++i) v[i] = cplx(g(rng), g(rng)) / std::sqrt(2.0);
        return v;
    };
    // targeted directions: dual projection coefficient vectors
    std::vector<Eigen::VectorXcd> targets;
    if (is_commutative(fd)) {
        try {
            auto ct = character_table(fd);
            for (auto& p : dual_projections(fd, ct)) targets.push_back(p.coeffs / p.coeffs.norm());
        } catch (const Error&) {
        }
    }
    const int T = static_cast<int>(targets.size());
    std::vector<std::array<int, 3>> combos;
    for (int a = 0; a < T; ++a)
        for (int b = a; b < T; ++b)
            for (int c = b; c < T; ++c) combos.push_back({a, b, c});
    FalsifierResult res;
    for (long s = 0; s < num_samples; ++s) {
        std::array<Eigen::VectorXcd, 3> u;
        if (s < static_cast<long>(combos.size())) {
            for (int t = 0; t < 3; ++t) u[t] = targets[combos[s][t]];
        } else if (T > 0 && s % 2 == 0) {
            // near a random target triple
            std::uniform_int_distribution<int> pick(0, T - 1);
            std::uniform_real_distribution<double> eps(0.0, 0.3);
            for (auto& v : u) v = targets[pick(rng)] + eps(rng) * gauss() / std::sqrt(double(m));
        } else {
            for (auto& v : u) v = gauss();
        }
        double val = schur_form(fd, u).real();
        res.samples = s + 1;
        res.min_value = std::min(res.min_value, val);
        if (val < -tol) {
            res.witness = FalsifierWitness{u, val, s};
            return res;
        }
    }
    return res;
}

nlohmann::json ObstructionReport::to_json() const {
    nlohmann::json j;
    j["label"] = label;
    j["rank"] = rank;
    j["fpdim"] = mu;
    j["type"] = type;
    j["integral"] = integral;
    j["simple"] = simple;
    j["perfect"] = perfect;
    j["commutative"] = commutative;
    j["frobenius_type"] = frobenius_type ? nlohmann::json(*frobenius_type) : nlohmann::json(nullptr);
    if (schur) {
        j["schur"] = {{"holds", schur->holds},
                      {"inconclusive", schur->inconclusive},
                      {"worst_value", schur->worst_value},
                      {"worst_triple", {schur->worst_triple[0] + 1, schur->worst_triple[1] + 1, schur->worst_triple[2] + 1}},
                      {"max_imag", schur->max_imag},
                      {"tolerance", schur->tolerance}};
    }
    if (falsifier) {
        j["schur_falsifier"] = {{"samples", falsifier->samples},
                                {"counterexample", falsifier->witness.has_value()},
                                {"min_value", falsifier->min_value},
                                {"summary", falsifier->summary()}};
    }
    nlohmann::json b = nlohmann::json::object();
    for (const auto& c : bounds.b) b[c.name] = {{"holds", c.holds}, {"slack", c.slack}};
    j["coefficient_bounds"] = b;
    return j;
}

ObstructionReport obstruction_report(const FusionData& fd, long falsifier_samples,
                                     std::uint64_t seed) {
    ObstructionReport r;
    r.label = fd.label();
    r.rank = fd.rank();
    r.mu = global_fpdim(fd);
    auto ts = type_signature(fd);
    r.type = ts.str();
    r.integral = ts.integral;
    r.simple = is_simple(fd);
    r.perfect = is_perfect(fd);
    r.commutative = is_commutative(fd);
    if (r.integral) r.frobenius_type = is_frobenius_type(fd);
    if (r.commutative)
        r.schur = schur_commutative(character_table(fd));
    else
        r.falsifier = schur_noncommutative_falsify(fd, falsifier_samples, seed);
    r.bounds = coefficient_bounds_report(fd);
    return r;
}

}  // namespace fusion

#include "fusion/search.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "fusion/corpus.hpp"
#include "fusion/criteria.hpp"

namespace fusion {

using i64 = std::int64_t;
using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------- reports

nlohmann::json SearchConstraints::to_json() const {
    nlohmann::json j;
    j["fpdim_min"] = fpdim_min;
    j["fpdim_max"] = fpdim_max;
    j["rank_min"] = rank_min;
    j["rank_max"] = rank_max;
    j["require_divisibility"] = require_divisibility;
    j["require_perfect"] = require_perfect;
    j["min_d2"] = min_d2;
    j["require_gcd_one"] = require_gcd_one;
    j["exclude_prime_power_products"] = exclude_prime_power_products;
    j["growth_cap"] = growth_cap;
    j["max_multiplicity"] = max_multiplicity ? nlohmann::json(*max_multiplicity) : nlohmann::json(nullptr);
    return j;
}

PruneCounters& PruneCounters::operator+=(const PruneCounters& o) {
    nodes += o.nodes;
    dimension += o.dimension;
    divisibility += o.divisibility;
    sum_of_squares += o.sum_of_squares;
    pair_products += o.pair_products;
    associativity += o.associativity;
    leaves += o.leaves;
    domain_cut += o.domain_cut;
    return *this;
}

nlohmann::json PruneCounters::to_json() const {
    return {{"nodes", nodes},
            {"leaves", leaves},
            {"domain_cut", domain_cut},
            {"prunes",
             {{"dimension", dimension},
              {"divisibility", divisibility},
              {"sum_of_squares", sum_of_squares},
              {"pair_products", pair_products},
              {"associativity", associativity}}}};
}

// ---------------------------------------------------------------- types

bool is_prime_power_product(i64 n) {
    if (n < 1) return false;
    std::vector<int> exps;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        exps.push_back(e);
    }
    if (n > 1) exps.push_back(1);
    if (exps.size() <= 2) return true;
    return exps.size() == 3 && std::all_of(exps.begin(), exps.end(), [](int e) { return e == 1; });
}

namespace {

i64 isqrt(i64 n) {
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

struct TypeBuilder {
    const SearchConstraints& c;
    i64 F;
    int rmax;
    std::vector<i64> cand;
    std::vector<std::pair<i64, int>> cur;
    std::vector<std::vector<std::pair<i64, int>>> out;

    void rec(std::size_t idx, i64 rem, int rank) {
        if (rem == 0) {
            if (rank >= c.rank_min) finish();
            return;
        }
        if (rank >= rmax) return;
        for (std::size_t i = idx; i < cand.size(); ++i) {
            i64 n = cand[i];
            if (n * n > rem) break;
            if (c.growth_cap && cur.size() >= 2 && n >= cur.back().first * cur.back().first) break;
            for (int mu = 1; rank + mu <= rmax && mu * n * n <= rem; ++mu) {
                cur.push_back({n, mu});
                rec(i + 1, rem - mu * n * n, rank + mu);
                cur.pop_back();
            }
        }
    }

    void finish() {
        if (c.require_gcd_one) {
            i64 g = 0;
            if (cur[0].second > 1) g = 1;
            for (std::size_t i = 1; i < cur.size(); ++i) g = std::gcd(g, cur[i].first);
            if (g > 1) return;
        }
        out.push_back(cur);
    }
};

}  // namespace

namespace {

void check_range(const SearchConstraints& c) {
    if (c.fpdim_max <= 0) throw Error(Error::Code::UnboundedSearch, "fpdim_max must be set");
    if (c.fpdim_min > c.fpdim_max) throw Error(Error::Code::Usage, "empty fpdim range");
    if (c.rank_max > 0 && c.rank_min > c.rank_max) throw Error(Error::Code::Usage, "empty rank range");
}

// types of one FPdim, appended to all in (rank, dims) order
void types_of_fpdim(const SearchConstraints& c, i64 F, std::vector<TypeSignature>& all) {
    {
        if (c.exclude_prime_power_products && is_prime_power_product(F)) return;
        int rmax = c.rank_max > 0 ? c.rank_max : static_cast<int>(std::min<i64>(F, 1 << 20));
        TypeBuilder tb{c, F, rmax, {}, {}, {}};
        for (i64 n = std::max<i64>(2, c.min_d2); n * n <= F - 1; ++n)
            if (!c.require_divisibility || F % n == 0) tb.cand.push_back(n);
        // multiplicity of dimension 1
        int m1max = (c.require_perfect || c.min_d2 > 1) ? 1 : rmax;
        for (int m1 = 1; m1 <= m1max && m1 <= F; ++m1) {
            tb.cur = {{1, m1}};
            tb.rec(0, F - m1, m1);
        }
        std::vector<std::pair<std::vector<i64>, TypeSignature>> keyed;
        for (auto& t : tb.out) {
            TypeSignature ts;
            std::vector<i64> flat;
            for (auto [n, mu] : t) {
                ts.entries.push_back({static_cast<double>(n), mu});
                for (int r = 0; r < mu; ++r) flat.push_back(n);
            }
            ts.integral = true;
            std::vector<i64> key{static_cast<i64>(flat.size())};
            key.insert(key.end(), flat.begin(), flat.end());
            keyed.push_back({key, ts});
        }
        std::sort(keyed.begin(), keyed.end(), [](auto& a, auto& b) { return a.first < b.first; });
        for (auto& k : keyed) all.push_back(k.second);
    }
}

}  // namespace

std::vector<TypeSignature> enumerate_types(const SearchConstraints& c) {
    check_range(c);
    std::vector<TypeSignature> all;
    for (i64 F = std::max<i64>(1, c.fpdim_min); F <= c.fpdim_max; ++F) types_of_fpdim(c, F, all);
    return all;
}

namespace {

std::vector<i64> expand_dims(const TypeSignature& t) {
    std::vector<i64> d;
    for (auto [n, mu] : t.entries) {
        i64 r = std::llround(n);
        if (std::abs(n - static_cast<double>(r)) > 1e-9) throw Error(Error::Code::NotIntegral, "search needs an integral type");
        for (int i = 0; i < mu; ++i) d.push_back(r);
    }
    if (d.empty() || d[0] != 1) throw Error(Error::Code::Validation, "type must start with dimension 1");
    return d;
}

// [begin, end) index ranges of equal dimensions, excluding the unit
std::vector<std::pair<int, int>> blocks_of(const std::vector<i64>& d) {
    std::vector<std::pair<int, int>> b;
    int m = static_cast<int>(d.size());
    int i = 1;
    while (i < m) {
        int j = i;
        while (j < m && d[j] == d[i]) ++j;
        b.push_back({i, j});
        i = j;
    }
    return b;
}

}  // namespace

std::vector<std::vector<int>> enumerate_involutions(const TypeSignature& type) {
    auto d = expand_dims(type);
    const int m = static_cast<int>(d.size());
    auto blocks = blocks_of(d);
    std::vector<int> cycles(blocks.size(), 0);
    std::vector<std::vector<int>> out;
    while (true) {
        std::vector<int> inv(m);
        std::iota(inv.begin(), inv.end(), 0);
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (int c = 0; c < cycles[b]; ++c) {
                int x = blocks[b].first + 2 * c;
                std::swap(inv[x], inv[x + 1]);
            }
        out.push_back(inv);
        // first block varies fastest
        std::size_t b = 0;
        for (; b < blocks.size(); ++b) {
            int size = blocks[b].second - blocks[b].first;
            if (cycles[b] < size / 2) {
                ++cycles[b];
                break;
            }
            cycles[b] = 0;
        }
        if (b == blocks.size()) break;
    }
    return out;
}

std::vector<std::vector<int>> type_automorphisms(const std::vector<i64>& d, const std::vector<int>& dual) {
    const int m = static_cast<int>(d.size());
    auto blocks = blocks_of(d);
    std::vector<std::vector<std::vector<int>>> per_block;
    for (auto [b, e] : blocks) {
        std::vector<int> idx(e - b);
        std::iota(idx.begin(), idx.end(), b);
        std::vector<std::vector<int>> ok;
        do {
            bool commutes = true;
            for (int i = 0; i < e - b && commutes; ++i) {
                int x = b + i;
                // sigma(dual x) == dual(sigma x)
                commutes = idx[dual[x] - b] == dual[idx[i]];
            }
            if (commutes) ok.push_back(idx);
        } while (std::next_permutation(idx.begin(), idx.end()));
        per_block.push_back(std::move(ok));
    }
    std::vector<std::vector<int>> out;
    std::vector<int> sigma(m);
    sigma[0] = 0;
    std::vector<std::size_t> pos(per_block.size(), 0);
    while (true) {
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto& p = per_block[b][pos[b]];
            for (int i = 0; i < static_cast<int>(p.size()); ++i) sigma[blocks[b].first + i] = p[i];
        }
        out.push_back(sigma);
        std::size_t b = 0;
        for (; b < per_block.size(); ++b) {
            if (++pos[b] < per_block[b].size()) break;
            pos[b] = 0;
        }
        if (b == per_block.size()) break;
    }
    return out;
}

namespace {

std::vector<i64> canonical_from(const std::vector<i64>& t, int m, const std::vector<std::vector<int>>& autos) {
    std::vector<i64> best, cur(t.size());
    for (const auto& s : autos) {
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l)
                    cur[(static_cast<std::size_t>(s[j]) * m + s[k]) * m + s[l]] = t[(static_cast<std::size_t>(j) * m + k) * m + l];
        if (best.empty() || cur < best) best = cur;
    }
    return best;
}

}  // namespace

std::vector<i64> canonical_tensor(const FusionData& fd, const std::vector<std::vector<int>>& autos) {
    std::vector<i64> t = fd.exact() ? fd.itensor() : std::vector<i64>();
    if (!fd.exact()) {
        t.resize(fd.tensor().size());
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::llround(fd.tensor()[i]);
    }
    return canonical_from(t, fd.rank(), autos);
}

// ---------------------------------------------------------------- tensor search

namespace {

struct Occ {
    int row;
    i64 coef;  // sum of d_s over the orbit's cells in the row
    int mult;  // number of the orbit's cells in the row
};

struct Shared {
    std::atomic<i64> nodes{0};
    std::atomic<bool> stop{false};
    i64 node_budget = 0;
    Clock::time_point deadline{};
    bool has_deadline = false;
    std::string reason;
    std::mutex mu;
    void halt(const std::string& why) {
        std::lock_guard<std::mutex> lk(mu);
        if (!stop.exchange(true)) reason = why;
    }
};

class Solver {
public:
    Solver(const std::vector<i64>& d, const std::vector<int>& dual, const SearchConstraints& c, const SearchOptions& o)
        : m_(static_cast<int>(d.size())), d_(d), dual_(dual), prune_(o.pruning) {
        const int m = m_;
        const std::size_t n3 = static_cast<std::size_t>(m) * m * m;
        cell_orbit_.assign(n3, -1);
        cellv_.assign(n3, 0);
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int s = 0; s < m; ++s) {
                    std::size_t c0 = cell(j, k, s);
                    if (j == 0) cellv_[c0] = k == s;
                    else if (k == 0) cellv_[c0] = j == s;
                    else if (s == 0) cellv_[c0] = k == dual[j];
                }
        // orbits of the nontrivial cells under Frobenius reciprocity
        std::vector<int> parent(n3);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        auto unite = [&](std::size_t a, std::size_t b) { parent[find(static_cast<int>(a))] = find(static_cast<int>(b)); };
        for (int j = 1; j < m; ++j)
            for (int k = 1; k < m; ++k)
                for (int s = 1; s < m; ++s) {
                    std::size_t c0 = cell(j, k, s);
                    unite(c0, cell(dual[j], s, k));
                    unite(c0, cell(s, dual[k], j));
                    unite(c0, cell(dual[k], dual[j], dual[s]));
                    if (o.commutative_only) unite(c0, cell(k, j, s));
                }
        std::map<int, int> root_id;
        for (int j = 1; j < m; ++j)
            for (int k = 1; k < m; ++k)
                for (int s = 1; s < m; ++s) {
                    std::size_t c0 = cell(j, k, s);
                    int r = find(static_cast<int>(c0));
                    auto [it, fresh] = root_id.emplace(r, static_cast<int>(orbit_cells_.size()));
                    if (fresh) orbit_cells_.emplace_back();
                    cell_orbit_[c0] = it->second;
                    orbit_cells_[it->second].push_back(c0);
                }
        const int no = static_cast<int>(orbit_cells_.size());
        ub_.assign(no, std::numeric_limits<i64>::max());
        for (int ob = 0; ob < no; ++ob) {
            i64 basic = std::numeric_limits<i64>::max(), pruned = basic;
            for (std::size_t c0 : orbit_cells_[ob]) {
                int j = static_cast<int>(c0 / (m * m)), k = static_cast<int>((c0 / m) % m), s = static_cast<int>(c0 % m);
                basic = std::min(basic, d[j] * d[k] / d[s]);
                pruned = std::min({pruned, d[j], d[k], d[s], d[s] * std::min(d[j], d[k]) / std::max(d[j], d[k])});
            }
            i64 u = basic;
            if (prune_) {
                pruned = std::min(pruned, basic);
                counters.domain_cut += basic - pruned;
                u = pruned;
            }
            if (c.max_multiplicity) u = std::min<i64>(u, *c.max_multiplicity);
            ub_[ob] = u;
        }
        val_.assign(no, -1);

        // rows (j, k) with j, k >= 1
        const int nr = m * m;
        target_.assign(nr, 0);
        sum_.assign(nr, 0);
        cap_.assign(nr, 0);
        sq_.assign(nr, 0);
        sqcap_.assign(nr, 0);
        free_.assign(nr, 0);
        row_orbits_.assign(nr, {});
        occ_.assign(no, {});
        for (int j = 1; j < m; ++j)
            for (int k = 1; k < m; ++k) {
                int r = j * m + k;
                i64 fixed = k == dual[j] ? 1 : 0;
                target_[r] = d[j] * d[k] - fixed;
                sqcap_[r] = std::min(d[j], d[k]) * std::min(d[j], d[k]) - fixed;
                std::map<int, Occ> agg;
                for (int s = 1; s < m; ++s) {
                    int ob = cell_orbit_[cell(j, k, s)];
                    auto& e = agg.try_emplace(ob, Occ{r, 0, 0}).first->second;
                    e.coef += d[s];
                    e.mult += 1;
                }
                for (auto& [ob, e] : agg) {
                    row_orbits_[r].push_back({ob, e.coef, e.mult});
                    occ_[ob].push_back(e);
                    cap_[r] += ub_[ob] * e.coef;
                }
                free_[r] = static_cast<int>(agg.size());
            }
        // pair-product caps
        pair_cap_.assign(static_cast<std::size_t>(nr) * nr, 0);
        for (int a = 0; a < nr; ++a)
            for (int b = 0; b < nr; ++b) {
                i64 js[4] = {d[a / m], d[a % m], d[b / m], d[b % m]};
                i64 best = std::numeric_limits<i64>::max();
                for (int x = 0; x < 4; ++x)
                    for (int y = x + 1; y < 4; ++y) best = std::min(best, js[x] * js[y]);
                pair_cap_[static_cast<std::size_t>(a) * nr + b] = best;
            }
        // associativity instances: (i,j)·(t,k*) = (j,k)·(i*,t)
        row_inst_.assign(nr, {});
        for (int i = 1; i < m; ++i)
            for (int j = 1; j < m; ++j)
                for (int k = 1; k < m; ++k)
                    for (int t = 1; t < m; ++t) {
                        std::array<int, 4> in{i * m + j, t * m + dual[k], j * m + k, dual[i] * m + t};
                        int id = static_cast<int>(inst_.size());
                        inst_.push_back(in);
                        std::set<int> rows(in.begin(), in.end());
                        for (int r : rows) row_inst_[r].push_back(id);
                    }
        complete_.assign(nr, 0);
        for (int r = 0; r < nr; ++r)
            if (r / m == 0 || r % m == 0) complete_[r] = 1;
    }

    int orbits() const { return static_cast<int>(orbit_cells_.size()); }

    // initial consistency and forced values; false if the type is infeasible outright
    bool init() {
        for (int r = 0; r < m_ * m_; ++r) {
            if (complete_[r]) continue;
            if (cap_[r] < target_[r] || target_[r] < 0 || sqcap_[r] < 0) {
                ++counters.dimension;
                return false;
            }
            if (free_[r] == 1) work_.push_back(r);
        }
        return propagate();
    }

    // choose the branching orbit and its value range; -1 when every row is complete
    int choose(i64& vmax) const {
        int best = -1;
        int bf = 0;
        i64 brem = 0;
        for (int r = 0; r < m_ * m_; ++r) {
            if (complete_[r] || free_[r] == 0) continue;
            i64 rem = target_[r] - sum_[r];
            if (best < 0 || free_[r] < bf || (free_[r] == bf && rem < brem)) {
                best = r;
                bf = free_[r];
                brem = rem;
            }
        }
        if (best < 0) return -1;
        int ob = -1;
        i64 coef = -1;
        for (auto& e : row_orbits_[best])
            if (val_[e.row] < 0 && e.coef > coef) {
                ob = e.row;
                coef = e.coef;
            }
        vmax = ub_[ob];
        for (auto& e : occ_[ob]) {
            vmax = std::min(vmax, (target_[e.row] - sum_[e.row]) / e.coef);
            if (prune_) vmax = std::min(vmax, isqrt((sqcap_[e.row] - sq_[e.row]) / e.mult));
        }
        return ob;
    }

    std::size_t mark() const { return trail_.size(); }

    void undo_to(std::size_t mk) {
        while (trail_.size() > mk) {
            int ob = trail_.back();
            trail_.pop_back();
            i64 v = val_[ob];
            for (auto& e : occ_[ob]) {
                int r = e.row;
                if (free_[r] == 0) complete_[r] = 0;
                sum_[r] -= v * e.coef;
                sq_[r] -= v * v * e.mult;
                cap_[r] += ub_[ob] * e.coef;
                ++free_[r];
            }
            for (std::size_t c0 : orbit_cells_[ob]) cellv_[c0] = 0;
            val_[ob] = -1;
        }
    }

    // assign and propagate; on false the caller undoes to its mark
    bool try_assign(int ob, i64 v) {
        work_.clear();
        if (!assign(ob, v)) return false;
        return propagate();
    }

    void leaf_tensor(std::vector<i64>& t) const { t.assign(cellv_.begin(), cellv_.end()); }

    PruneCounters counters;

private:
    std::size_t cell(int j, int k, int s) const { return (static_cast<std::size_t>(j) * m_ + k) * m_ + s; }

    bool assign(int ob, i64 v) {
        val_[ob] = v;
        trail_.push_back(ob);
        for (std::size_t c0 : orbit_cells_[ob]) cellv_[c0] = v;
        bool ok = true;
        done_.clear();
        for (auto& e : occ_[ob]) {
            int r = e.row;
            sum_[r] += v * e.coef;
            sq_[r] += v * v * e.mult;
            cap_[r] -= ub_[ob] * e.coef;
            --free_[r];
            if (!ok) continue;
            if (sum_[r] > target_[r] || sum_[r] + cap_[r] < target_[r]) {
                ++counters.dimension;
                ok = false;
            } else if (prune_ && sq_[r] > sqcap_[r]) {
                ++counters.sum_of_squares;
                ok = false;
            } else if (free_[r] == 1) {
                work_.push_back(r);
            } else if (free_[r] == 0) {
                done_.push_back(r);
            }
        }
        // complete_ must mirror free_ == 0 even on failure, for undo
        for (auto& e : occ_[ob])
            if (free_[e.row] == 0) complete_[e.row] = 1;
        if (!ok) return false;
        for (int r : done_)
            if (!check_complete_row(r)) return false;
        return true;
    }

    i64 dot(int a, int b) const {
        const i64* x = &cellv_[static_cast<std::size_t>(a) * m_];
        const i64* y = &cellv_[static_cast<std::size_t>(b) * m_];
        i64 s = 0;
        for (int l = 0; l < m_; ++l) s += x[l] * y[l];
        return s;
    }

    bool check_complete_row(int r) {
        const int nr = m_ * m_;
        if (prune_) {
            for (int q = 0; q < nr; ++q) {
                if (!complete_[q] || q / m_ == 0 || q % m_ == 0) continue;
                if (dot(r, q) > pair_cap_[static_cast<std::size_t>(r) * nr + q]) {
                    ++counters.pair_products;
                    return false;
                }
            }
        }
        for (int id : row_inst_[r]) {
            const auto& in = inst_[id];
            if (!complete_[in[0]] || !complete_[in[1]] || !complete_[in[2]] || !complete_[in[3]]) continue;
            if (dot(in[0], in[1]) != dot(in[2], in[3])) {
                ++counters.associativity;
                return false;
            }
        }
        return true;
    }

    bool propagate() {
        while (!work_.empty()) {
            int r = work_.back();
            work_.pop_back();
            if (free_[r] != 1) continue;
            const Occ* f = nullptr;
            for (auto& e : row_orbits_[r])
                if (val_[e.row] < 0) f = &e;
            i64 rem = target_[r] - sum_[r];
            if (rem % f->coef != 0) {
                ++counters.divisibility;
                return false;
            }
            i64 v = rem / f->coef;
            if (v > ub_[f->row]) {
                ++counters.dimension;
                return false;
            }
            if (!assign(f->row, v)) return false;
        }
        return true;
    }

    int m_;
    std::vector<i64> d_;
    std::vector<int> dual_;
    bool prune_;
    std::vector<int> cell_orbit_;
    std::vector<i64> cellv_;
    std::vector<std::vector<std::size_t>> orbit_cells_;
    std::vector<i64> ub_, val_;
    std::vector<i64> target_, sum_, cap_, sq_, sqcap_;
    std::vector<int> free_;
    std::vector<char> complete_;
    // row_orbits_ entries reuse Occ with .row holding the orbit id
    std::vector<std::vector<Occ>> row_orbits_;
    std::vector<std::vector<Occ>> occ_;
    std::vector<i64> pair_cap_;
    std::vector<std::array<int, 4>> inst_;
    std::vector<std::vector<int>> row_inst_;
    std::vector<int> trail_, work_, done_;
};

struct Unit {
    std::map<std::vector<i64>, std::vector<i64>> found;  // canonical -> tensor
    PruneCounters counters;
};

class Runner {
public:
    Runner(Solver& s, Shared& sh, const std::vector<std::vector<int>>& autos, int m, Unit& u)
        : s_(s), sh_(sh), autos_(autos), m_(m), u_(u) {}

    void dfs() {
        if (sh_.stop.load(std::memory_order_relaxed)) return;
        i64 vmax = 0;
        int ob = s_.choose(vmax);
        if (ob < 0) {
            leaf();
            return;
        }
        for (i64 v = 0; v <= vmax; ++v) {
            if (!tick()) return;
            auto mk = s_.mark();
            if (s_.try_assign(ob, v)) dfs();
            s_.undo_to(mk);
            if (sh_.stop.load(std::memory_order_relaxed)) return;
        }
    }

    bool tick() {
        ++s_.counters.nodes;
        i64 n = sh_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (n > sh_.node_budget) {
            sh_.halt(fmt::format("node budget {} exhausted", sh_.node_budget));
            return false;
        }
        if (sh_.has_deadline && (n & 1023) == 0 && Clock::now() > sh_.deadline) {
            sh_.halt("wall budget exhausted");
            return false;
        }
        return true;
    }

    void leaf() {
        ++s_.counters.leaves;
        std::vector<i64> t;
        s_.leaf_tensor(t);
        auto key = canonical_from(t, m_, autos_);
        u_.found.emplace(std::move(key), std::move(t));
    }

private:
    Solver& s_;
    Shared& sh_;
    const std::vector<std::vector<int>>& autos_;
    int m_;
    Unit& u_;
};

EnumerationResult run_search(const TypeSignature& type, const std::vector<int>& dual, const SearchConstraints& c,
                             const SearchOptions& o, Shared& sh) {
    auto d = expand_dims(type);
    const int m = static_cast<int>(d.size());
    if (static_cast<int>(dual.size()) != m) throw Error(Error::Code::Validation, "involution size does not match the type");
    for (int j = 0; j < m; ++j)
        if (dual[j] < 0 || dual[j] >= m || dual[dual[j]] != j || d[dual[j]] != d[j] || (j == 0) != (dual[j] == 0))
            throw Error(Error::Code::BadInvolution, "involution must fix 0 and preserve dimensions");
    if (m > 16) throw Error(Error::Code::RankTooLarge, fmt::format("rank {} exceeds the search cap 16", m));
    auto autos = type_automorphisms(d, dual);

    Solver base(d, dual, c, o);
    EnumerationResult res;
    std::vector<Unit> units;
    std::vector<i64> root_vals;
    int root = -1;
    if (base.init()) {
        i64 vmax = 0;
        root = base.choose(vmax);
        if (root < 0) {
            units.emplace_back();
            Runner(base, sh, autos, m, units[0]).leaf();
        } else {
            for (i64 v = 0; v <= vmax; ++v) root_vals.push_back(v);
        }
    }
    PruneCounters pre = base.counters;
    if (!root_vals.empty()) {
        units.resize(root_vals.size());
        std::atomic<std::size_t> next{0};
        auto work = [&]() {
            Solver s = base;
            while (true) {
                std::size_t u = next.fetch_add(1);
                if (u >= root_vals.size() || sh.stop.load()) break;
                s.counters = PruneCounters{};
                Runner run(s, sh, autos, m, units[u]);
                if (!run.tick()) break;
                auto mk = s.mark();
                if (s.try_assign(root, root_vals[u])) run.dfs();
                s.undo_to(mk);
                units[u].counters = s.counters;
            }
        };
        int nt = std::max(1, std::min<int>(o.threads, static_cast<int>(root_vals.size())));
        if (nt == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < nt; ++t) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }
    }
    res.counters = pre;
    std::map<std::vector<i64>, std::vector<i64>> merged;
    for (auto& u : units) {
        res.counters += u.counters;
        for (auto& [k, t] : u.found) merged.emplace(k, t);
    }
    for (auto& [k, t] : merged) {
        std::vector<double> td(k.begin(), k.end());
        auto fd = FusionData::from_tensor(m, std::move(td), dual, Mode::Exact);
        res.rings.push_back(std::move(fd));
    }
    if (sh.stop.load()) {
        res.complete = false;
        res.stop_reason = sh.reason;
    }
    return res;
}

}  // namespace

EnumerationResult search_fusion_rings(const TypeSignature& type, const std::vector<int>& dual, const SearchConstraints& c,
                                      const SearchOptions& o) {
    Shared sh;
    sh.node_budget = o.node_budget;
    if (o.wall_budget > 0) {
        sh.has_deadline = true;
        sh.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(o.wall_budget));
    }
    return run_search(type, dual, c, o, sh);
}

std::vector<FusionData> enumerate_fusion_rings(const TypeSignature& type, const std::vector<int>& dual,
                                               const SearchConstraints& c, const SearchOptions& o) {
    auto r = search_fusion_rings(type, dual, c, o);
    if (!r.complete) throw Error(Error::Code::Timeout, fmt::format("search of {} stopped: {}", type.str(), r.stop_reason));
    return std::move(r.rings);
}

// ---------------------------------------------------------------- classification

int ClassificationReport::count_simple() const {
    return static_cast<int>(std::count_if(rings.begin(), rings.end(), [](const FoundRing& r) { return r.simple; }));
}

int ClassificationReport::count_schur_pass() const {
    return static_cast<int>(std::count_if(rings.begin(), rings.end(), [](const FoundRing& r) { return r.schur.value_or(false); }));
}

namespace {

std::string dual_str(const std::vector<int>& dual) {
    std::string s;
    for (std::size_t i = 0; i < dual.size(); ++i) s += (i ? " " : "") + std::to_string(dual[i] + 1);
    return s;
}

nlohmann::json opt_bool(const std::optional<bool>& b) { return b ? nlohmann::json(*b) : nlohmann::json(nullptr); }

struct Checkpoint {
    std::map<std::string, std::vector<std::string>> done;  // "type|dual" -> FRT texts

    static std::string key(const TypeSignature& t, const std::vector<int>& dual) { return t.str() + "|" + dual_str(dual); }

    void load(const std::string& path) {
        std::ifstream in(path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("key")) continue;
            done[j["key"].get<std::string>()] = j["rings"].get<std::vector<std::string>>();
        }
    }

    static void append(const std::string& path, const std::string& key, const std::vector<FusionData>& rings) {
        nlohmann::json j;
        j["key"] = key;
        auto arr = nlohmann::json::array();
        for (const auto& r : rings) arr.push_back(serialize_fusion_ring(r));
        j["rings"] = arr;
        std::ofstream out(path, std::ios::app);
        out << j.dump() << "\n";
    }
};

}  // namespace

nlohmann::json ClassificationReport::to_json(bool include_wall) const {
    nlohmann::json j;
    j["constraints"] = constraints.to_json();
    j["filters"] = {{"simple", opt_bool(filters.simple)}, {"schur", opt_bool(filters.schur)}};
    j["complete"] = complete;
    if (!complete) j["stop_reason"] = stop_reason;
    j["types_examined"] = types_examined;
    j["fpdim_completed"] = fpdim_completed;
    auto ts = nlohmann::json::array();
    for (const auto& t : types) {
        nlohmann::json e;
        e["type"] = t.type.str();
        e["involutions_tried"] = t.involutions_tried;
        e["rings_found"] = t.rings_found;
        e["simple"] = t.simple;
        e["schur_pass"] = t.schur_pass;
        e["complete"] = t.complete;
        e["search"] = t.counters.to_json();
        ts.push_back(e);
    }
    j["types"] = ts;
    auto rs = nlohmann::json::array();
    for (const auto& r : rings) {
        nlohmann::json e;
        e["type"] = r.type;
        e["dual"] = r.dual;
        for (auto& x : e["dual"]) x = x.get<int>() + 1;
        e["simple"] = r.simple;
        e["commutative"] = r.commutative;
        e["schur"] = opt_bool(r.schur);
        if (r.schur) e["schur_worst"] = r.schur_worst;
        e["frt"] = serialize_fusion_ring(r.fd);
        rs.push_back(e);
    }
    j["rings"] = rs;
    j["counts"] = {{"rings", rings.size()}, {"simple", count_simple()}, {"schur_pass", count_schur_pass()}};
    j["search"] = counters.to_json();
    if (include_wall) j["wall_seconds"] = wall_seconds;
    return j;
}

ClassificationReport classify(const SearchConstraints& c, const ClassifyFilters& f, const SearchOptions& o,
                              const std::string& checkpoint) {
    auto t0 = Clock::now();
    ClassificationReport rep;
    rep.constraints = c;
    rep.filters = f;
    check_range(c);
    Checkpoint cp;
    if (!checkpoint.empty()) cp.load(checkpoint);
    Shared sh;
    sh.node_budget = o.node_budget;
    if (o.wall_budget > 0) {
        sh.has_deadline = true;
        sh.deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(o.wall_budget));
    }
    // types are produced one FPdim at a time so a wall budget can stop long ranges
    std::vector<TypeSignature> types;
    for (i64 F = std::max<i64>(1, c.fpdim_min); F <= c.fpdim_max; ++F) {
        if (sh.has_deadline && Clock::now() >= sh.deadline) {
            rep.complete = false;
            rep.stop_reason = fmt::format("wall budget exhausted before FPdim {}", F);
            break;
        }
        types.clear();
        types_of_fpdim(c, F, types);
        for (const auto& type : types) {
            ++rep.types_examined;
            TypeReport tr;
            tr.type = type;
            for (const auto& inv : enumerate_involutions(type)) {
                ++tr.involutions_tried;
                std::vector<FusionData> rings;
                auto key = Checkpoint::key(type, inv);
                if (auto it = cp.done.find(key); it != cp.done.end()) {
                    for (const auto& txt : it->second) rings.push_back(parse_fusion_ring(txt));
                } else {
                    sh.nodes = 0;
                    auto res = run_search(type, inv, c, o, sh);
                    tr.counters += res.counters;
                    rings = std::move(res.rings);
                    if (!res.complete) {
                        tr.complete = false;
                        rep.complete = false;
                        rep.stop_reason = fmt::format("{} with involution [{}]: {}", type.str(), dual_str(inv), res.stop_reason);
                        // a node budget is per involution; the wall budget ends the run
                        if (res.stop_reason.find("wall") != std::string::npos) {
                            rep.types.push_back(tr);
                            rep.counters += tr.counters;
                            rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
                            return rep;
                        }
                        sh.stop = false;
                    } else if (!checkpoint.empty()) {
                        Checkpoint::append(checkpoint, key, rings);
                    }
                }
                for (auto& fd : rings) {
                    ++tr.rings_found;
                    FoundRing r;
                    r.type = type.str();
                    r.dual = inv;
                    r.simple = is_simple(fd);
                    r.commutative = is_commutative(fd);
                    if (r.commutative) {
                        auto s = schur_commutative(character_table(fd));
                        r.schur = s.holds;
                        r.schur_worst = s.worst_value;
                    }
                    if (r.simple) ++tr.simple;
                    if (r.schur.value_or(false)) ++tr.schur_pass;
                    if (f.simple && r.simple != *f.simple) continue;
                    if (f.schur && r.schur != f.schur) continue;
                    r.fd = std::move(fd);
                    rep.rings.push_back(std::move(r));
                }
            }
            rep.counters += tr.counters;
            if (!tr.complete) rep.complete = false;
            rep.types.push_back(std::move(tr));
        }
        rep.fpdim_completed = F;
    }
    rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return rep;
}

// ---------------------------------------------------------------- rank-5 family

namespace {

// entries >= 100 are constants (value - 100); others index the parameters a..p
constexpr int C0 = 100, C1 = 101;
enum { pa, pb, pc, pd, pe, pf, pg, ph, pi, pj, pk, pl, pm, pn, po, pp };
const int kTemplate[5][5][5] = {
    {{C1, C0, C0, C0, C0}, {C0, C1, C0, C0, C0}, {C0, C0, C1, C0, C0}, {C0, C0, C0, C1, C0}, {C0, C0, C0, C0, C1}},
    {{C0, C1, C0, C0, C0}, {C0, pa, pk, pf, pj}, {C1, pa, pa, pb, pc}, {C0, pd, pf, pg, ph}, {C0, pe, pj, pi, pl}},
    {{C0, C0, C1, C0, C0}, {C1, pa, pa, pd, pe}, {C0, pk, pa, pf, pj}, {C0, pf, pb, pg, pi}, {C0, pj, pc, ph, pl}},
    {{C0, C0, C0, C1, C0}, {C0, pb, pf, pg, pi}, {C0, pf, pd, pg, ph}, {C1, pg, pg, pm, po}, {C0, pi, ph, po, pp}},
    {{C0, C0, C0, C0, C1}, {C0, pc, pj, ph, pl}, {C0, pj, pe, pi, pl}, {C0, ph, pi, po, pp}, {C1, pl, pl, pp, pn}},
};

}  // namespace

FusionData rank5_template(const std::array<int, 16>& p, Mode mode) {
    std::vector<Matrix> mats(5, Matrix(5, std::vector<double>(5)));
    for (int j = 0; j < 5; ++j)
        for (int k = 0; k < 5; ++k)
            for (int s = 0; s < 5; ++s) {
                int e = kTemplate[j][k][s];
                mats[j][k][s] = e >= C0 ? e - C0 : p[e];
            }
    return new_fusion_data(mats, mode);
}

FamilyResult rank5_three_selfadjoint_family(int max_multiplicity) {
    if (max_multiplicity < 1) throw Error(Error::Code::Usage, "max_multiplicity must be at least 1");
    // associativity instances over the nonunit indices, as parameter sets
    struct Inst {
        int i, j, k, t;
        unsigned mask;
    };
    std::vector<Inst> inst;
    for (int i = 1; i < 5; ++i)
        for (int j = 1; j < 5; ++j)
            for (int k = 1; k < 5; ++k)
                for (int t = 1; t < 5; ++t) {
                    unsigned mask = 0;
                    for (int s = 0; s < 5; ++s)
                        for (int e : {kTemplate[i][j][s], kTemplate[s][k][t], kTemplate[j][k][s], kTemplate[i][s][t]})
                            if (e < C0) mask |= 1u << e;
                    inst.push_back({i, j, k, t, mask});
                }
    // greedy order: each step completes as many instances as possible
    std::vector<int> order;
    unsigned chosen = 0;
    for (int step = 0; step < 16; ++step) {
        int best = -1, bc = -1;
        for (int q = 0; q < 16; ++q) {
            if (chosen >> q & 1) continue;
            int cnt = 0;
            for (const auto& in : inst)
                if ((in.mask & ~(chosen | 1u << q)) == 0) ++cnt;
            if (cnt > bc) {
                bc = cnt;
                best = q;
            }
        }
        order.push_back(best);
        chosen |= 1u << best;
    }
    std::vector<std::vector<int>> at_step(16);
    {
        unsigned have = 0;
        for (int step = 0; step < 16; ++step) {
            have |= 1u << order[step];
            for (std::size_t x = 0; x < inst.size(); ++x)
                if ((inst[x].mask & ~have) == 0 && (inst[x].mask >> order[step] & 1)) at_step[step].push_back(static_cast<int>(x));
        }
    }
    std::array<int, 16> p{};
    auto N = [&](int j, int k, int s) {
        int e = kTemplate[j][k][s];
        return e >= C0 ? e - C0 : p[e];
    };
    auto holds = [&](const Inst& in) {
        int l = 0, r = 0;
        for (int s = 0; s < 5; ++s) {
            l += N(in.i, in.j, s) * N(s, in.k, in.t);
            r += N(in.j, in.k, s) * N(in.i, s, in.t);
        }
        return l == r;
    };
    const std::vector<std::vector<int>> autos{{0, 1, 2, 3, 4}, {0, 2, 1, 3, 4}, {0, 1, 2, 4, 3}, {0, 2, 1, 4, 3}};
    FamilyResult res;
    std::map<std::vector<i64>, std::vector<i64>> found;
    auto rec = [&](auto&& self, int step) -> void {
        if (step == 16) {
            ++res.leaves;
            std::vector<i64> t(125);
            for (int j = 0; j < 5; ++j)
                for (int k = 0; k < 5; ++k)
                    for (int s = 0; s < 5; ++s) t[(j * 5 + k) * 5 + s] = N(j, k, s);
            auto key = canonical_from(t, 5, autos);
            found.emplace(key, t);
            return;
        }
        int q = order[step];
        for (int v = 0; v <= max_multiplicity; ++v) {
            ++res.nodes;
            p[q] = v;
            bool ok = true;
            for (int x : at_step[step])
                if (!holds(inst[x])) {
                    ok = false;
                    break;
                }
            if (ok) self(self, step + 1);
        }
        p[q] = 0;
    };
    rec(rec, 0);
    for (auto& [k, t] : found) {
        std::vector<double> td(k.begin(), k.end());
        res.rings.push_back(FusionData::from_tensor(5, std::move(td), {0, 2, 1, 3, 4}, Mode::Exact));
    }
    return res;
}

}  // namespace fusion

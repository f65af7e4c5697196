#include "fusion/ring.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <map>
#include <set>

namespace fusion {

const char* code_name(Error::Code c) {
    switch (c) {
    case Error::Code::NonSquare: return "NonSquare";
    case Error::Code::NegativeEntry: return "NegativeEntry";
    case Error::Code::NoUnit: return "NoUnit";
    case Error::Code::NoDuality: return "NoDuality";
    case Error::Code::BadInvolution: return "BadInvolution";
    case Error::Code::NotInteger: return "NotInteger";
    case Error::Code::ConvergenceFailure: return "ConvergenceFailure";
    case Error::Code::RankTooLarge: return "RankTooLarge";
    case Error::Code::NotIntegral: return "NotIntegral";
    case Error::Code::NotCommutative: return "NotCommutative";
    case Error::Code::DegenerateSpectrum: return "DegenerateSpectrum";
    case Error::Code::NormalizationFailure: return "NormalizationFailure";
    case Error::Code::InfeasibleParams: return "InfeasibleParams";
    case Error::Code::SideMismatch: return "SideMismatch";
    case Error::Code::BadExponent: return "BadExponent";
    case Error::Code::UnboundedSearch: return "UnboundedSearch";
    case Error::Code::Timeout: return "Timeout";
    case Error::Code::Parse: return "ParseError";
    case Error::Code::Validation: return "ValidationError";
    case Error::Code::Usage: return "UsageError";
    }
    return "Unknown";
}

FusionData FusionData::from_tensor(int m, std::vector<double> t, std::vector<int> dual,
                                   Mode mode) {
    FusionData fd;
    fd.m_ = m;
    fd.t_ = std::move(t);
    fd.dual_ = std::move(dual);
    fd.exact_ = mode == Mode::Exact;
    if (fd.exact_) {
        fd.it_.resize(fd.t_.size());
        for (std::size_t i = 0; i < fd.t_.size(); ++i) {
            double r = std::round(fd.t_[i]);
            if (r != fd.t_[i])
                throw Error(Error::Code::NotInteger, "exact mode requires integer entries");
            fd.it_[i] = static_cast<std::int64_t>(r);
        }
    }
    fd.cache_ = std::make_shared<Cache>();
    return fd;
}

Matrix FusionData::fusion_matrix(int j) const {
    Matrix M(m_, std::vector<double>(m_));
    for (int k = 0; k < m_; ++k)
        for (int s = 0; s < m_; ++s) M[k][s] = N(j, k, s);
    return M;
}

const std::vector<double>& FusionData::fp_dims() const {
    std::call_once(cache_->once, [this] { cache_->dims = fp_dimensions(*this); });
    return cache_->dims;
}

FusionData new_fusion_data(const std::vector<Matrix>& mats, Mode mode) {
    int m = static_cast<int>(mats.size());
    if (m < 1) throw Error(Error::Code::NonSquare, "no matrices");
    std::vector<double> t(static_cast<std::size_t>(m) * m * m);
    for (int j = 0; j < m; ++j) {
        if (static_cast<int>(mats[j].size()) != m)
            throw Error(Error::Code::NonSquare, fmt::format("matrix {} has {} rows, expected {}", j + 1, mats[j].size(), m));
        for (int k = 0; k < m; ++k) {
            if (static_cast<int>(mats[j][k].size()) != m)
                throw Error(Error::Code::NonSquare, fmt::format("matrix {} row {} has wrong length", j + 1, k + 1));
            for (int s = 0; s < m; ++s) {
                double v = mats[j][k][s];
                if (v < 0 || !std::isfinite(v))
                    throw Error(Error::Code::NegativeEntry, fmt::format("matrix {} entry ({},{}) is negative", j + 1, k + 1, s + 1));
                t[(static_cast<std::size_t>(j) * m + k) * m + s] = v;
            }
        }
    }
    for (int k = 0; k < m; ++k)
        for (int s = 0; s < m; ++s)
            if (mats[0][k][s] != (k == s ? 1.0 : 0.0))
                throw Error(Error::Code::NoUnit, "matrix 1 is not the identity");
    std::vector<int> dual(m, -1);
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            double v = mats[j][k][0];
            if (v == 0) continue;
            if (v != 1 || dual[j] != -1)
                throw Error(Error::Code::NoDuality, fmt::format("column 1 of matrix {} is not a unit vector", j + 1));
            dual[j] = k;
        }
        if (dual[j] == -1)
            throw Error(Error::Code::NoDuality, fmt::format("matrix {} has no dual", j + 1));
    }
    if (dual[0] != 0) throw Error(Error::Code::BadInvolution, "unit is not self-dual");
    for (int j = 0; j < m; ++j)
        if (dual[dual[j]] != j)
            throw Error(Error::Code::BadInvolution, fmt::format("duality is not an involution at {}", j + 1));
    return FusionData::from_tensor(m, std::move(t), std::move(dual), mode);
}

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.pass; });
}

const AxiomCheck& VerificationReport::get(const std::string& name) const {
    for (auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("no check " + name);
}

namespace {

// Generic checker: exact mode compares int64 values, float mode uses a scaled tolerance.
struct Checker {
    const FusionData& fd;
    double tol;
    AxiomCheck c;

    void record(double lhs, double rhs, std::vector<int> w, double scale) {
        double r = std::abs(lhs - rhs);
        bool bad = fd.exact() ? (lhs != rhs) : r > tol * scale;
        if (r > c.residual) c.residual = r;
        if (bad && c.pass) {
            c.pass = false;
            c.witness = std::move(w);
        }
    }
};

}  // namespace

VerificationReport verify_axioms(const FusionData& fd, double tol) {
    const int m = fd.rank();
    const auto& D = fd.dual();
    double maxe = 1.0;
    for (double v : fd.tensor()) maxe = std::max(maxe, v);
    VerificationReport rep;

    Checker nonneg{fd, tol, {"nonnegativity", true, {}, 0.0}};
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            for (int s = 0; s < m; ++s)
                if (fd.N(j, k, s) < 0) nonneg.record(fd.N(j, k, s), 0.0, {j, k, s}, 0.0);
    rep.checks.push_back(nonneg.c);

    Checker unit{fd, tol, {"unit", true, {}, 0.0}};
    for (int k = 0; k < m; ++k)
        for (int s = 0; s < m; ++s) {
            double e = k == s ? 1.0 : 0.0;
            unit.record(fd.N(0, k, s), e, {0, k, s}, 1.0);
            unit.record(fd.N(k, 0, s), e, {k, 0, s}, 1.0);
        }
    rep.checks.push_back(unit.c);

    Checker dual{fd, tol, {"duality", true, {}, 0.0}};
    bool invol = static_cast<int>(D.size()) == m && m > 0 && D[0] == 0;
    for (int j = 0; invol && j < m; ++j)
        invol = D[j] >= 0 && D[j] < m && D[D[j]] == j;
    if (!invol) {
        dual.c.pass = false;
        dual.c.residual = 1.0;
    } else {
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                dual.record(fd.N(j, k, 0), D[k] == j ? 1.0 : 0.0, {j, k, 0}, 1.0);
    }
    rep.checks.push_back(dual.c);

    Checker frob{fd, tol, {"frobenius_reciprocity", true, {}, 0.0}};
    if (invol) {
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int s = 0; s < m; ++s) {
                    double v = fd.N(j, k, s);
                    frob.record(v, fd.N(D[k], D[j], D[s]), {j, k, s}, maxe);
                    frob.record(v, fd.N(D[j], s, k), {j, k, s}, maxe);
                }
    } else {
        frob.c.pass = false;
    }
    rep.checks.push_back(frob.c);

    Checker assoc{fd, tol, {"associativity", true, {}, 0.0}};
    if (fd.exact()) {
        const auto& T = fd.itensor();
        auto at = [&](int a, int b, int c) { return T[fd.idx(a, b, c)]; };
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    for (int t = 0; t < m; ++t) {
                        std::int64_t l = 0, r = 0;
                        for (int s = 0; s < m; ++s) {
                            l += at(i, j, s) * at(s, k, t);
                            r += at(j, k, s) * at(i, s, t);
                        }
                        if (l != r) {
                            double res = std::abs(static_cast<double>(l - r));
                            assoc.c.residual = std::max(assoc.c.residual, res);
                            if (assoc.c.pass) {
                                assoc.c.pass = false;
                                assoc.c.witness = {i, j, k, t};
                            }
                        }
                    }
    } else {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    for (int t = 0; t < m; ++t) {
                        double l = 0, r = 0;
                        for (int s = 0; s < m; ++s) {
                            l += fd.N(i, j, s) * fd.N(s, k, t);
                            r += fd.N(j, k, s) * fd.N(i, s, t);
                        }
                        assoc.record(l, r, {i, j, k, t}, maxe * maxe * m);
                    }
    }
    rep.checks.push_back(assoc.c);
    return rep;
}

double perron_root(const Matrix& M) {
    const int n = static_cast<int>(M.size());
    if (n == 0) return 0.0;
    // power iteration on M + I; the shift kills periodicity without moving the Perron root
    std::vector<double> x(n, 1.0), y(n);
    for (int it = 0; it < 100000; ++it) {
        double lo = INFINITY, hi = 0.0, mx = 0.0;
        bool positive = true;
        for (int i = 0; i < n; ++i) {
            double s = x[i];
            for (int j = 0; j < n; ++j) s += M[i][j] * x[j];
            y[i] = s;
            if (x[i] <= 0) {
                positive = false;
            } else {
                lo = std::min(lo, s / x[i]);
                hi = std::max(hi, s / x[i]);
            }
            mx = std::max(mx, s);
        }
        if (!positive || mx == 0.0) break;
        if (hi - lo <= 1e-12 * hi) return 0.5 * (hi + lo) - 1.0;
        for (int i = 0; i < n; ++i) x[i] = y[i] / mx;
    }
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = M[i][j];
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    if (es.info() != Eigen::Success)
        throw Error(Error::Code::ConvergenceFailure, "eigenvalue solver did not converge");
    double r = 0.0;
    for (int i = 0; i < n; ++i) r = std::max(r, std::abs(es.eigenvalues()[i]));
    return r;
}

std::vector<double> fp_dimensions(const FusionData& fd) {
    std::vector<double> d(fd.rank());
    for (int j = 0; j < fd.rank(); ++j) d[j] = perron_root(fd.fusion_matrix(j));
    return d;
}

double global_fpdim(const FusionData& fd) {
    double mu = 0;
    for (double x : fd.fp_dims()) mu += x * x;
    return mu;
}

double TypeSignature::fpdim() const {
    double mu = 0;
    for (auto& [n, k] : entries) mu += k * n * n;
    return mu;
}

std::string TypeSignature::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) s += ",";
        if (integral)
            s += fmt::format("[{},{}]", std::llround(entries[i].first), entries[i].second);
        else
            s += fmt::format("[{:.6f},{}]", entries[i].first, entries[i].second);
    }
    return s + "]";
}

std::vector<std::pair<std::int64_t, int>> TypeSignature::integer_entries() const {
    if (!integral) throw Error(Error::Code::NotIntegral, "type is not integral");
    std::vector<std::pair<std::int64_t, int>> r;
    for (auto& [n, k] : entries) r.emplace_back(std::llround(n), k);
    return r;
}

TypeSignature type_signature(const FusionData& fd, double integer_tol) {
    std::vector<double> d = fd.fp_dims();
    std::sort(d.begin(), d.end());
    TypeSignature ts;
    for (double x : d)
        if (std::abs(x - std::round(x)) > integer_tol) ts.integral = false;
    for (double x : d) {
        double v = ts.integral ? std::round(x) : x;
        if (!ts.entries.empty() && std::abs(ts.entries.back().first - v) <= integer_tol)
            ts.entries.back().second++;
        else
            ts.entries.emplace_back(v, 1);
    }
    return ts;
}

TypeSignature parse_type(const std::string& s) {
    std::vector<long long> nums;
    std::string cur;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            cur += c;
        } else {
            if (!cur.empty()) nums.push_back(std::stoll(cur));
            cur.clear();
            if (c != '[' && c != ']' && c != ',' && !std::isspace(static_cast<unsigned char>(c)))
                throw Error(Error::Code::Parse, "bad type string: " + s);
        }
    }
    if (!cur.empty()) nums.push_back(std::stoll(cur));
    if (nums.empty() || nums.size() % 2) throw Error(Error::Code::Parse, "bad type string: " + s);
    TypeSignature ts;
    for (std::size_t i = 0; i < nums.size(); i += 2) {
        if (nums[i] < 1 || nums[i + 1] < 1) throw Error(Error::Code::Parse, "bad type string: " + s);
        ts.entries.emplace_back(static_cast<double>(nums[i]), static_cast<int>(nums[i + 1]));
    }
    std::sort(ts.entries.begin(), ts.entries.end());
    return ts;
}

std::vector<int> subring_closure(const FusionData& fd, const std::vector<int>& generators) {
    const int m = fd.rank();
    std::vector<char> in(m, 0);
    in[0] = 1;
    for (int g : generators) in.at(g) = 1;
    for (int round = 0; round <= m; ++round) {
        std::vector<char> next = in;
        for (int j = 0; j < m; ++j) {
            if (!in[j]) continue;
            next[fd.dual(j)] = 1;
            for (int k = 0; k < m; ++k) {
                if (!in[k]) continue;
                for (int s = 0; s < m; ++s)
                    if (fd.N(j, k, s) != 0) next[s] = 1;
            }
        }
        if (next == in) break;
        in = std::move(next);
    }
    std::vector<int> r;
    for (int j = 0; j < m; ++j)
        if (in[j]) r.push_back(j);
    return r;
}

std::vector<std::vector<int>> proper_subrings(const FusionData& fd, int rank_cap) {
    const int m = fd.rank();
    if (m > rank_cap)
        throw Error(Error::Code::RankTooLarge, fmt::format("rank {} exceeds subring cap {}", m, rank_cap));
    std::set<std::vector<int>> all;
    for (int j = 1; j < m; ++j) all.insert(subring_closure(fd, {j}));
    for (bool grew = true; grew;) {
        grew = false;
        std::vector<std::vector<int>> cur(all.begin(), all.end());
        for (std::size_t a = 0; a < cur.size(); ++a)
            for (std::size_t b = a + 1; b < cur.size(); ++b) {
                std::vector<int> u;
                std::set_union(cur[a].begin(), cur[a].end(), cur[b].begin(), cur[b].end(),
                               std::back_inserter(u));
                if (all.insert(subring_closure(fd, u)).second) grew = true;
            }
    }
    std::vector<std::vector<int>> r;
    for (auto& s : all)
        if (static_cast<int>(s.size()) > 1 && static_cast<int>(s.size()) < m) r.push_back(s);
    return r;
}

bool is_simple(const FusionData& fd) { return fd.rank() > 1 && proper_subrings(fd).empty(); }

bool is_perfect(const FusionData& fd, double tol) {
    int ones = 0;
    for (double d : fd.fp_dims())
        if (std::abs(d - 1.0) <= tol) ++ones;
    return ones == 1;
}

bool is_integral(const FusionData& fd, double tol) { return type_signature(fd, tol).integral; }

bool is_frobenius_type(const FusionData& fd, double tol) {
    TypeSignature ts = type_signature(fd, tol);
    if (!ts.integral)
        throw Error(Error::Code::NotIntegral, "Frobenius type is only decided for integral rings");
    std::int64_t mu = std::llround(ts.fpdim());
    for (auto& [n, k] : ts.integer_entries())
        if (mu % n) return false;
    return true;
}

bool is_commutative(const FusionData& fd, double tol) {
    const int m = fd.rank();
    for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k)
            for (int s = 0; s < m; ++s)
                if (std::abs(fd.N(j, k, s) - fd.N(k, j, s)) > tol) return false;
    return true;
}

FusionData permute(const FusionData& fd, const std::vector<int>& sg) {
    const int m = fd.rank();
    std::vector<double> t(fd.tensor().size());
    std::vector<int> dual(m);
    for (int j = 0; j < m; ++j) {
        dual[sg[j]] = sg[fd.dual(j)];
        for (int k = 0; k < m; ++k)
            for (int s = 0; s < m; ++s) t[fd.idx(sg[j], sg[k], sg[s])] = fd.N(j, k, s);
    }
    FusionData r = FusionData::from_tensor(m, std::move(t), std::move(dual),
                                           fd.exact() ? Mode::Exact : Mode::Float);
    r.set_label(fd.label());
    return r;
}

namespace {

std::vector<std::vector<double>> fingerprints(const FusionData& fd) {
    const int m = fd.rank();
    const auto& d = fd.fp_dims();
    std::vector<std::vector<double>> fp(m);
    for (int j = 0; j < m; ++j) {
        auto& f = fp[j];
        f.push_back(std::round(d[j] * 1e6) / 1e6);
        f.push_back(fd.dual(j) == j ? 1 : 0);
        f.push_back(fd.N(j, j, j));
        std::vector<double> row, diag;
        for (int k = 0; k < m; ++k) {
            diag.push_back(fd.N(j, fd.dual(j), k));
            for (int s = 0; s < m; ++s) row.push_back(fd.N(j, k, s));
        }
        std::sort(row.begin(), row.end());
        std::sort(diag.begin(), diag.end());
        f.insert(f.end(), row.begin(), row.end());
        f.insert(f.end(), diag.begin(), diag.end());
    }
    return fp;
}

}  // namespace

std::optional<std::vector<int>> are_isomorphic(const FusionData& a, const FusionData& b,
                                               int rank_cap) {
    const int m = a.rank();
    if (b.rank() != m) return std::nullopt;
    if (m > rank_cap)
        throw Error(Error::Code::RankTooLarge, fmt::format("rank {} exceeds isomorphism cap {}", m, rank_cap));
    auto fa = fingerprints(a), fb = fingerprints(b);
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-9 * (1 + std::abs(x)); };
    auto same = [&](const std::vector<double>& x, const std::vector<double>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!close(x[i], y[i])) return false;
        return true;
    };
    std::vector<std::vector<int>> cand(m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            if (same(fa[j], fb[k])) cand[j].push_back(k);
    if (cand[0].empty() || cand[0][0] != 0) return std::nullopt;
    cand[0] = {0};
    for (auto& c : cand)
        if (c.empty()) return std::nullopt;
    std::vector<int> order(m);
    for (int j = 0; j < m; ++j) order[j] = j;
    std::stable_sort(order.begin() + 1, order.end(),
                     [&](int x, int y) { return cand[x].size() < cand[y].size(); });

    std::vector<int> sg(m, -1), used(m, 0), placed;
    std::function<bool(int)> go = [&](int pos) -> bool {
        if (pos == m) return true;
        int j = order[pos];
        for (int c : cand[j]) {
            if (used[c]) continue;
            sg[j] = c;
            bool ok = true;
            int dj = a.dual(j);
            if (sg[dj] >= 0 && sg[dj] != b.dual(c)) ok = false;
            if (dj == j && b.dual(c) != c) ok = false;
            placed.push_back(j);
            for (std::size_t x = 0; ok && x < placed.size(); ++x)
                for (std::size_t y = 0; ok && y < placed.size(); ++y) {
                    int p = placed[x], q = placed[y];
                    if (!close(a.N(j, p, q), b.N(c, sg[p], sg[q])) ||
                        !close(a.N(p, j, q), b.N(sg[p], c, sg[q])) ||
                        !close(a.N(p, q, j), b.N(sg[p], sg[q], c)))
                        ok = false;
                }
            if (ok) {
                used[c] = 1;
                if (go(pos + 1)) return true;
                used[c] = 0;
            }
            placed.pop_back();
            sg[j] = -1;
        }
        return false;
    };
    if (go(0)) return sg;
    return std::nullopt;
}

BoundsReport coefficient_bounds_report(const FusionData& fd, double tol) {
    return coefficient_bounds_report(fd, fd.fp_dims(), tol);
}

BoundsReport coefficient_bounds_report(const FusionData& fd, const std::vector<double>& d,
                                       double tol) {
    const int m = fd.rank();
    BoundsReport rep;
    const char* names[4] = {"sum_of_squares", "ratio", "min_dim", "pair_products"};
    for (int i = 0; i < 4; ++i) {
        rep.b[i].name = names[i];
        rep.b[i].slack = INFINITY;
    }
    auto note = [&](int i, double lhs, double rhs, std::vector<int> w) {
        double sl = rhs - lhs;
        if (sl < rep.b[i].slack) {
            rep.b[i].slack = sl;
            rep.b[i].witness = std::move(w);
        }
        if (sl < -tol * (1 + std::abs(rhs))) rep.b[i].holds = false;
    };
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            double sq = 0;
            for (int l = 0; l < m; ++l) {
                double n = fd.N(j, k, l);
                sq += n * n;
                note(1, n, d[l] * std::min(d[j], d[k]) / std::max(d[j], d[k]), {j, k, l});
                note(2, n, std::min({d[j], d[k], d[l]}), {j, k, l});
            }
            note(0, sq, std::min(d[j] * d[j], d[k] * d[k]), {j, k});
        }
    for (int j1 = 0; j1 < m; ++j1)
        for (int j2 = 0; j2 < m; ++j2)
            for (int j3 = 0; j3 < m; ++j3)
                for (int j4 = 0; j4 < m; ++j4) {
                    double s = 0;
                    for (int t = 0; t < m; ++t) s += fd.N(j1, j2, t) * fd.N(j3, j4, t);
                    int js[4] = {j1, j2, j3, j4};
                    double best = INFINITY;
                    for (int x = 0; x < 4; ++x)
                        for (int y = x + 1; y < 4; ++y) best = std::min(best, d[js[x]] * d[js[y]]);
                    note(3, s, best, {j1, j2, j3, j4});
                }
    return rep;
}

}  // namespace fusion

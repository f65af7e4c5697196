#include "fusion/bialgebra.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <mutex>
#include <random>
#include <thread>

namespace fusion {

namespace {

const double INF = std::numeric_limits<double>::infinity();

void require_side(const Element& x, Side s, const char* what) {
    if (x.side != s)
        throw Error(Error::Code::SideMismatch,
                    fmt::format("{} expects a side {} element, got side {}", what, side_name(s), side_name(x.side)));
}

void require_same(const Element& x, const Element& y, const char* what) {
    if (x.side != y.side)
        throw Error(Error::Code::SideMismatch, fmt::format("{}: sides {} and {} differ", what, side_name(x.side), side_name(y.side)));
    if (x.rank() != y.rank()) throw Error(Error::Code::Validation, fmt::format("{}: rank mismatch", what));
}

Element make(Eigen::VectorXcd c, Side s) { return Element{std::move(c), s}; }

}  // namespace

const char* side_name(Side s) { return s == Side::A ? "A" : "B"; }

Element operator+(const Element& x, const Element& y) {
    require_same(x, y, "+");
    return make(x.coeffs + y.coeffs, x.side);
}

Element operator-(const Element& x, const Element& y) {
    require_same(x, y, "-");
    return make(x.coeffs - y.coeffs, x.side);
}

Element operator*(cplx c, const Element& x) { return make(c * x.coeffs, x.side); }

CanonicalBialgebra::CanonicalBialgebra(FusionData fd) : fd_(std::move(fd)) {
    auto rep = verify_axioms(fd_);
    if (!rep.all_pass()) {
        for (const auto& c : rep.checks)
            if (!c.pass) throw Error(Error::Code::Validation, fmt::format("axiom {} fails", c.name));
    }
    d_ = fd_.fp_dims();
    mu_ = 0;
    for (double x : d_) mu_ += x * x;
    commutative_ = is_commutative(fd_);
    for (int j = 0; j < fd_.rank(); ++j) L_.push_back(regular_matrix(fd_, j));
}

CanonicalBialgebra canonical_from_fusion_data(const FusionData& fd) { return CanonicalBialgebra(fd); }

Element basis_element(const CanonicalBialgebra& b, int j, Side side) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(b.rank());
    c[j] = 1.0;
    return make(c, side);
}

Element unit(const CanonicalBialgebra& b, Side side) {
    if (side == Side::B) return basis_element(b, 0, Side::B);
    Eigen::VectorXcd c(b.rank());
    for (int j = 0; j < b.rank(); ++j) c[j] = b.dims()[j];
    return make(c, Side::A);
}

Element minimal_projection(const CanonicalBialgebra& b, int j) { return cplx(b.dims()[j]) * basis_element(b, j, Side::A); }

Element fourier(const CanonicalBialgebra&, const Element& x) {
    require_side(x, Side::A, "fourier");
    return make(x.coeffs, Side::B);
}

Element fourier_inv(const CanonicalBialgebra&, const Element& y) {
    require_side(y, Side::B, "fourier_inv");
    return make(y.coeffs, Side::A);
}

Element adjoint(const CanonicalBialgebra& b, const Element& x) {
    if (x.side == Side::A) return make(x.coeffs.conjugate(), Side::A);
    Eigen::VectorXcd c(x.rank());
    for (int j = 0; j < x.rank(); ++j) c[b.fusion().dual(j)] = std::conj(x.coeffs[j]);
    return make(c, Side::B);
}

Element fourier_tilde(const CanonicalBialgebra& b, const Element& y) {
    require_side(y, Side::B, "fourier_tilde");
    return adjoint(b, fourier_inv(b, adjoint(b, y)));
}

Element fourier_tilde_inv(const CanonicalBialgebra& b, const Element& x) {
    require_side(x, Side::A, "fourier_tilde_inv");
    return adjoint(b, fourier(b, adjoint(b, x)));
}

Element modular_J(const CanonicalBialgebra& b, const Element& x) {
    require_side(x, Side::A, "J");
    return fourier_inv(b, adjoint(b, fourier(b, x)));
}

Element modular_J_B(const CanonicalBialgebra& b, const Element& y) {
    require_side(y, Side::B, "J_B");
    return fourier_tilde_inv(b, adjoint(b, fourier_tilde(b, y)));
}

Element mult(const CanonicalBialgebra& b, const Element& x, const Element& y) {
    require_same(x, y, "mult");
    if (x.side == Side::B) return make(fusion_product(b.fusion(), x.coeffs, y.coeffs), Side::B);
    Eigen::VectorXcd c(x.rank());
    for (int j = 0; j < x.rank(); ++j) c[j] = x.coeffs[j] * y.coeffs[j] / b.dims()[j];
    return make(c, Side::A);
}

Element conv(const CanonicalBialgebra& b, const Element& x, const Element& y) {
    require_same(x, y, "conv");
    if (x.side == Side::A) return fourier_inv(b, mult(b, fourier(b, x), fourier(b, y)));
    Element inner = mult(b, fourier_inv(b, adjoint(b, y)), fourier_inv(b, adjoint(b, x)));
    return adjoint(b, fourier(b, inner));
}

cplx trace(const CanonicalBialgebra& b, const Element& x) {
    if (x.side == Side::B) return x.coeffs[0];
    cplx t = 0;
    for (int j = 0; j < x.rank(); ++j) t += x.coeffs[j] * b.dims()[j];
    return t;
}

Eigen::MatrixXcd regular_rep(const CanonicalBialgebra& b, const Element& y) {
    require_side(y, Side::B, "regular_rep");
    const int m = b.rank();
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(m, m);
    for (int j = 0; j < m; ++j)
        if (y.coeffs[j] != 0.0) L += y.coeffs[j] * b.left_matrix(j).cast<cplx>();
    return L;
}

Spectrum spectrum(const CanonicalBialgebra& b, const Element& x) {
    const int m = x.rank();
    Spectrum s;
    if (x.side == Side::A) {
        // x = sum c_j e_j with c_j = lambda_j / d_j, d(e_j) = d_j^2
        for (int j = 0; j < m; ++j) {
            s.values.push_back(std::norm(x.coeffs[j] / b.dims()[j]));
            s.weights.push_back(b.dims()[j] * b.dims()[j]);
        }
        return s;
    }
    Eigen::MatrixXcd L = regular_rep(b, x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(L.adjoint() * L);
    for (int i = 0; i < m; ++i) {
        s.values.push_back(std::max(0.0, es.eigenvalues()[i]));
        s.weights.push_back(std::norm(es.eigenvectors()(0, i)));
    }
    return s;
}

double norm(const Spectrum& s, double p) {
    if (!(p >= 1)) throw Error(Error::Code::BadExponent, fmt::format("exponent {} is below 1", p));
    if (std::isinf(p)) {
        double mx = 0;
        for (std::size_t i = 0; i < s.values.size(); ++i)
            if (s.weights[i] > 0) mx = std::max(mx, s.values[i]);
        return std::sqrt(mx);
    }
    double t = 0;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        if (s.values[i] > 0) t += s.weights[i] * std::pow(s.values[i], p / 2);
    return std::pow(t, 1 / p);
}

double norm(const CanonicalBialgebra& b, const Element& x, double p) { return norm(spectrum(b, x), p); }

namespace {

double support_of(const Spectrum& s, double rel_tol) {
    double mx = *std::max_element(s.values.begin(), s.values.end());
    double cut = rel_tol * rel_tol * mx;  // values are squared singular values
    double t = 0;
    if (mx <= 0) return 0;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        if (s.values[i] > cut) t += s.weights[i];
    return t;
}

}  // namespace

double support(const CanonicalBialgebra& b, const Element& x, double rel_tol) {
    return support_of(spectrum(b, x), rel_tol);
}

Element range_projection(const CanonicalBialgebra& b, const Element& x, double rel_tol) {
    const int m = x.rank();
    if (x.side == Side::A) {
        double mx = 0;
        for (int j = 0; j < m; ++j) mx = std::max(mx, std::abs(x.coeffs[j]) / b.dims()[j]);
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(m);
        for (int j = 0; j < m; ++j)
            if (mx > 0 && std::abs(x.coeffs[j]) / b.dims()[j] > rel_tol * mx) c[j] = b.dims()[j];
        return make(c, Side::A);
    }
    Eigen::MatrixXcd L = regular_rep(b, x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(L * L.adjoint());
    double mx = es.eigenvalues().maxCoeff();
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i)
        if (mx > 0 && es.eigenvalues()[i] > rel_tol * rel_tol * mx)
            P += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    // pi(P) x_1 is the coefficient vector of P
    return make(P.col(0), Side::B);
}

double entropy(const Spectrum& s) {
    double h = 0;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        if (s.values[i] > 0) h -= s.weights[i] * s.values[i] * std::log(s.values[i]);
    return h;
}

double entropy(const CanonicalBialgebra& b, const Element& x) { return entropy(spectrum(b, x)); }

double renyi_entropy(const Spectrum& s, double alpha) {
    if (std::abs(alpha - 1) < 1e-12) return entropy(s);
    if (std::isinf(alpha)) {
        double mx = 0;
        for (std::size_t i = 0; i < s.values.size(); ++i)
            if (s.weights[i] > 0) mx = std::max(mx, s.values[i]);
        return -std::log(mx);
    }
    double t = 0;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        if (s.values[i] > 0) t += s.weights[i] * std::pow(s.values[i], alpha);
    return std::log(t) / (1 - alpha);
}

double K_bound(double mu, double u, double v) {
    const double e = 1e-12;
    double k = INF;
    if (v <= 0.5 + e && u + v <= 1 + e) k = std::min(k, 1.0);
    if (u <= 0.5 + e && v >= 0.5 - e) k = std::min(k, std::pow(mu, v - 0.5));
    if (u >= 0.5 - e && u + v >= 1 - e) k = std::min(k, std::pow(mu, u + v - 1));
    return k;
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// ---- inequality suite ----

const InequalityResult& SuiteReport::get(const std::string& name) const {
    for (const auto& r : results)
        if (r.name == name) return r;
    throw Error(Error::Code::Usage, fmt::format("no inequality named {}", name));
}

int SuiteReport::theorem_violations() const {
    int n = 0;
    for (const auto& r : results)
        if (r.theorem && r.violated) ++n;
    return n;
}

nlohmann::json SuiteReport::to_json() const {
    nlohmann::json j;
    j["samples"] = options.samples;
    j["seed"] = options.seed;
    j["tolerance"] = options.tol;
    auto arr = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json e;
        e["name"] = r.name;
        e["kind"] = r.theorem ? "theorem" : "falsifier";
        e["worst_slack"] = r.worst_slack;
        e["worst_sample"] = r.worst_sample;
        e["worst_seed"] = r.worst_seed;
        auto ex = nlohmann::json::array();
        for (double x : r.exponents) ex.push_back(std::isinf(x) ? nlohmann::json("inf") : nlohmann::json(x));
        e["exponents"] = ex;
        e["variant"] = r.variant;
        e["evaluations"] = r.evaluations;
        e["violated"] = r.violated;
        if (r.witness) {
            auto enc = [](const Eigen::VectorXcd& v) {
                auto a = nlohmann::json::array();
                for (int i = 0; i < v.size(); ++i) a.push_back({v[i].real(), v[i].imag()});
                return a;
            };
            e["witness"] = {{"x", enc((*r.witness)[0])}, {"y", enc((*r.witness)[1])}};
        }
        arr.push_back(e);
    }
    j["inequalities"] = arr;
    return j;
}

namespace {

const char* const kNames[] = {"hausdorff_young", "norm_bounds_K", "donoho_stark", "hirschman_beckner",
                              "renyi", "young_A", "conv_norm_identity", "sumset",
                              "dual_young_falsify", "dual_young_positive"};
constexpr int kCount = 10;
enum { HY, KB, DS, HB, RE, YA, CN, SS, DYF, DYP };

struct Acc {
    std::array<InequalityResult, kCount> r;
    Acc() {
        for (int i = 0; i < kCount; ++i) {
            r[i].name = kNames[i];
            r[i].theorem = i != DYF;
        }
    }
    void update(int k, double slack, long sample, std::uint64_t seed, std::vector<double> ex,
                const char* variant, const Element* x = nullptr, const Element* y = nullptr) {
        auto& a = r[k];
        ++a.evaluations;
        if (slack < a.worst_slack || (slack == a.worst_slack && sample < a.worst_sample)) {
            a.worst_slack = slack;
            a.worst_sample = sample;
            a.worst_seed = seed;
            a.exponents = std::move(ex);
            a.variant = variant;
            if (x && y) a.witness = std::array<Eigen::VectorXcd, 2>{x->coeffs, y->coeffs};
        }
    }
    void merge(const Acc& o) {
        for (int k = 0; k < kCount; ++k) {
            auto& a = r[k];
            const auto& b = o.r[k];
            long ev = a.evaluations + b.evaluations;
            if (b.worst_slack < a.worst_slack || (b.worst_slack == a.worst_slack && b.worst_sample < a.worst_sample)) a = b;
            a.evaluations = ev;
        }
    }
};

double rel(double rhs, double lhs) { return (rhs - lhs) / std::max(std::abs(rhs), 1e-300); }

double inv_to_exp(double u) { return u <= 0 ? INF : 1 / u; }

struct Sampler {
    const CanonicalBialgebra& b;
    std::mt19937_64 rng;
    std::normal_distribution<double> g{0.0, 1.0};
    std::uniform_real_distribution<double> U{0.0, 1.0};
    const std::vector<Element>* dual_proj;

    Eigen::VectorXcd gauss(bool real) {
        Eigen::VectorXcd v(b.rank());
        for (int i = 0; i < b.rank(); ++i) v[i] = real ? cplx(g(rng), 0) : cplx(g(rng), g(rng));
        return v;
    }

    Eigen::VectorXcd draw(int kind, Side side) {
        const int m = b.rank();
        Eigen::VectorXcd v = gauss(false);
        switch (kind % 6) {
        case 0: break;
        case 1: {
            bool any = false;
            for (int i = 0; i < m; ++i) {
                if (U(rng) < 0.4) any = true;
                else v[i] = 0;
            }
            if (!any) v[std::uniform_int_distribution<int>(0, m - 1)(rng)] = 1.0;
            break;
        }
        case 2: v = v.cwiseAbs().cast<cplx>(); break;
        case 3: {
            v.setZero();
            int j = std::uniform_int_distribution<int>(0, m - 1)(rng);
            v[j] = side == Side::A ? b.dims()[j] : 1.0;
            break;
        }
        case 4: {
            if (side == Side::B && dual_proj && !dual_proj->empty()) {
                v.setZero();
                for (const auto& p : *dual_proj)
                    if (U(rng) < 0.5) v += cplx(g(rng), 0) * p.coeffs;
                if (v.norm() == 0) v = (*dual_proj)[0].coeffs;
            } else {
                v.setZero();
                for (int j = 0; j < m; ++j)
                    if (j == 0 || U(rng) < 0.3) v[j] = b.dims()[j];
            }
            break;
        }
        default: v = gauss(true); break;
        }
        return v;
    }
};

void run_sample(const CanonicalBialgebra& b, long i, std::uint64_t seed, const std::vector<Element>& dp, Acc& acc) {
    const double mu = b.mu();
    Sampler S{b, std::mt19937_64(seed), {}, {}, &dp};
    int kind = static_cast<int>(i % 6);
    Element x{S.draw(kind, Side::A), Side::A};
    Element y{S.draw(static_cast<int>((i / 6) % 6), Side::A), Side::A};
    Element z{S.draw(kind, Side::B), Side::B};
    Element w{S.draw(static_cast<int>((i / 6 + 1) % 6), Side::B), Side::B};
    if (x.coeffs.norm() == 0 || y.coeffs.norm() == 0 || z.coeffs.norm() == 0 || w.coeffs.norm() == 0) return;

    Element Fx = fourier(b, x), Ftz = fourier_tilde(b, z);
    Spectrum sx = spectrum(b, x), sFx = spectrum(b, Fx), sz = spectrum(b, z), sFtz = spectrum(b, Ftz);
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);

    for (double u : grid) {
        if (u < 0.5) continue;
        double p = inv_to_exp(u), q = inv_to_exp(1 - u);
        acc.update(HY, rel(norm(sx, p), norm(sFx, q)), i, seed, {p, q}, "A->B");
        acc.update(HY, rel(norm(sz, p), norm(sFtz, q)), i, seed, {p, q}, "B->A");
    }
    for (double u : grid)
        for (double v : grid) {
            double K = K_bound(mu, u, v);
            acc.update(KB, rel(K * norm(sz, inv_to_exp(u)), norm(sFtz, inv_to_exp(v))), i, seed,
                       {inv_to_exp(u), inv_to_exp(v)}, "upper");
        }

    acc.update(DS, support_of(sx, 1e-8) * support_of(sFx, 1e-8) - 1, i, seed, {}, "A");
    acc.update(DS, support_of(sz, 1e-8) * support_of(sFtz, 1e-8) - 1, i, seed, {}, "B");

    // entropic checks on normalized inputs, HB also at a random scale
    {
        double r = std::exp(2 * S.U(S.rng) - 1);
        Element xs = cplx(r / norm(sx, 2)) * x;
        Spectrum a = spectrum(b, xs), fa = spectrum(b, fourier(b, xs));
        double n2 = norm(a, 2);
        double lhs = entropy(a) + entropy(fa), rhs = -4 * n2 * n2 * std::log(n2);
        acc.update(HB, (lhs - rhs) / std::max(1.0, n2 * n2), i, seed, {}, "A");
        Element zs = cplx(r / norm(sz, 2)) * z;
        Spectrum c = spectrum(b, zs), fc = spectrum(b, fourier_tilde(b, zs));
        double m2 = norm(c, 2);
        lhs = entropy(c) + entropy(fc);
        rhs = -4 * m2 * m2 * std::log(m2);
        acc.update(HB, (lhs - rhs) / std::max(1.0, m2 * m2), i, seed, {}, "B");

        Element xn = cplx(1 / norm(sx, 2)) * x;
        Spectrum n = spectrum(b, xn), fn = spectrum(b, fourier(b, xn));
        for (double u : grid)
            for (double v : grid) {
                // u = 1/t, v = 1/s; H_{t/2} with t/2 = 1/(2u)
                double t1 = std::abs(u - 0.5) < 1e-12 ? 0.0 : (u - 0.5) * renyi_entropy(fn, u == 0 ? INF : 1 / (2 * u));
                double t2 = std::abs(v - 0.5) < 1e-12 ? 0.0 : (0.5 - v) * renyi_entropy(n, v == 0 ? INF : 1 / (2 * v));
                acc.update(RE, t1 + t2 + std::log(K_bound(mu, u, v)), i, seed, {inv_to_exp(u), inv_to_exp(v)}, "A");
            }
    }

    {
        Element xy = conv(b, x, y);
        Spectrum sy = spectrum(b, y), sxy = spectrum(b, xy);
        for (double u : grid)
            for (double v : grid) {
                double wv = u + v - 1;
                if (wv < -1e-12) continue;
                wv = std::max(0.0, wv);
                acc.update(YA, rel(norm(sx, inv_to_exp(u)) * norm(sy, inv_to_exp(v)), norm(sxy, inv_to_exp(wv))), i, seed,
                           {inv_to_exp(u), inv_to_exp(v), inv_to_exp(wv)}, "A");
            }
        Element xp{x.coeffs.cwiseAbs().cast<cplx>(), Side::A}, yp{y.coeffs.cwiseAbs().cast<cplx>(), Side::A};
        double l = norm(b, conv(b, xp, yp), 1), rr = norm(b, xp, 1) * norm(b, yp, 1);
        acc.update(CN, -std::abs(l - rr) / rr, i, seed, {1, 1, 1}, "positive");

        Element Rx = range_projection(b, x), Ry = range_projection(b, y);
        double lhs = support(b, conv(b, Rx, Ry)), rhs = std::max(support_of(sx, 1e-8), support_of(sy, 1e-8));
        acc.update(SS, rel(lhs, rhs), i, seed, {}, "A");
    }

    {
        Element zw = conv(b, z, w);
        acc.update(DYF, rel(norm(b, z, INF) * norm(b, w, 1), norm(b, zw, INF)), i, seed, {INF, 1}, "random", &z, &w);
        Element zp{z.coeffs.cwiseAbs().cast<cplx>(), Side::B};
        acc.update(DYP, rel(norm(b, zp, INF) * norm(b, w, 1), norm(b, conv(b, zp, w), INF)), i, seed, {INF, 1},
                   "positive");
    }
}

// sign combinations of minimal projections of a commutative B against each projection
void targeted_dual_young(const CanonicalBialgebra& b, const std::vector<Element>& dp, Acc& acc) {
    const int m = static_cast<int>(dp.size());
    if (m == 0) return;
    std::vector<std::uint32_t> masks;
    if (m <= 10) {
        for (std::uint32_t s = 0; s < (1u << m); ++s) masks.push_back(s);
    } else {
        std::mt19937_64 rng(99);
        for (int k = 0; k < 1024; ++k) masks.push_back(static_cast<std::uint32_t>(rng()));
    }
    long idx = -1;
    for (auto s : masks)
        for (int j = 0; j < m; ++j, --idx) {
            Element z{Eigen::VectorXcd::Zero(b.rank()), Side::B};
            for (int i = 0; i < m; ++i) z.coeffs += ((s >> i) & 1 ? -1.0 : 1.0) * dp[i].coeffs;
            const Element& w = dp[j];
            double lhs = norm(b, conv(b, z, w), INF), rhs = norm(b, z, INF) * norm(b, w, 1);
            acc.update(DYF, rel(rhs, lhs), idx, 0, {INF, 1}, "projections", &z, &w);
        }
}

}  // namespace

SuiteReport inequality_suite(const CanonicalBialgebra& b, const SuiteOptions& opt) {
    std::vector<Element> dp;
    if (b.commutative()) {
        try {
            for (auto& p : dual_projections(b.fusion(), character_table(b.fusion())))
                dp.push_back(Element{p.coeffs, Side::B});
        } catch (const Error&) {
        }
    }
    Acc total;
    targeted_dual_young(b, dp, total);
    int T = std::max(1, opt.threads);
    std::vector<Acc> parts(T);
    auto work = [&](int t) {
        long lo = opt.samples * t / T, hi = opt.samples * (t + 1) / T;
        for (long i = lo; i < hi; ++i) run_sample(b, i, sample_seed(opt.seed, i), dp, parts[t]);
    };
    if (T == 1) {
        work(0);
    } else {
        std::vector<std::thread> th;
        for (int t = 0; t < T; ++t) th.emplace_back(work, t);
        for (auto& x : th) x.join();
    }
    for (const auto& p : parts) total.merge(p);
    SuiteReport rep;
    rep.options = opt;
    for (auto& r : total.r) {
        r.violated = r.worst_slack < -opt.tol;
        rep.results.push_back(r);
    }
    return rep;
}

// ---- parametrized families ----

namespace {

CanonicalBialgebra from_matrices(const std::vector<Matrix>& M) {
    auto fd = new_fusion_data(M, Mode::Float);
    auto rep = verify_axioms(fd, 1e-8);
    if (!rep.all_pass()) throw Error(Error::Code::InfeasibleParams, "family parameters give an invalid fusion algebra");
    return CanonicalBialgebra(fd);
}

// nonnegativity with a relative slack, clamped to zero
double nonneg(double v, double scale, const char* what) {
    if (v < -1e-9 * std::max(1.0, scale)) throw Error(Error::Code::InfeasibleParams, fmt::format("{} = {} < 0", what, v));
    return std::max(v, 0.0);
}

}  // namespace

CanonicalBialgebra rank2_family(double mu) {
    if (!(mu >= 2)) throw Error(Error::Code::InfeasibleParams, fmt::format("rank 2 needs mu >= 2, got {}", mu));
    double d = std::sqrt(mu - 1);
    double c = (d * d - 1) / d;
    return from_matrices({{{1, 0}, {0, 1}}, {{0, 1}, {1, c}}});
}

CanonicalBialgebra rank3_type1(const Rank3Type1Params& p) {
    double d2 = p.d2, d3 = p.d3, a = p.a, b = p.b();
    if (!(d2 >= 1 && d3 >= 1 && a >= 0 && a <= 1))
        throw Error(Error::Code::InfeasibleParams, fmt::format("need d2, d3 >= 1 and 0 <= a <= 1 (d2={}, d3={}, a={})", d2, d3, a));
    double s = std::max(d2 * d2, d3 * d3);
    double c22 = nonneg(d2 * d2 - 1 - a * d3 * d3, s, "d2^2-1-a d3^2") / d2;
    double c33 = nonneg(d3 * d3 - 1 - b * d2 * d2, s, "d3^2-1-b d2^2") / d3;
    std::vector<double> n22{1, c22, a * d3}, n23{0, a * d3, b * d2}, n33{1, b * d2, c33};
    return from_matrices({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                          {{0, 1, 0}, n22, n23},
                          {{0, 0, 1}, n23, n33}});
}

CanonicalBialgebra rank3_type2(double mu) {
    if (!(mu >= 3)) throw Error(Error::Code::InfeasibleParams, fmt::format("rank 3 type II needs mu >= 3, got {}", mu));
    double d = std::sqrt((mu - 1) / 2);
    double al = (d * d - 1) / (2 * d), be = (d * d + 1) / (2 * d);
    std::vector<double> n22{0, al, be}, n23{1, al, al}, n33{0, be, al};
    return from_matrices({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                          {{0, 1, 0}, n22, n23},
                          {{0, 0, 1}, n23, n33}});
}

FusionData rank3_mnq_ring(double m, double n, double q, Mode mode) {
    if (!(n > 0)) throw Error(Error::Code::InfeasibleParams, "need n > 0");
    double p = (m * m + n * n - 1 - m * q) / n;
    if (p < -1e-12) throw Error(Error::Code::InfeasibleParams, fmt::format("p = {} < 0", p));
    p = std::max(p, 0.0);
    if (mode == Mode::Exact) p = std::round(p);
    return new_fusion_data({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                            {{0, 1, 0}, {1, p, m}, {0, m, n}},
                            {{0, 0, 1}, {0, m, n}, {1, n, q}}},
                           mode);
}

Rank3Type1Params rank3_params_from_mnq(double m, double n, double q) {
    auto fd = rank3_mnq_ring(m, n, q);
    const auto& d = fd.fp_dims();
    // x2 x3 = m x2 + n x3 = a d3 x2 + b d2 x3
    return Rank3Type1Params{d[1], d[2], m / d[2]};
}

Rank3DualData rank3_dual_data(const Rank3Type1Params& p) {
    auto bi = rank3_type1(p);
    double d2 = p.d2, d3 = p.d3, a = p.a, b = p.b();
    double w1 = a * d3 * d3 - b * d2 * d2 + 1, w2 = -b * d2 * d2;
    double disc = w1 * w1 - 4 * w2;
    if (disc <= 1e-12 * (1 + w1 * w1))
        throw Error(Error::Code::DegenerateSpectrum, "lambda2 = lambda3: the dual projections coincide");
    double sq = std::sqrt(disc);
    // stable pair: the root away from cancellation first
    double big = w1 >= 0 ? (w1 + sq) / 2 : (w1 - sq) / 2;
    double other = big != 0 ? w2 / big : 0.0;
    Rank3DualData r;
    r.lambda2 = std::min(big, other);
    r.lambda3 = std::max(big, other);
    auto nu = [&](double l) { return 1 + l * l / (d2 * d2) + (1 - l) * (1 - l) / (d3 * d3); };
    r.nu2 = nu(r.lambda2);
    r.nu3 = nu(r.lambda3);
    const double mu = 1 + d2 * d2 + d3 * d3;
    auto vec = [](double a0, double a1, double a2) {
        Eigen::VectorXcd v(3);
        v << a0, a1, a2;
        return v;
    };
    r.Q[0] = Element{vec(1, d2, d3) / mu, Side::B};
    r.Q[1] = Element{vec(1, -r.lambda2 / d2, -(1 - r.lambda2) / d3) / r.nu2, Side::B};
    r.Q[2] = Element{vec(1, -r.lambda3 / d2, -(1 - r.lambda3) / d3) / r.nu3, Side::B};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Element pr = mult(bi, r.Q[i], r.Q[j]);
            Eigen::VectorXcd want = i == j ? r.Q[i].coeffs : Eigen::VectorXcd::Zero(3);
            double scale = std::max(r.Q[i].coeffs.norm(), r.Q[j].coeffs.norm());
            if ((pr.coeffs - want).norm() > 1e-8 * std::max(scale, 1.0) * (1 + d2 + d3))
                throw Error(Error::Code::NormalizationFailure,
                            fmt::format("Q_{} Q_{} check failed (residual {:.3g})", i + 1, j + 1, (pr.coeffs - want).norm()));
        }
    return r;
}

Rank3DualSchur rank3_dual_schur(const Rank3Type1Params& p) {
    auto bi = rank3_type1(p);
    auto dd = rank3_dual_data(p);
    std::array<Element, 3> F;
    for (int i = 0; i < 3; ++i) F[i] = fourier_inv(bi, dd.Q[i]);
    Rank3DualSchur r;
    double worst_rel = INF;
    // the Q_i differ in scale by orders of magnitude; judge each triple against its own term sizes
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            for (int k = j; k < 3; ++k) {
                double v = trace(bi, mult(bi, mult(bi, F[i], F[j]), F[k])).real();
                double scale = 0;
                for (int s = 0; s < 3; ++s)
                    scale += std::abs(F[i].coeffs[s] * F[j].coeffs[s] * F[k].coeffs[s]) / bi.dims()[s];
                double relv = scale > 0 ? v / scale : 0.0;
                if (relv < worst_rel) {
                    worst_rel = relv;
                    r.min_value = v;
                    r.worst = {i, j, k};
                    r.tolerance = 1e-9 * scale;
                }
            }
    r.holds = r.min_value >= -r.tolerance;
    return r;
}

std::vector<Biprojection> biprojections(const CanonicalBialgebra& b) {
    const int m = b.rank();
    std::vector<std::vector<int>> sets{{0}};
    for (auto& s : proper_subrings(b.fusion())) sets.push_back(s);
    if (m > 1) {
        std::vector<int> all(m);
        for (int j = 0; j < m; ++j) all[j] = j;
        sets.push_back(all);
    }
    std::vector<Biprojection> out;
    for (auto& s : sets) {
        Biprojection bp;
        bp.indices = s;
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(m);
        for (int j : s) {
            c[j] = b.dims()[j];
            bp.mu_sub += b.dims()[j] * b.dims()[j];
        }
        bp.projection = Element{c, Side::A};
        // projection in A, and F(P)^2 = mu_sub F(P) with F(P) self-adjoint
        const auto& P = bp.projection;
        Element F = fourier(b, P);
        double tol = 1e-9 * (1 + b.mu());
        bool ok = (mult(b, P, P).coeffs - P.coeffs).norm() <= tol && (adjoint(b, P).coeffs - P.coeffs).norm() <= tol &&
                  (mult(b, F, F).coeffs - bp.mu_sub * F.coeffs).norm() <= tol * b.mu() &&
                  (adjoint(b, F).coeffs - F.coeffs).norm() <= tol;
        if (!ok) throw Error(Error::Code::Validation, "subring projection is not a biprojection");
        out.push_back(std::move(bp));
    }
    return out;
}

}  // namespace fusion

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <json.hpp>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fusion/ring.hpp"
#include "fusion/spectral.hpp"

namespace fusion {

enum class Side { A, B };

const char* side_name(Side s);

// coefficients over the shared basis x_1..x_m; side says which algebra reads them
struct Element {
    Eigen::VectorXcd coeffs;
    Side side = Side::A;
    int rank() const { return static_cast<int>(coeffs.size()); }
};

Element operator+(const Element& x, const Element& y);
Element operator-(const Element& x, const Element& y);
Element operator*(cplx c, const Element& x);

class CanonicalBialgebra {
public:
    explicit CanonicalBialgebra(FusionData fd);

    const FusionData& fusion() const { return fd_; }
    int rank() const { return fd_.rank(); }
    const std::vector<double>& dims() const { return d_; }
    double mu() const { return mu_; }
    bool commutative() const { return commutative_; }
    // left regular matrix of x_j, column convention: L(s, k) = N_{j,k}^s
    const Eigen::MatrixXd& left_matrix(int j) const { return L_[j]; }

private:
    FusionData fd_;
    std::vector<double> d_;
    double mu_ = 0;
    bool commutative_ = true;
    std::vector<Eigen::MatrixXd> L_;
};

CanonicalBialgebra canonical_from_fusion_data(const FusionData& fd);

Element basis_element(const CanonicalBialgebra& b, int j, Side side);
Element unit(const CanonicalBialgebra& b, Side side);
// e_j = d_j x_j, the minimal projections of A
Element minimal_projection(const CanonicalBialgebra& b, int j);

Element fourier(const CanonicalBialgebra& b, const Element& x);
Element fourier_inv(const CanonicalBialgebra& b, const Element& y);
Element fourier_tilde(const CanonicalBialgebra& b, const Element& y);
Element fourier_tilde_inv(const CanonicalBialgebra& b, const Element& x);

// # on A, * on B
Element adjoint(const CanonicalBialgebra& b, const Element& x);
Element modular_J(const CanonicalBialgebra& b, const Element& x);
Element modular_J_B(const CanonicalBialgebra& b, const Element& y);

Element mult(const CanonicalBialgebra& b, const Element& x, const Element& y);
// A: F^{-1}(F(x)F(y)); B: (F(F^{-1}(y^*) <> F^{-1}(x^*)))^*
Element conv(const CanonicalBialgebra& b, const Element& x, const Element& y);

// d on A, tau on B
cplx trace(const CanonicalBialgebra& b, const Element& x);

// pi_B(y) in the column convention
Eigen::MatrixXcd regular_rep(const CanonicalBialgebra& b, const Element& y);

// eigenvalues of |x|^2 with their trace weights: trace(f(|x|^2)) = sum w_i f(s_i)
struct Spectrum {
    std::vector<double> values;
    std::vector<double> weights;
};
Spectrum spectrum(const CanonicalBialgebra& b, const Element& x);

constexpr double inf_exponent = std::numeric_limits<double>::infinity();

double norm(const CanonicalBialgebra& b, const Element& x, double p);
double norm(const Spectrum& s, double p);

double support(const CanonicalBialgebra& b, const Element& x, double rel_tol = 1e-8);
Element range_projection(const CanonicalBialgebra& b, const Element& x, double rel_tol = 1e-8);

// von Neumann entropy H(|x|^2)
double entropy(const CanonicalBialgebra& b, const Element& x);
double entropy(const Spectrum& s);
// Renyi entropy of |x|^2 in the standard form (1/(1-a)) log trace(|x|^{2a}); a = 1 is von Neumann
double renyi_entropy(const Spectrum& s, double alpha);

// Fourier norm constant on [0,1]^2 for (1/p, 1/q)
double K_bound(double mu, double inv_p, double inv_q);

struct InequalityResult {
    std::string name;
    bool theorem = true;  // false: the check is a falsifier, violations are findings
    double worst_slack = std::numeric_limits<double>::infinity();
    long worst_sample = -1;
    std::uint64_t worst_seed = 0;
    std::vector<double> exponents;
    std::string variant;
    long evaluations = 0;
    bool violated = false;
    std::optional<std::array<Eigen::VectorXcd, 2>> witness;
};

struct SuiteOptions {
    long samples = 1000;
    std::uint64_t seed = 1;
    double tol = 1e-8;
    int threads = 1;
};

struct SuiteReport {
    std::vector<InequalityResult> results;
    SuiteOptions options;
    const InequalityResult& get(const std::string& name) const;
    int theorem_violations() const;
    nlohmann::json to_json() const;
};

SuiteReport inequality_suite(const CanonicalBialgebra& b, const SuiteOptions& opt = {});

// splitmix64 step, used to derive per-sample seeds
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index);

CanonicalBialgebra rank2_family(double mu);

struct Rank3Type1Params {
    double d2 = 1, d3 = 1, a = 0;
    double b() const { return 1 - a; }
};

CanonicalBialgebra rank3_type1(const Rank3Type1Params& p);
CanonicalBialgebra rank3_type2(double mu);
// integer ring x2x2 = x1 + p x2 + m x3, x2x3 = m x2 + n x3, x3x3 = x1 + n x2 + q x3
FusionData rank3_mnq_ring(double m, double n, double q, Mode mode = Mode::Float);
Rank3Type1Params rank3_params_from_mnq(double m, double n, double q);

struct Rank3DualData {
    double lambda2 = 0, lambda3 = 0;  // lambda2 <= lambda3
    double nu2 = 0, nu3 = 0;
    std::array<Element, 3> Q;
};

Rank3DualData rank3_dual_data(const Rank3Type1Params& p);

struct Rank3DualSchur {
    double min_value = 0;  // value at the triple most negative relative to its term sizes
    bool holds = true;
    std::array<int, 3> worst{0, 0, 0};
    double tolerance = 0;
};

// d(F^{-1}(Q_i) <> F^{-1}(Q_j) <> F^{-1}(Q_k)) over all triples
Rank3DualSchur rank3_dual_schur(const Rank3Type1Params& p);

struct Biprojection {
    std::vector<int> indices;
    Element projection;  // side A
    double mu_sub = 0;
};

std::vector<Biprojection> biprojections(const CanonicalBialgebra& b);

}  // namespace fusion

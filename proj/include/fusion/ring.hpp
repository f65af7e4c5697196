#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fusion {

// Indices are 0-based internally; index 0 is the unit. The text formats are 1-based.

class Error : public std::runtime_error {
public:
    enum class Code {
        NonSquare,
        NegativeEntry,
        NoUnit,
        NoDuality,
        BadInvolution,
        NotInteger,
        ConvergenceFailure,
        RankTooLarge,
        NotIntegral,
        NotCommutative,
        DegenerateSpectrum,
        NormalizationFailure,
        InfeasibleParams,
        SideMismatch,
        BadExponent,
        UnboundedSearch,
        Timeout,
        Parse,
        Validation,
        Usage,
    };
    Error(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
    Code code;
};

const char* code_name(Error::Code c);

enum class Mode { Exact, Float };

using Matrix = std::vector<std::vector<double>>;

class FusionData {
public:
    FusionData() = default;

    int rank() const { return m_; }
    bool exact() const { return exact_; }
    const std::vector<int>& dual() const { return dual_; }
    int dual(int j) const { return dual_[j]; }
    const std::string& label() const { return label_; }
    void set_label(std::string s) { label_ = std::move(s); }

    double N(int j, int k, int s) const { return t_[idx(j, k, s)]; }
    // only valid in exact mode
    std::int64_t NI(int j, int k, int s) const { return it_[idx(j, k, s)]; }
    const std::vector<double>& tensor() const { return t_; }
    const std::vector<std::int64_t>& itensor() const { return it_; }

    // left multiplication matrix of x_j: entry (k, s) = N_{j,k}^s
    Matrix fusion_matrix(int j) const;

    const std::vector<double>& fp_dims() const;

    std::size_t idx(int j, int k, int s) const {
        return (static_cast<std::size_t>(j) * m_ + k) * m_ + s;
    }

    // Builds without validating axioms (for perturbation tests and search leaves).
    static FusionData from_tensor(int m, std::vector<double> t, std::vector<int> dual,
                                  Mode mode);

private:
    struct Cache {
        std::once_flag once;
        std::vector<double> dims;
    };

    int m_ = 0;
    bool exact_ = false;
    std::vector<double> t_;
    std::vector<std::int64_t> it_;
    std::vector<int> dual_;
    std::string label_;
    std::shared_ptr<Cache> cache_;
};

FusionData new_fusion_data(const std::vector<Matrix>& matrices, Mode mode);

struct AxiomCheck {
    std::string name;
    bool pass = true;
    std::vector<int> witness;  // 0-based
    double residual = 0.0;
};

struct VerificationReport {
    std::vector<AxiomCheck> checks;
    bool all_pass() const;
    const AxiomCheck& get(const std::string& name) const;
};

VerificationReport verify_axioms(const FusionData& fd, double tol = 1e-9);

// spectral radius of a nonnegative square matrix
double perron_root(const Matrix& M);

std::vector<double> fp_dimensions(const FusionData& fd);
double global_fpdim(const FusionData& fd);

struct TypeSignature {
    // (dimension, multiplicity), ascending
    std::vector<std::pair<double, int>> entries;
    bool integral = true;
    double fpdim() const;
    std::string str() const;
    std::vector<std::pair<std::int64_t, int>> integer_entries() const;
};

TypeSignature type_signature(const FusionData& fd, double integer_tol = 1e-6);
TypeSignature parse_type(const std::string& s);

std::vector<int> subring_closure(const FusionData& fd, const std::vector<int>& generators);
std::vector<std::vector<int>> proper_subrings(const FusionData& fd, int rank_cap = 16);

bool is_simple(const FusionData& fd);
bool is_perfect(const FusionData& fd, double tol = 1e-6);
bool is_integral(const FusionData& fd, double tol = 1e-6);
bool is_frobenius_type(const FusionData& fd, double tol = 1e-6);
bool is_commutative(const FusionData& fd, double tol = 1e-9);

// sigma with sigma[0] = 0 and N2(sigma j, sigma k, sigma s) = N1(j, k, s)
std::optional<std::vector<int>> are_isomorphic(const FusionData& a, const FusionData& b,
                                               int rank_cap = 12);

FusionData permute(const FusionData& fd, const std::vector<int>& sigma);

struct BoundCheck {
    std::string name;
    bool holds = true;
    double slack = 0.0;  // min of rhs - lhs
    std::vector<int> witness;
};

struct BoundsReport {
    BoundCheck b[4];
    bool all_hold() const { return b[0].holds && b[1].holds && b[2].holds && b[3].holds; }
};

BoundsReport coefficient_bounds_report(const FusionData& fd, double tol = 1e-9);
// checks the tensor against given dimensions instead of its own
BoundsReport coefficient_bounds_report(const FusionData& fd, const std::vector<double>& dims,
                                       double tol = 1e-9);

}  // namespace fusion

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "fusion/ring.hpp"

namespace fusion {

using cplx = std::complex<double>;

// Product in the fusion algebra: (sum a_j x_j)(sum b_k x_k) = sum a_j b_k N_{j,k}^s x_s.
Eigen::VectorXcd fusion_product(const FusionData& fd, const Eigen::VectorXcd& a,
                                const Eigen::VectorXcd& b);

// Left regular matrix of x_j acting on coefficient vectors (column convention).
Eigen::MatrixXd regular_matrix(const FusionData& fd, int j);

struct CharacterTable {
    Eigen::MatrixXcd lambda;        // lambda(i, j) = chi_j(x_i)
    Eigen::MatrixXcd eigenvectors;  // unit columns; column j is an eigenvector of every M_i
    std::vector<int> column_order;  // raw solver column placed at each position
    double residual = 0.0;
    int draws = 0;

    int rank() const { return static_cast<int>(lambda.rows()); }
    // column of the complex conjugate character
    int conjugate(int j, double tol = 1e-7) const;
};

struct SpectralOptions {
    double tol = 1e-8;
    std::uint64_t seed = 0x5eed;
    int redraws = 8;
};

CharacterTable character_table(const FusionData& fd, const SpectralOptions& opt = {});

// max over i, j of |M_i v_j - lambda_{i,j} v_j|
double verify_character_table(const FusionData& fd, const CharacterTable& ct);

struct DualProjection {
    int index = 0;
    Eigen::VectorXcd coeffs;
    cplx trace;            // tau(P_j), the x_1 coefficient
    double normalization;  // c_j with (sum_k chi_j(x_k) x_{k*})^2 = c_j (same)
};

std::vector<DualProjection> dual_projections(const FusionData& fd, const CharacterTable& ct,
                                             double tol = 1e-8);

// hat N_{j,k}^s, flat index (j*m + k)*m + s, real parts
std::vector<double> dual_fusion_coefficients(const FusionData& fd, const CharacterTable& ct,
                                             double tol = 1e-8);

}  // namespace fusion

#include "fusion/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <random>

namespace fusion {

Eigen::VectorXcd fusion_product(const FusionData& fd, const Eigen::VectorXcd& a,
                                const Eigen::VectorXcd& b) {
    const int m = fd.rank();
    Eigen::VectorXcd r = Eigen::VectorXcd::Zero(m);
    for (int j = 0; j < m; ++j) {
        if (a[j] == 0.0) continue;
        for (int k = 0; k < m; ++k) {
            cplx ab = a[j] * b[k];
            if (ab == 0.0) continue;
            for (int s = 0; s < m; ++s) {
                double n = fd.N(j, k, s);
                if (n != 0) r[s] += ab * n;
            }
        }
    }
    return r;
}

Eigen::MatrixXd regular_matrix(const FusionData& fd, int j) {
    const int m = fd.rank();
    Eigen::MatrixXd L(m, m);
    for (int k = 0; k < m; ++k)
        for (int s = 0; s < m; ++s) L(s, k) = fd.N(j, k, s);
    return L;
}

int CharacterTable::conjugate(int j, double tol) const {
    for (int c = 0; c < rank(); ++c)
        if ((lambda.col(c) - lambda.col(j).conjugate()).cwiseAbs().maxCoeff() <= tol) return c;
    return -1;
}

namespace {

// M_i in the row convention: entry (k, s) = N_{i,k}^s. Its eigenvectors are character vectors.
Eigen::MatrixXd row_matrix(const FusionData& fd, int i) { return regular_matrix(fd, i).transpose(); }

double column_residual(const std::vector<Eigen::MatrixXd>& M, const Eigen::MatrixXcd& lam,
                       const Eigen::MatrixXcd& V) {
    double r = 0;
    for (std::size_t i = 0; i < M.size(); ++i)
        for (int j = 0; j < V.cols(); ++j)
            r = std::max(r, (M[i].cast<cplx>() * V.col(j) - lam(i, j) * V.col(j)).norm());
    return r;
}

}  // namespace

double verify_character_table(const FusionData& fd, const CharacterTable& ct) {
    std::vector<Eigen::MatrixXd> M;
    for (int i = 0; i < fd.rank(); ++i) M.push_back(row_matrix(fd, i));
    return column_residual(M, ct.lambda, ct.eigenvectors);
}

CharacterTable character_table(const FusionData& fd, const SpectralOptions& opt) {
    if (!is_commutative(fd)) throw Error(Error::Code::NotCommutative, "character table needs a commutative ring");
    const int m = fd.rank();
    const auto& d = fd.fp_dims();
    std::vector<Eigen::MatrixXd> M;
    for (int i = 0; i < m; ++i) M.push_back(row_matrix(fd, i));
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double last = INFINITY;
    for (int draw = 1; draw <= opt.redraws; ++draw) {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            cplx g;
            do g = cplx(unif(rng), unif(rng));
            while (std::abs(g) > 1.0);
            A += g * M[i].cast<cplx>();
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
        if (es.info() != Eigen::Success) continue;
        Eigen::MatrixXcd V = es.eigenvectors();
        Eigen::MatrixXcd lam(m, m);
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) {
            Eigen::VectorXcd v = V.col(j);
            if (std::abs(v[0]) < 1e-10 * v.norm()) {
                ok = false;
                break;
            }
            v /= v[0];  // now v_k = chi(x_k)
            V.col(j) = v / v.norm();
            for (int i = 0; i < m; ++i) {
                Eigen::VectorXcd u = V.col(j);
                lam(i, j) = u.dot(M[i].cast<cplx>() * u);  // Rayleigh quotient, u unit
            }
        }
        if (!ok) continue;
        // the Perron column: all entries close to the FP dims
        int pf = -1;
        double best = INFINITY;
        for (int j = 0; j < m; ++j) {
            double dev = 0;
            for (int i = 0; i < m; ++i) dev = std::max(dev, std::abs(lam(i, j) - d[i]));
            if (dev < best) {
                best = dev;
                pf = j;
            }
        }
        if (best > 1e-6 * (1 + d[m - 1])) continue;
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        auto key = [&](int j) {
            std::vector<double> k;
            for (int i = 0; i < m; ++i) {
                k.push_back(-std::round(lam(i, j).real() * 1e6));
                k.push_back(-std::round(lam(i, j).imag() * 1e6));
            }
            return k;
        };
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if ((a == pf) != (b == pf)) return a == pf;
            return key(a) < key(b);
        });
        CharacterTable ct;
        ct.lambda.resize(m, m);
        ct.eigenvectors.resize(m, m);
        for (int j = 0; j < m; ++j) {
            ct.lambda.col(j) = lam.col(order[j]);
            ct.eigenvectors.col(j) = V.col(order[j]);
        }
        // exact values where the structure forces them
        for (int j = 0; j < m; ++j) ct.lambda(0, j) = 1.0;
        ct.column_order = order;
        ct.draws = draw;
        ct.residual = column_residual(M, ct.lambda, ct.eigenvectors);
        last = ct.residual;
        bool distinct = true;
        for (int a = 0; a < m && distinct; ++a)
            for (int b = a + 1; b < m && distinct; ++b)
                if ((ct.lambda.col(a) - ct.lambda.col(b)).cwiseAbs().maxCoeff() < 1e-6) distinct = false;
        if (distinct && ct.residual <= opt.tol * (1 + d[m - 1])) return ct;
    }
    throw Error(Error::Code::DegenerateSpectrum,
                fmt::format("simultaneous diagonalization failed after {} draws (residual {:.3g})", opt.redraws, last));
}

std::vector<DualProjection> dual_projections(const FusionData& fd, const CharacterTable& ct,
                                             double tol) {
    if (!is_commutative(fd)) throw Error(Error::Code::NotCommutative, "dual projections need a commutative ring");
    const int m = fd.rank();
    std::vector<DualProjection> out;
    Eigen::VectorXcd total = Eigen::VectorXcd::Zero(m);
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXcd p(m);
        for (int k = 0; k < m; ++k) p[fd.dual(k)] = ct.lambda(k, j);
        Eigen::VectorXcd p2 = fusion_product(fd, p, p);
        cplx c = p.dot(p2) / p.squaredNorm();
        if (std::abs(c) < tol || (p2 - c * p).norm() > tol * p2.norm())
            throw Error(Error::Code::NormalizationFailure, fmt::format("P_{} squared is not proportional to P_{}", j + 1, j + 1));
        DualProjection dp;
        dp.index = j;
        dp.coeffs = p / c;
        dp.trace = dp.coeffs[0];
        dp.normalization = c.real();
        total += dp.coeffs;
        out.push_back(std::move(dp));
    }
    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(m);
    unit[0] = 1.0;
    if ((total - unit).norm() > tol * m)
        throw Error(Error::Code::NormalizationFailure, "dual projections do not sum to the unit");
    return out;
}

std::vector<double> dual_fusion_coefficients(const FusionData& fd, const CharacterTable& ct,
                                             double tol) {
    const int m = fd.rank();
    const auto& d = fd.fp_dims();
    auto P = dual_projections(fd, ct, tol);
    std::vector<double> out(static_cast<std::size_t>(m) * m * m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            // x *_B y multiplies coefficients and divides by d
            Eigen::VectorXcd c(m);
            for (int l = 0; l < m; ++l) c[l] = P[j].coeffs[l] * P[k].coeffs[l] / d[l];
            for (int s = 0; s < m; ++s) {
                cplx v = 0;
                for (int l = 0; l < m; ++l) v += c[l] * ct.lambda(l, s);
                out[(static_cast<std::size_t>(j) * m + k) * m + s] = v.real();
            }
        }
    return out;
}

}  // namespace fusion

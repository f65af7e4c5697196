#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fusion/corpus.hpp"
#include "fusion/ring.hpp"

namespace th {

inline const fusion::FusionData& ring(const char* id) {
    const auto* e = fusion::find_entry(id);
    if (!e) throw std::runtime_error(std::string("missing corpus id ") + id);
    return e->fd;
}

// rank-3 ring with dims (1,1,2): x2^2 = x1, x2 x3 = x3, x3^2 = x1 + x2 + x3
inline fusion::FusionData rep_s3() {
    std::vector<fusion::Matrix> m = {
        {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
        {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}},
        {{0, 0, 1}, {0, 0, 1}, {1, 1, 1}},
    };
    return fusion::new_fusion_data(m, fusion::Mode::Exact);
}

inline std::vector<int> random_relabel(int m, std::mt19937_64& rng) {
    std::vector<int> p(m);
    for (int i = 0; i < m; ++i) p[i] = i;
    std::shuffle(p.begin() + 1, p.end(), rng);
    return p;
}

// true if every column of want matches a distinct column of got
inline bool same_columns(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want, double tol) {
    int m = static_cast<int>(want.cols());
    std::vector<int> used(m, 0);
    for (int j = 0; j < m; ++j) {
        bool found = false;
        for (int c = 0; c < m && !found; ++c) {
            if (used[c]) continue;
            if ((got.col(c) - want.col(j)).cwiseAbs().maxCoeff() <= tol) {
                used[c] = 1;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

// character table of x2x2 = x1 + p x2 + m x3, x2x3 = m x2 + n x3, x3x3 = x1 + n x2 + q x3 from the
// trigonometric roots of the two characteristic cubics
inline Eigen::MatrixXcd rank3_closed_form(double m, double n, double q) {
    double p = (m * m + n * n - 1 - m * q) / n;
    struct R { double b3, r, c, s; };
    auto roots = [](double a, double b, double d) {
        double P = b * b / 3 - a, Q = 2 * b * b * b / 27 - b * a / 3 - d;
        double r = std::sqrt(P / 3);
        double phi = std::acos(std::clamp((Q / 2) / std::pow(P / 3, 1.5), -1.0, 1.0));
        return R{b / 3, r, std::cos(phi / 3), std::sin(phi / 3)};
    };
    R x = roots(p * n - 1 - m * m, p + n, n), y = roots(q * m - 1 - n * n, q + m, m);
    double s3 = std::sqrt(3.0);
    Eigen::MatrixXcd want(3, 3);
    want << 1, 1, 1,
            x.b3 + 2 * x.r * x.c, x.b3 - x.r * (x.c - s3 * x.s), x.b3 - x.r * (x.c + s3 * x.s),
            y.b3 + 2 * y.r * y.c, y.b3 - y.r * (y.c + s3 * y.s), y.b3 - y.r * (y.c - s3 * y.s);
    return want;
}

}  // namespace th

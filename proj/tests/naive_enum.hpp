#pragma once

// Brute-force enumerator for small integral types: rows filled in lexicographic order from
// the dimension equations alone, reciprocity compared cell by cell, associativity at the leaves,
// and pairwise isomorphism for the reduction.

#include <cstdint>
#include <vector>

#include "fusion/ring.hpp"

namespace th {

struct NaiveEnum {
    int m;
    std::vector<std::int64_t> d;
    std::vector<int> dual;
    std::vector<std::int64_t> N;  // -1 unknown
    std::vector<fusion::FusionData> found;
    long leaves = 0;

    NaiveEnum(std::vector<std::int64_t> dims, std::vector<int> inv)
        : m(static_cast<int>(dims.size())), d(std::move(dims)), dual(std::move(inv)) {
        N.assign(static_cast<std::size_t>(m) * m * m, -1);
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                at(0, j, k) = j == k;
                at(j, 0, k) = j == k;
                at(j, k, 0) = k == dual[j];
            }
    }

    std::int64_t& at(int j, int k, int s) { return N[(static_cast<std::size_t>(j) * m + k) * m + s]; }

    bool reciprocity_ok(int j, int k) {
        for (int s = 0; s < m; ++s) {
            std::int64_t v = at(j, k, s);
            int ps[5][3] = {{dual[j], s, k}, {s, dual[k], j}, {dual[k], dual[j], dual[s]}, {dual[s], j, dual[k]}, {k, dual[s], dual[j]}};
            for (auto& p : ps) {
                std::int64_t w = at(p[0], p[1], p[2]);
                if (w >= 0 && w != v) return false;
            }
        }
        return true;
    }

    bool associative() {
        for (int i = 1; i < m; ++i)
            for (int j = 1; j < m; ++j)
                for (int k = 1; k < m; ++k)
                    for (int t = 0; t < m; ++t) {
                        std::int64_t l = 0, r = 0;
                        for (int s = 0; s < m; ++s) {
                            l += at(i, j, s) * at(s, k, t);
                            r += at(j, k, s) * at(i, s, t);
                        }
                        if (l != r) return false;
                    }
        return true;
    }

    void fill_row(int row, int s, std::int64_t rem) {
        const int j = 1 + row / (m - 1), k = 1 + row % (m - 1);
        if (s == m) {
            if (rem != 0) return;
            if (!reciprocity_ok(j, k)) return;
            rows(row + 1);
            return;
        }
        for (std::int64_t v = 0; v * d[s] <= rem; ++v) {
            at(j, k, s) = v;
            fill_row(row, s + 1, rem - v * d[s]);
        }
        at(j, k, s) = -1;
    }

    void rows(int row) {
        if (row == (m - 1) * (m - 1)) {
            ++leaves;
            if (!associative()) return;
            std::vector<double> t(N.begin(), N.end());
            auto fd = fusion::FusionData::from_tensor(m, t, dual, fusion::Mode::Exact);
            for (const auto& g : found)
                if (fusion::are_isomorphic(g, fd)) return;
            found.push_back(fd);
            return;
        }
        const int j = 1 + row / (m - 1), k = 1 + row % (m - 1);
        fill_row(row, 1, d[j] * d[k] - (k == dual[j] ? 1 : 0));
    }

    std::vector<fusion::FusionData> run() {
        if (m == 1) {
            found.push_back(fusion::FusionData::from_tensor(1, {1.0}, {0}, fusion::Mode::Exact));
            return found;
        }
        rows(0);
        return found;
    }
};

}  // namespace th

#include "fairdiv/kkm/birkhoff.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace fairdiv::kkm {

std::vector<int> perfect_matching(const Matrix& m, double tol) {
    const size_t n = m.size();
    std::vector<int> row_of(n, -1), col_of(n, -1);
    std::vector<char> seen;
    std::function<bool(size_t)> augment = [&](size_t r) -> bool {
        for (size_t c = 0; c < n; ++c) {
            if (m[r][c] <= tol || seen[c]) continue;
            seen[c] = 1;
            if (row_of[c] < 0 || augment(static_cast<size_t>(row_of[c]))) {
                row_of[c] = static_cast<int>(r);
                col_of[r] = static_cast<int>(c);
                return true;
            }
        }
        return false;
    };
    for (size_t r = 0; r < n; ++r) {
        seen.assign(n, 0);
        if (!augment(r)) return {};
    }
    return col_of;
}

std::vector<BirkhoffTerm> birkhoff(const Matrix& input, double tol) {
    const size_t n = input.size();
    for (const auto& row : input)
        if (row.size() != n) throw Error("NotDoublyStochastic", "matrix is not square");
    for (size_t i = 0; i < n; ++i) {
        double rs = 0, cs = 0;
        for (size_t j = 0; j < n; ++j) {
            if (input[i][j] < -tol) throw Error("NotDoublyStochastic", "negative entry");
            rs += input[i][j];
            cs += input[j][i];
        }
        if (std::abs(rs - 1) > tol || std::abs(cs - 1) > tol)
            throw Error("NotDoublyStochastic", "row or column " + std::to_string(i) + " does not sum to 1");
    }

    Matrix m = input;
    for (auto& row : m)
        for (auto& x : row)
            if (x <= tol) x = 0;
    std::vector<BirkhoffTerm> terms;
    double remaining = 1;
    while (remaining > tol) {
        auto perm = perfect_matching(m, 0);
        if (perm.empty()) throw Error("MatchingFailed", "no perfect matching with mass " + std::to_string(remaining) + " left");
        size_t arg = 0;
        for (size_t i = 1; i < n; ++i)
            if (m[i][static_cast<size_t>(perm[i])] < m[arg][static_cast<size_t>(perm[arg])]) arg = i;
        const double w = m[arg][static_cast<size_t>(perm[arg])];
        for (size_t i = 0; i < n; ++i) {
            double& x = m[i][static_cast<size_t>(perm[i])];
            x = i == arg ? 0 : x - w;
            if (x <= tol) x = 0;
        }
        terms.push_back({w, std::move(perm)});
        remaining -= w;
    }
    return terms;
}

Matrix sinkhorn(Matrix m, double tol, int max_rounds) {
    const size_t n = m.size();
    for (int round = 0; round < max_rounds; ++round) {
        for (auto& row : m) {
            double s = std::accumulate(row.begin(), row.end(), 0.0);
            if (s > 0)
                for (auto& x : row) x /= s;
        }
        double worst = 0;
        for (size_t j = 0; j < n; ++j) {
            double s = 0;
            for (size_t i = 0; i < n; ++i) s += m[i][j];
            if (s > 0)
                for (size_t i = 0; i < n; ++i) m[i][j] /= s;
            worst = std::max(worst, std::abs(s - 1));
        }
        if (worst <= tol) break;
    }
    return m;
}

}  // namespace fairdiv::kkm

#include "fairdiv/simplicial/kuhn.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace fairdiv::simplicial {

RationalVector grid_to_point(const GridPoint& s, int m) {
    const size_t d = s.size();
    RationalVector x(d + 1);
    int prev = 0;
    for (size_t i = 0; i <= d; ++i) {
        int next = i < d ? s[i] : m;
        x[i] = Rational(next - prev, m);
        x[i].canonicalize();
        prev = next;
    }
    return x;
}

std::vector<GridPoint> grid_points(int d, int m) {
    std::vector<GridPoint> out;
    GridPoint s(static_cast<size_t>(d), 0);
    if (d == 0) return {s};
    while (true) {
        out.push_back(s);
        int i = d - 1;
        while (i >= 0 && s[static_cast<size_t>(i)] == m) --i;
        if (i < 0) break;
        int v = s[static_cast<size_t>(i)] + 1;
        for (int j = i; j < d; ++j) s[static_cast<size_t>(j)] = v;
    }
    return out;
}

std::vector<std::vector<GridPoint>> kuhn_simplices(int d, int m) {
    std::vector<std::vector<GridPoint>> out;
    std::vector<int> order(static_cast<size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::vector<int>> orders;
    do orders.push_back(order);
    while (std::next_permutation(order.begin(), order.end()));

    auto inside = [&](const GridPoint& s) {
        for (size_t k = 0; k < s.size(); ++k)
            if (s[k] < 0 || s[k] > m || (k > 0 && s[k] < s[k - 1])) return false;
        return true;
    };
    for (const auto& base : grid_points(d, m)) {
        for (const auto& ord : orders) {
            std::vector<GridPoint> simplex{base};
            GridPoint w = base;
            bool ok = true;
            for (int axis : ord) {
                ++w[static_cast<size_t>(axis)];
                if (!inside(w)) {
                    ok = false;
                    break;
                }
                simplex.push_back(w);
            }
            if (ok) out.push_back(std::move(simplex));
        }
    }
    return out;
}

namespace {

// A k-simplex of the face {s_{k+1} = ... = s_d = m}: base vertex and the order
// in which unit steps are taken, w_j = w_{j-1} + u_{order[j-1]} (0-based axes).
struct Simplex {
    GridPoint base;  // first k coordinates
    std::vector<int> order;

    GridPoint vertex(size_t j, int d, int m) const {
        GridPoint w(static_cast<size_t>(d), m);
        std::copy(base.begin(), base.end(), w.begin());
        for (size_t t = 0; t < j; ++t) ++w[static_cast<size_t>(order[t])];
        return w;
    }
};

bool in_region(const GridPoint& w, int m) {
    int prev = 0;
    for (int v : w) {
        if (v < prev) return false;
        prev = v;
    }
    return prev <= m;
}

}  // namespace

KuhnResult kuhn_walk(int d, int m, const std::function<int(const GridPoint&)>& label, size_t max_steps) {
    if (d < 1 || m < 1) throw Error("BadConfig", "Kuhn walk needs d >= 1 and m >= 1");
    KuhnResult result;
    std::map<GridPoint, int> cache;
    auto lab = [&](const GridPoint& w) {
        auto it = cache.find(w);
        if (it != cache.end()) return it->second;
        int l = label(w);
        ++result.evaluations;
        // x_l > 0 iff s_{l+1} > s_l (with s_0 = 0, s_{d+1} = m).
        int lo = l == 0 ? 0 : (l <= d ? w[static_cast<size_t>(l - 1)] : 0);
        int hi = l == d ? m : (l >= 0 && l < d ? w[static_cast<size_t>(l)] : 0);
        if (l < 0 || l > d || hi <= lo) throw Error("NotSperner", "label " + std::to_string(l) + " is not in the support");
        cache.emplace(w, l);
        return l;
    };

    if (lab(GridPoint(static_cast<size_t>(d), m)) != 0) throw Error("NotSperner", "vertex e_0 must be labeled 0");

    // Level 1 simplex above e_0.
    int k = 1;
    Simplex cur{{m - 1}, {0}};
    enum class Entry { Door, FromAbove } entry = Entry::Door;
    size_t fresh = 0;  // index of the vertex not on the entry door

    while (true) {
        if (++result.steps > max_steps) throw Error("BudgetExceeded", "Kuhn walk exceeded its step budget");
        std::vector<int> labels(static_cast<size_t>(k) + 1);
        for (size_t j = 0; j <= static_cast<size_t>(k); ++j) labels[j] = lab(cur.vertex(j, d, m));

        size_t exit;
        if (entry == Entry::FromAbove) {
            exit = static_cast<size_t>(std::find(labels.begin(), labels.end(), k) - labels.begin());
        } else {
            const int l = labels[fresh];
            if (l == k) {
                if (k == d) {
                    for (size_t j = 0; j <= static_cast<size_t>(d); ++j) result.vertices.push_back(cur.vertex(j, d, m));
                    result.labels = labels;
                    return result;
                }
                // Raise to the unique (k+1)-simplex below the face s_{k+1} = m.
                Simplex up;
                up.base = cur.base;
                up.base.push_back(m - 1);
                up.order.push_back(k);
                up.order.insert(up.order.end(), cur.order.begin(), cur.order.end());
                cur = std::move(up);
                ++k;
                entry = Entry::Door;
                fresh = 0;
                continue;
            }
            if (l > k) throw Error("NotSperner", "label outside the current face");
            exit = labels.size();
            for (size_t j = 0; j < labels.size(); ++j)
                if (j != fresh && labels[j] == l) exit = j;
        }

        // Pivot: drop vertex `exit`.
        const size_t kk = static_cast<size_t>(k);
        if (exit == 0 && cur.order[0] == k - 1 && cur.base[kk - 1] == m - 1) {
            // The opposite face lies on s_k = m: descend.
            Simplex down;
            GridPoint w1 = cur.vertex(1, d, m);
            down.base.assign(w1.begin(), w1.begin() + static_cast<long>(kk - 1));
            down.order.assign(cur.order.begin() + 1, cur.order.end());
            cur = std::move(down);
            --k;
            entry = Entry::FromAbove;
            if (k == 0) throw Error("NotSperner", "walk returned to e_0");
            continue;
        }
        Simplex next = cur;
        if (exit == 0) {
            ++next.base[static_cast<size_t>(cur.order[0])];
            std::rotate(next.order.begin(), next.order.begin() + 1, next.order.end());
            fresh = kk;
        } else if (exit == kk) {
            --next.base[static_cast<size_t>(cur.order[kk - 1])];
            std::rotate(next.order.rbegin(), next.order.rbegin() + 1, next.order.rend());
            fresh = 0;
        } else {
            std::swap(next.order[exit - 1], next.order[exit]);
            fresh = exit;
        }
        if (!in_region(next.vertex(fresh, d, m), m))
            throw Error("NotSperner", "walk left the simplex through a face that should be unreachable");
        cur = std::move(next);
        entry = Entry::Door;
    }
}

}  // namespace fairdiv::simplicial

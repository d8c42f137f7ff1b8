#include "fairdiv/necklace/adjust.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>

namespace fairdiv::necklace {

namespace {

bool is_integer(const Rational& x) { return x.get_den() == 1; }

mpz_class floor_of(const Rational& x) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return f;
}

struct Group {
    size_t first, last;  // cut indices sharing one position
    int left, right;     // owners of the nonempty pieces on either side
};

// Cycle in a multigraph with loops, as (edge, head) pairs; the head of each
// edge is the thief that gains.
std::vector<std::pair<size_t, int>> find_cycle(const std::vector<Group>& edges, int k) {
    for (size_t e = 0; e < edges.size(); ++e)
        if (edges[e].left == edges[e].right) return {{e, edges[e].left}};
    std::vector<bool> alive(edges.size(), true);
    std::vector<int> degree(static_cast<size_t>(k) + 1, 0);
    for (const auto& g : edges) {
        ++degree[static_cast<size_t>(g.left)];
        ++degree[static_cast<size_t>(g.right)];
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t e = 0; e < edges.size(); ++e) {
            if (!alive[e]) continue;
            if (degree[static_cast<size_t>(edges[e].left)] == 1 || degree[static_cast<size_t>(edges[e].right)] == 1) {
                alive[e] = false;
                --degree[static_cast<size_t>(edges[e].left)];
                --degree[static_cast<size_t>(edges[e].right)];
                changed = true;
            }
        }
    }
    size_t start = 0;
    while (start < edges.size() && !alive[start]) ++start;
    if (start == edges.size()) return {};

    std::vector<int> path{edges[start].left};
    std::vector<size_t> used;
    size_t arrived = edges.size();
    while (true) {
        const int v = path.back();
        size_t next = edges.size();
        for (size_t e = 0; e < edges.size(); ++e)
            if (alive[e] && e != arrived && (edges[e].left == v || edges[e].right == v)) {
                next = e;
                break;
            }
        const int w = edges[next].left == v ? edges[next].right : edges[next].left;
        used.push_back(next);
        auto at = std::find(path.begin(), path.end(), w);
        if (at != path.end()) {
            size_t j = static_cast<size_t>(at - path.begin());
            std::vector<std::pair<size_t, int>> cycle;
            for (size_t i = j; i < used.size(); ++i) cycle.push_back({used[i], i + 1 < path.size() ? path[i + 1] : w});
            return cycle;
        }
        path.push_back(w);
        arrived = next;
    }
}

}  // namespace

Splitting adjust_cuts(const Necklace& necklace, int k, const Splitting& splitting) {
    VerifyReport before = verify(necklace, k, splitting, ConstraintGraph::free());
    if (!before.fair) throw Error("NotFair", "input splitting is not fair: " + before.problem);

    const long n = static_cast<long>(necklace.size());
    std::vector<Rational> pos;
    for (const auto& c : splitting.cuts) pos.push_back(c * n);
    const auto& owners = splitting.owners;

    for (size_t round = 0;; ++round) {
        if (round > 16 * (pos.size() + 1) * (pos.size() + 1) + 64)
            throw Error("NotFair", "cut adjustment did not terminate");
        auto inside = std::find_if(pos.begin(), pos.end(), [](const Rational& p) { return !is_integer(p); });
        if (inside == pos.end()) break;
        const int color = necklace.beads[static_cast<size_t>(floor_of(*inside).get_si())];

        std::vector<Group> groups;
        for (size_t i = 0; i < pos.size();) {
            size_t j = i;
            while (j + 1 < pos.size() && pos[j + 1] == pos[i]) ++j;
            if (!is_integer(pos[i]) && necklace.beads[static_cast<size_t>(floor_of(pos[i]).get_si())] == color)
                groups.push_back({i, j, owners[i], owners[j + 1]});
            i = j + 1;
        }
        auto cycle = find_cycle(groups, k);
        if (cycle.empty()) throw Error("NotFair", "no cycle among cuts through beads");

        // dir[i] for every cut: -1 left, +1 right, 0 fixed.
        std::vector<int> dir(pos.size(), 0);
        for (auto [e, head] : cycle) {
            const Group& g = groups[e];
            int d = head == g.right ? -1 : 1;
            for (size_t i = g.first; i <= g.last; ++i) dir[i] = d;
        }
        Rational step = -1;
        for (size_t i = 0; i < pos.size(); ++i) {
            if (dir[i] == 0) continue;
            Rational fl(floor_of(pos[i]));
            Rational lim = dir[i] < 0 ? Rational(pos[i] - fl) : Rational(fl + 1 - pos[i]);
            if (step < 0 || lim < step) step = lim;
            if (dir[i] < 0) {
                size_t j = i;
                while (j > 0 && pos[j - 1] == pos[i]) --j;
                if (j > 0 && dir[j - 1] >= 0) {
                    Rational gap = pos[i] - pos[j - 1];
                    Rational l = dir[j - 1] > 0 ? gap / 2 : gap;
                    if (l < step) step = l;
                }
            } else {
                size_t j = i;
                while (j + 1 < pos.size() && pos[j + 1] == pos[i]) ++j;
                if (j + 1 < pos.size() && dir[j + 1] <= 0) {
                    Rational gap = pos[j + 1] - pos[i];
                    Rational l = dir[j + 1] < 0 ? gap / 2 : gap;
                    if (l < step) step = l;
                }
            }
        }
        for (size_t i = 0; i < pos.size(); ++i) pos[i] += Rational(dir[i]) * step;
    }

    Splitting out = splitting;
    for (size_t i = 0; i < pos.size(); ++i) {
        out.cuts[i] = pos[i] / n;
        out.cuts[i].canonicalize();
    }
    VerifyReport after = verify(necklace, k, out, ConstraintGraph::free());
    if (!after.fair) throw Error("NotFair", "adjusted splitting lost fairness: " + after.problem);
    return out;
}

}  // namespace fairdiv::necklace

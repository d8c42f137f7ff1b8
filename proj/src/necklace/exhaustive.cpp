#include "fairdiv/necklace/exhaustive.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>

namespace fairdiv::necklace {

namespace {

struct Search {
    const Necklace& necklace;
    int k;
    int max_pieces;
    const ConstraintGraph& graph;
    const std::vector<int>& pinned;
    bool canonical;
    std::uint64_t budget;

    int n = 0;
    std::vector<int> target = {};            // per type
    std::vector<std::vector<int>> tally = {};  // [thief][type]
    std::vector<int> ends = {}, owners = {};
    std::set<std::pair<int, int>> edges = {};
    std::uint64_t nodes = 0;

    void tick() {
        if (++nodes > budget)
            throw Error("BudgetExceeded", "exhaustive search exceeded " + std::to_string(budget) + " nodes");
    }

    // prev_adj: owner of the previous piece if it was nonempty, else 0.
    // prev_owner: owner of the last nonempty piece, else 0.
    bool run(int piece, int pos, int prev_adj, int prev_owner, int labels) {
        tick();
        if (pos == n) {
            if (pinned.empty()) return piece > 0;
            // Whatever is left of the order becomes empty pieces at the end.
            for (int i = piece; i < max_pieces; ++i) {
                ends.push_back(n);
                owners.push_back(pinned[static_cast<size_t>(i)]);
            }
            return true;
        }
        if (piece == max_pieces) return false;
        const bool last = piece + 1 == max_pieces;

        // Empty piece: only useful to separate two nonempty pieces.
        if (!pinned.empty() || (piece > 0 && prev_adj != 0 && !last)) {
            const int o = pinned.empty() ? prev_owner : pinned[static_cast<size_t>(piece)];
            ends.push_back(pos);
            owners.push_back(o);
            if (run(piece + 1, pos, 0, prev_owner, labels)) return true;
            ends.pop_back();
            owners.pop_back();
        }

        std::vector<int> candidates;
        if (!pinned.empty()) candidates.push_back(pinned[static_cast<size_t>(piece)]);
        else
            for (int o = 1; o <= (canonical ? std::min(k, labels + 1) : k); ++o)
                if (o != prev_owner) candidates.push_back(o);

        for (int o : candidates) {
            bool added = false;
            if (prev_adj != 0 && prev_adj != o) {
                auto e = std::make_pair(std::min(prev_adj, o), std::max(prev_adj, o));
                if (!edges.count(e)) {
                    edges.insert(e);
                    if (!graph.admits(edges, k)) {
                        edges.erase(e);
                        continue;
                    }
                    added = true;
                }
            }
            auto& mine = tally[static_cast<size_t>(o - 1)];
            int e = pos;
            bool found = false;
            while (e < n) {
                const int type = necklace.beads[static_cast<size_t>(e)];
                if (mine[static_cast<size_t>(type)] == target[static_cast<size_t>(type)]) break;
                ++mine[static_cast<size_t>(type)];
                ++e;
                if (last && e < n) continue;
                ends.push_back(e);
                owners.push_back(o);
                if (run(piece + 1, e, o, o, std::max(labels, o))) {
                    found = true;
                    break;
                }
                ends.pop_back();
                owners.pop_back();
            }
            if (found) return true;
            for (int m = pos; m < e; ++m) --mine[static_cast<size_t>(necklace.beads[static_cast<size_t>(m)])];
            if (added) edges.erase(std::make_pair(std::min(prev_adj, o), std::max(prev_adj, o)));
        }
        return false;
    }
};

}  // namespace

std::optional<Splitting> solve_exhaustive(const Necklace& necklace, int k, int max_cuts, const ConstraintGraph& graph,
                                          const ExhaustiveOptions& options) {
    if (k < 1) throw Error("BadConfig", "need at least one thief");
    if (max_cuts < 0) throw Error("BadConfig", "max_cuts must be nonnegative");
    for (int c : necklace.counts())
        if (c % k != 0) throw Error("NotDivisible", "type counts must be divisible by " + std::to_string(k));
    const auto& pinned = options.owner_order;
    if (!pinned.empty()) {
        if (pinned.size() != static_cast<size_t>(max_cuts) + 1)
            throw Error("BadConfig", "owner order needs max_cuts + 1 entries");
        for (int o : pinned)
            if (o < 1 || o > k) throw Error("BadConfig", "owner order uses thieves outside 1..k");
    }

    // The 4-cycle is the 2-cube: search with a free labelling, then name the
    // thieves around the square.
    const bool square = graph.kind == ConstraintGraph::Kind::Cycle4 && k == 4 && pinned.empty();
    const ConstraintGraph search_graph = square ? ConstraintGraph::binary(2) : graph;
    const bool symmetric = graph.kind == ConstraintGraph::Kind::Free || square ||
                           (graph.kind == ConstraintGraph::Kind::Binary && graph.strings.empty());

    Search s{necklace, k, max_cuts + 1, search_graph, pinned, symmetric && pinned.empty(), options.budget};
    s.n = static_cast<int>(necklace.size());
    for (int c : necklace.counts()) s.target.push_back(c / k);
    s.tally.assign(static_cast<size_t>(k), std::vector<int>(static_cast<size_t>(necklace.q), 0));
    if (s.n == 0) {
        Splitting empty{{}, {1}, {}};
        return empty;
    }
    if (!s.run(0, 0, 0, 0, 0)) return std::nullopt;

    Splitting out;
    for (size_t i = 0; i + 1 < s.ends.size(); ++i) out.cuts.push_back(Rational(s.ends[i], s.n));
    for (auto& c : out.cuts) c.canonicalize();
    out.owners = s.owners;

    if (search_graph.kind == ConstraintGraph::Kind::Binary && search_graph.strings.empty()) {
        auto labels = hypercube_labeling(s.edges, k, search_graph.t);
        if (!labels) throw Error("NotFound", "accepted splitting lost its hypercube labelling");
        if (square) {
            // 00, 01, 11, 10 walk around the square.
            auto name = [](const std::string& b) { return b == "00" ? 1 : b == "01" ? 2 : b == "11" ? 3 : 4; };
            for (auto& o : out.owners) o = name((*labels)[static_cast<size_t>(o - 1)]);
        } else {
            out.strings = *labels;
        }
    }
    return out;
}

Splitting solve_cyclic_k4(const Necklace& necklace, std::uint64_t budget) {
    ExhaustiveOptions options;
    options.budget = budget;
    auto s = solve_exhaustive(necklace, 4, 3 * necklace.q, ConstraintGraph::cycle4(), options);
    if (!s) throw Error("NotFound", "no cyclic splitting of size 3q; this contradicts the existence theorem");
    return *s;
}

}  // namespace fairdiv::necklace

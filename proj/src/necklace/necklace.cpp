#include "fairdiv/necklace/necklace.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace fairdiv::necklace {

std::vector<int> Necklace::counts() const {
    std::vector<int> c(static_cast<size_t>(q), 0);
    for (int b : beads) ++c[static_cast<size_t>(b)];
    return c;
}

std::vector<std::vector<int>> Necklace::prefix_counts() const {
    std::vector<std::vector<int>> out(beads.size() + 1, std::vector<int>(static_cast<size_t>(q), 0));
    for (size_t i = 0; i < beads.size(); ++i) {
        out[i + 1] = out[i];
        ++out[i + 1][static_cast<size_t>(beads[i])];
    }
    return out;
}

Necklace parse_necklace(std::string_view text) {
    Necklace n;
    std::map<char, int> ids;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        auto [it, inserted] = ids.emplace(c, static_cast<int>(ids.size()));
        if (inserted) n.symbols.emplace_back(1, c);
        n.beads.push_back(it->second);
    }
    n.q = static_cast<int>(ids.size());
    return n;
}

Necklace make_necklace(std::vector<int> beads) {
    Necklace n;
    n.beads = std::move(beads);
    for (int b : n.beads) {
        if (b < 0) throw Error("ParseError", "bead types must be nonnegative");
        n.q = std::max(n.q, b + 1);
    }
    for (int t = 0; t < n.q; ++t) n.symbols.push_back(t < 26 ? std::string(1, static_cast<char>('A' + t)) : std::to_string(t));
    return n;
}

ConstraintGraph ConstraintGraph::explicit_edges(std::set<std::pair<int, int>> edges) {
    ConstraintGraph g;
    g.kind = Kind::Explicit;
    for (auto [a, b] : edges) g.edges.emplace(std::min(a, b), std::max(a, b));
    return g;
}

std::string to_string(ConstraintGraph::Kind kind) {
    switch (kind) {
        case ConstraintGraph::Kind::Free: return "free";
        case ConstraintGraph::Kind::Cycle4: return "cycle4";
        case ConstraintGraph::Kind::Binary: return "binary";
        case ConstraintGraph::Kind::Explicit: return "explicit";
    }
    return "free";
}

int hypercube_dim(int k) {
    int t = 0;
    while ((1 << t) < k) ++t;
    return t;
}

namespace {

int hamming(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return -1;
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

std::string bits(unsigned v, int t) {
    std::string s(static_cast<size_t>(t), '0');
    for (int i = 0; i < t; ++i)
        if (v & (1u << (t - 1 - i))) s[static_cast<size_t>(i)] = '1';
    return s;
}

}  // namespace

bool ConstraintGraph::allows(int a, int b) const {
    if (a == b) return true;
    switch (kind) {
        case Kind::Free: return true;
        case Kind::Cycle4: return (a - b + 4) % 2 == 1;  // 1-3 and 2-4 are forbidden
        case Kind::Binary: {
            if (strings.empty()) return true;
            size_t ia = static_cast<size_t>(a - 1), ib = static_cast<size_t>(b - 1);
            if (ia >= strings.size() || ib >= strings.size()) return false;
            return hamming(strings[ia], strings[ib]) == 1;
        }
        case Kind::Explicit: return edges.count({std::min(a, b), std::max(a, b)}) > 0;
    }
    return false;
}

bool ConstraintGraph::admits(const std::set<std::pair<int, int>>& adjacent, int k) const {
    if (kind == Kind::Binary && strings.empty()) return hypercube_labeling(adjacent, k, t).has_value();
    for (auto [a, b] : adjacent)
        if (!allows(a, b)) return false;
    return true;
}

std::optional<std::vector<std::string>> hypercube_labeling(const std::set<std::pair<int, int>>& adjacent, int k,
                                                           int t) {
    if (k > (1 << t)) return std::nullopt;
    std::vector<int> label(static_cast<size_t>(k) + 1, -1);
    std::vector<bool> used(1u << t, false);
    std::vector<std::vector<int>> nbr(static_cast<size_t>(k) + 1);
    for (auto [a, b] : adjacent) {
        if (a == b) continue;
        nbr[static_cast<size_t>(a)].push_back(b);
        nbr[static_cast<size_t>(b)].push_back(a);
    }
    // Hypercube automorphisms let thief 1 sit at 0.
    std::function<bool(int)> place = [&](int thief) -> bool {
        if (thief > k) return true;
        for (unsigned v = 0; v < (1u << t); ++v) {
            if (used[v]) continue;
            if (thief == 1 && v != 0) break;
            bool ok = true;
            for (int o : nbr[static_cast<size_t>(thief)]) {
                int lo = label[static_cast<size_t>(o)];
                if (lo >= 0 && __builtin_popcount(v ^ static_cast<unsigned>(lo)) != 1) ok = false;
            }
            if (!ok) continue;
            used[v] = true;
            label[static_cast<size_t>(thief)] = static_cast<int>(v);
            if (place(thief + 1)) return true;
            used[v] = false;
            label[static_cast<size_t>(thief)] = -1;
        }
        return false;
    };
    if (!place(1)) return std::nullopt;
    std::vector<std::string> out;
    for (int i = 1; i <= k; ++i) out.push_back(bits(static_cast<unsigned>(label[static_cast<size_t>(i)]), t));
    return out;
}

std::vector<Rational> content(const Necklace& necklace, const Rational& a, const Rational& b) {
    std::vector<Rational> out(static_cast<size_t>(necklace.q));
    const long n = static_cast<long>(necklace.size());
    if (b <= a) return out;
    Rational lo = a * n, hi = b * n;
    mpz_class first;
    mpz_fdiv_q(first.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    for (long m = first.get_si(); m < n && Rational(m) < hi; ++m) {
        if (m < 0) continue;
        Rational s = std::max(lo, Rational(m));
        Rational e = std::min(hi, Rational(m + 1));
        if (e > s) out[static_cast<size_t>(necklace.beads[static_cast<size_t>(m)])] += e - s;
    }
    return out;
}

VerifyReport verify(const Necklace& necklace, int k, const Splitting& splitting, const ConstraintGraph& graph) {
    const auto& cuts = splitting.cuts;
    if (splitting.owners.size() != cuts.size() + 1)
        throw Error("MalformedSplitting", "expected " + std::to_string(cuts.size() + 1) + " owners, got " +
                                              std::to_string(splitting.owners.size()));
    for (size_t i = 0; i < cuts.size(); ++i) {
        if (cuts[i] < 0 || cuts[i] > 1) throw Error("MalformedSplitting", "cut outside [0,1]");
        if (i > 0 && cuts[i] < cuts[i - 1]) throw Error("MalformedSplitting", "cuts are not sorted");
    }
    for (int o : splitting.owners)
        if (o < 1 || o > k) throw Error("MalformedSplitting", "owner " + std::to_string(o) + " outside 1.." + std::to_string(k));

    VerifyReport r;
    r.size = cuts.size();
    r.tally.assign(static_cast<size_t>(k), std::vector<Rational>(static_cast<size_t>(necklace.q)));
    int prev_owner = 0;  // owner of the previous piece if it was nonempty
    for (size_t p = 0; p < splitting.owners.size(); ++p) {
        Rational a = p == 0 ? Rational(0) : cuts[p - 1];
        Rational b = p == cuts.size() ? Rational(1) : cuts[p];
        const int owner = splitting.owners[p];
        auto c = content(necklace, a, b);
        for (size_t t = 0; t < c.size(); ++t) r.tally[static_cast<size_t>(owner - 1)][t] += c[t];
        if (b > a) {
            if (prev_owner != 0 && prev_owner != owner)
                r.adjacent.emplace(std::min(prev_owner, owner), std::max(prev_owner, owner));
            prev_owner = owner;
        } else {
            prev_owner = 0;
        }
    }

    r.fair = true;
    auto counts = necklace.counts();
    for (size_t t = 0; t < counts.size() && r.fair; ++t) {
        Rational share(counts[t], k);
        share.canonicalize();
        for (int i = 0; i < k; ++i)
            if (r.tally[static_cast<size_t>(i)][t] != share) {
                r.fair = false;
                r.problem = "thief " + std::to_string(i + 1) + " holds " + fairdiv::to_string(r.tally[static_cast<size_t>(i)][t]) +
                            " of type " + necklace.symbols[t] + ", share is " + fairdiv::to_string(share);
                break;
            }
    }
    r.constraint_ok = graph.admits(r.adjacent, k);
    if (r.constraint_ok && graph.kind == ConstraintGraph::Kind::Binary && !splitting.strings.empty()) {
        const auto& s = splitting.strings;
        std::set<std::string> distinct(s.begin(), s.end());
        bool shaped = s.size() == static_cast<size_t>(k) && distinct.size() == s.size() &&
                      std::all_of(s.begin(), s.end(), [&](const std::string& x) { return x.size() == static_cast<size_t>(graph.t); });
        r.constraint_ok = shaped && ConstraintGraph::binary(graph.t, s).admits(r.adjacent, k);
    }
    if (!r.constraint_ok && r.problem.empty()) r.problem = "adjacent pieces violate the " + to_string(graph.kind) + " constraint";
    return r;
}

}  // namespace fairdiv::necklace

#pragma once

#include "fairdiv/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fairdiv::necklace {

/// Beads are 0-based type ids; bead m (1-based) occupies [(m-1)/N, m/N].
struct Necklace {
    std::vector<int> beads;
    int q = 0;
    std::vector<std::string> symbols;  // display symbol per type id

    size_t size() const { return beads.size(); }
    std::vector<int> counts() const;
    /// Number of beads of each type among the first n beads, for n = 0..N.
    std::vector<std::vector<int>> prefix_counts() const;
};

/// Builds a necklace from one symbol per bead ("GGGRRRGGG"); types are numbered
/// in order of first appearance. Whitespace is ignored.
Necklace parse_necklace(std::string_view text);
Necklace make_necklace(std::vector<int> beads);

/// Cuts are positions in [0, 1]; owners are thief ids 1..k, one per piece.
struct Splitting {
    std::vector<Rational> cuts;
    std::vector<int> owners;
    /// Optional bit string per thief id (index 0 is thief 1).
    std::vector<std::string> strings;

    size_t size() const { return cuts.size(); }
};

struct ConstraintGraph {
    enum class Kind { Free, Cycle4, Binary, Explicit };
    Kind kind = Kind::Free;
    int t = 0;                              // hypercube dimension for Binary
    std::vector<std::string> strings;       // fixed Binary labels; empty means "some labeling exists"
    std::set<std::pair<int, int>> edges;    // Explicit: allowed pairs (a < b)

    static ConstraintGraph free() { return {}; }
    static ConstraintGraph cycle4() { return {Kind::Cycle4, 0, {}, {}}; }
    static ConstraintGraph binary(int t, std::vector<std::string> strings = {}) {
        return {Kind::Binary, t, std::move(strings), {}};
    }
    static ConstraintGraph explicit_edges(std::set<std::pair<int, int>> edges);

    /// Whether thieves may hold adjacent pieces. A thief is always compatible with
    /// itself. For Binary without fixed strings this only answers for fixed
    /// labelings; use admits() for the existential check.
    bool allows(int a, int b) const;

    /// Whether the set of adjacent thief pairs is acceptable. For Binary without
    /// fixed strings this asks for an injective labeling of the k thieves by
    /// t-bit strings under which every pair differs in one bit.
    bool admits(const std::set<std::pair<int, int>>& adjacent, int k) const;
};

std::string to_string(ConstraintGraph::Kind kind);

/// Smallest t with 2^t >= k.
int hypercube_dim(int k);

/// Injective labeling of thieves 1..k by t-bit strings making every pair in
/// `adjacent` differ in exactly one bit, if one exists.
std::optional<std::vector<std::string>> hypercube_labeling(const std::set<std::pair<int, int>>& adjacent, int k,
                                                           int t);

struct VerifyReport {
    bool fair = false;
    size_t size = 0;
    bool constraint_ok = false;
    std::vector<std::vector<Rational>> tally;  // [thief-1][type] bead amounts
    std::set<std::pair<int, int>> adjacent;    // thief pairs holding adjacent nonempty pieces
    std::string problem;                       // first reason for !fair or !constraint_ok
};

/// Throws Error("MalformedSplitting") for unsorted or out-of-range cuts, a wrong
/// owner count, or owners outside 1..k.
VerifyReport verify(const Necklace& necklace, int k, const Splitting& splitting, const ConstraintGraph& graph);

/// Amount of each bead type in [a, b] (positions in [0, 1]), in beads.
std::vector<Rational> content(const Necklace& necklace, const Rational& a, const Rational& b);

}  // namespace fairdiv::necklace

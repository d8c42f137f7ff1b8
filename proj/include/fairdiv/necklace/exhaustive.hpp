#pragma once

#include "fairdiv/necklace/necklace.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fairdiv::necklace {

struct ExhaustiveOptions {
    /// When nonempty, pieces are owned in exactly this order (max_cuts + 1 entries)
    /// and empty pieces are allowed anywhere.
    std::vector<int> owner_order;
    /// Search nodes before Error("BudgetExceeded").
    std::uint64_t budget = 200'000'000;
};

/// Depth-first search over splittings with cuts at bead boundaries and at most
/// max_cuts cuts. Returns nullopt only after exhausting the space.
///
/// Without a pinned order, thieves are labelled in order of first appearance
/// for graphs that are symmetric under relabelling (free, binary without fixed
/// strings, and the 4-cycle, which is searched as the 2-cube and relabelled).
std::optional<Splitting> solve_exhaustive(const Necklace& necklace, int k, int max_cuts, const ConstraintGraph& graph,
                                          const ExhaustiveOptions& options = {});

/// Four thieves, pieces of thieves 1 and 3 (and of 2 and 4) never adjacent, at most
/// 3q cuts. Throws BudgetExceeded rather than returning nothing.
Splitting solve_cyclic_k4(const Necklace& necklace, std::uint64_t budget = 200'000'000);

}  // namespace fairdiv::necklace

#pragma once

#include "fairdiv/necklace/necklace.hpp"

namespace fairdiv::necklace {

/// A window of the necklace stretched over [0, k] (one unit per thief).
struct BalancedWindow {
    Rational start, end;
    int length = 0;  // b, or k - b when only the complementary length exists
};

/**
 * Finds a balanced window of length b or k - b in a two-type necklace stretched
 * over [0, k]: its content of every type is exactly length/k of the total.
 * Lines up b copies, slides a length-b window in steps of b and solves for the
 * exact crossing; a window straddling two copies yields the complementary one.
 * Throws Error("NotTwoColor") for q > 2 and Error("NotDivisible") when type
 * counts are not divisible by k.
 */
BalancedWindow find_balanced_subnecklace(const Necklace& necklace, int k, int b);

/**
 * Fair k-splitting of a two-type necklace with at most 2(k-1) cuts whose
 * adjacent pieces go to thieves with bit strings (of length ceil(log2 k))
 * differing in one bit, and whose first and last pieces share an owner.
 * The thieves are split into two groups holding a balanced window and its
 * complement, each group is solved recursively, and the U-group strings are
 * XOR-shifted so the single T-U contact differs in the leading bit only.
 * Cuts are moved onto bead boundaries at the end.
 */
Splitting solve_binary_two_color(const Necklace& necklace, int k);

}  // namespace fairdiv::necklace

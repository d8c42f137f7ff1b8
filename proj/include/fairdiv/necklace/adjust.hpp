#pragma once

#include "fairdiv/necklace/necklace.hpp"

namespace fairdiv::necklace {

/**
 * Moves cuts that pass through beads onto bead boundaries while keeping every
 * thief's tally, the number of cuts and the owner sequence.
 *
 * Each round takes the color of the first cut inside a bead, builds the
 * multigraph on thieves with one edge per cut position inside a bead of that
 * color (joining the owners of the nonempty pieces on either side, loops
 * allowed), and shifts the cuts along a cycle so every thief on it gains and
 * loses the same amount, until a cut reaches a bead boundary or meets another
 * cut. Coincident cuts move together. Throws Error("NotFair") when the input is
 * not fair or no cycle exists.
 */
Splitting adjust_cuts(const Necklace& necklace, int k, const Splitting& splitting);

}  // namespace fairdiv::necklace

#pragma once

#include "fairdiv/necklace/necklace.hpp"

#include <vector>

namespace fairdiv::necklace {

/// h(x) = coeffs . x + offset on R^d.
struct Hyperplane {
    std::vector<Rational> coeffs;
    Rational offset;

    Rational operator()(const std::vector<Rational>& x) const;
};

/// Bead n (1-based) sits at (n, n^2, ..., n^d). Two hyperplanes cut the curve into
/// runs of constant sign pattern; the four orthants are owned around a square,
/// ++ by 1, +- by 2, -- by 3, -+ by 4, so only sign patterns differing in one sign
/// can touch. When both signs flip between two beads, an empty piece separates
/// the diagonal owners. Throws BeadOnHyperplane if some bead lies on either plane.
Splitting moment_curve_cuts(const Necklace& necklace, int d, const Hyperplane& h1, const Hyperplane& h2);

}  // namespace fairdiv::necklace

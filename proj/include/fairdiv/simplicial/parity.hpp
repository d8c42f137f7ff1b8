#pragma once

#include "fairdiv/simplicial/complex.hpp"

#include <utility>
#include <vector>

namespace fairdiv::simplicial {

/// Piecewise-linear map K -> R^d given by its values on the vertices of a
/// d-dimensional complex K.
struct AffineTestMap {
    PseudoComplex complex;
    std::vector<RationalVector> images;  // vertex -> R^d
};

/// A level-set component of (f_1, ..., f_{d-1}) traced through the complex.
struct LevelPath {
    std::vector<Face> facets;  // in walking order
    std::vector<Face> ends;    // the two boundary doors, empty for a circle
    int zeros = 0;
};

struct ParityResult {
    int r = 0;       // zeros of f in K
    int r_plus = 0;  // zeros of (f_1..f_{d-1}) on the boundary with f_d > 0
    std::vector<LevelPath> paths;
};

/**
 * Counts zeros by following the level set of the first d-1 coordinates.
 *
 * Degeneracies are broken by solving f = (e, e^2, ..., e^d) for an
 * infinitesimal e > 0 instead of f = 0, which is the same symbolic
 * perturbation for every facet and so keeps the door relation consistent.
 * Doors (ridges met by the level set) are left in order of the opposite
 * vertex id. Throws Error("DegenerateMap") if some facet does not have 0 or 2
 * doors, which can only happen for non-pseudomanifold input.
 */
ParityResult parity_counts(const AffineTestMap& map);

/// Whether the perturbed zero lies in the relative interior of the facet's image.
bool facet_contains_zero(const AffineTestMap& map, const Face& facet);

/**
 * For a ball K Sperner-colored over a closed (d-1)-pseudomanifold B and a
 * facet sigma of B, returns a facet of K exhibiting all colors of sigma plus
 * one more. The colors are sent to a point configuration whose only zero-
 * containing simplices are those; the facet is found by walking from a
 * boundary door colored by sigma. Throws Error("NotFound") when the walk ends
 * without one, which means the coloring is not Sperner.
 */
Face rainbow_for_face(const PseudoComplex& ball, const SpernerColoring& coloring, const Face& sigma);

}  // namespace fairdiv::simplicial

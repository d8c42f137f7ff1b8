#pragma once

#include "fairdiv/simplicial/complex.hpp"

namespace fairdiv::simplicial {

/**
 * Realizes the boundary complex of a simplicial polytope as a subdivision of
 * the boundary of a simplex that has `facet` as one of its facets.
 *
 * The simplex is spanned by the vertices of `facet` plus one further vertex of
 * the input, and the returned map's target is its boundary (on the input's
 * vertex ids). The construction recurses through vertex links: the link of the
 * first vertex v of the facet is realized over the remaining facet vertices,
 * coned with v, and the antistar of v is carried onto the facet of the simplex
 * opposite v. Throws Error("RecursionFailed") if some link is not a closed
 * pseudomanifold or the result violates the carrier axioms; no attempt is made
 * to repair non-polytopal input.
 */
CarrierMap simplex_carrier_for_facet(const PseudoComplex& polytope_boundary, const Face& facet);

}  // namespace fairdiv::simplicial

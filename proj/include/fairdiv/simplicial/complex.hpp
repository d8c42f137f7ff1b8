#pragma once

#include "fairdiv/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairdiv::simplicial {

using Vertex = int;
/// A face is stored as a strictly increasing list of vertex ids.
using Face = std::vector<Vertex>;

Face make_face(std::vector<Vertex> vertices);
bool is_subface(const Face& small, const Face& big);
Face face_union(const Face& a, const Face& b);

/**
 * Pure abstract simplicial complex given by its facets.
 *
 * Facets are normalized (sorted, and the facet list sorted) on construction so
 * that structurally equal complexes compare equal. Vertex ids are dense from 0;
 * num_vertices() is one past the largest id in use. Optional coordinates give
 * each vertex a barycentric position in some ambient simplex.
 */
class PseudoComplex {
public:
    PseudoComplex() = default;
    PseudoComplex(int dim, std::vector<Face> facets,
                  std::optional<std::vector<RationalVector>> coords = std::nullopt);

    int dim() const { return dim_; }
    const std::vector<Face>& facets() const { return facets_; }
    size_t num_facets() const { return facets_.size(); }
    int num_vertices() const { return num_vertices_; }

    bool has_coords() const { return coords_.has_value(); }
    const std::vector<RationalVector>& coords() const { return *coords_; }
    const RationalVector& coord(Vertex v) const { return (*coords_)[static_cast<size_t>(v)]; }

    bool contains_facet(const Face& f) const;

    /// Every (dim-1)-face paired with the number of facets containing it.
    std::vector<std::pair<Face, int>> ridge_multiplicities() const;

    /// Vertices adjacent to v (sharing an edge).
    std::vector<Vertex> neighbors(Vertex v) const;

    friend bool operator==(const PseudoComplex& a, const PseudoComplex& b) {
        return a.dim_ == b.dim_ && a.facets_ == b.facets_;
    }

private:
    int dim_ = 0;
    std::vector<Face> facets_;
    int num_vertices_ = 0;
    std::optional<std::vector<RationalVector>> coords_;
};

struct Classification {
    enum class Kind { Closed, WithBoundary, Invalid };
    Kind kind = Kind::Invalid;
    /// For Invalid: "purity", "face multiplicity", "strong connectivity" or "link connectivity".
    std::string reason;

    bool valid() const { return kind != Kind::Invalid; }
};

std::string to_string(Classification::Kind kind);

/// Classifies a complex as closed pseudomanifold, pseudomanifold with boundary,
/// or invalid. Link connectivity of faces of codimension >= 2 is only examined
/// when check_links is set.
Classification validate(const PseudoComplex& complex, bool check_links = true);

/// Subcomplex of ridges lying in exactly one facet. Throws Error("ClosedInput").
PseudoComplex boundary(const PseudoComplex& complex);

/// Link of a face, vertices keep their ids.
PseudoComplex link(const PseudoComplex& complex, const Face& face);

/// Cone over the complex with apex id num_vertices().
PseudoComplex cone(const PseudoComplex& complex);

/// Keeps vertex ids that appear in facets, renumbered densely in increasing order.
/// The second value maps old id -> new id (-1 for dropped ids).
std::pair<PseudoComplex, std::vector<Vertex>> compact(const PseudoComplex& complex);

/**
 * Subdivision relation: every source vertex is sent to the minimal face of the
 * target containing it. Vertices with no constraint (interior vertices of a ball
 * whose boundary subdivides the target) carry std::nullopt.
 */
struct CarrierMap {
    PseudoComplex source;
    PseudoComplex target;
    std::vector<std::optional<Face>> carrier;

    const std::optional<Face>& of(Vertex v) const { return carrier[static_cast<size_t>(v)]; }
    /// Join-closure of the vertex carriers; nullopt if some vertex is unconstrained.
    std::optional<Face> of_face(const Face& face) const;
};

/// carrier(first) then carrier(second): source of first -> target of second.
CarrierMap compose(const CarrierMap& first, const CarrierMap& second);

CarrierMap identity_carrier(const PseudoComplex& complex);

/// For a ball K whose boundary is exactly B (vertex ids shared), boundary vertices
/// carry themselves and interior vertices carry nothing.
CarrierMap boundary_carrier(const PseudoComplex& ball);

/// Checks the subdivision axioms: vertex carriers are faces of the target, every
/// source facet is carried into a single target facet, target vertices are hit by
/// exactly themselves, and every target facet is the carrier of some source facet.
/// Returns a description of the first violation.
std::optional<std::string> verify_carrier(const CarrierMap& map);

std::pair<PseudoComplex, CarrierMap> barycentric(const PseudoComplex& complex);

/// L-infinity diameter (in coordinate space) of the widest facet.
Rational mesh_diameter(const PseudoComplex& complex);

/// Iterated barycentric subdivision until every facet has coordinate diameter
/// <= eps. Throws Error("EpsNonpositive") or Error("BudgetExceeded") when the
/// facet count would exceed max_facets.
std::pair<PseudoComplex, CarrierMap> refine_to_mesh(const PseudoComplex& complex, const Rational& eps,
                                                    size_t max_facets = 2'000'000);

struct SpernerColoring {
    std::vector<Vertex> colors;  // source vertex -> target vertex

    Vertex operator()(Vertex v) const { return colors[static_cast<size_t>(v)]; }
};

/// First vertex whose color is not a vertex of its carrier, if any.
std::optional<Vertex> check_sperner(const SpernerColoring& coloring, const CarrierMap& carrier);

struct RainbowResult {
    std::vector<Face> facets;                        // facets on which the coloring is injective
    std::vector<std::vector<Vertex>> color_sets;     // distinct sorted color sets among them
};

RainbowResult rainbow_facets(const PseudoComplex& complex, const SpernerColoring& coloring);

/// (f_{d-1}(B) - 2) / (d - 1) for a closed (d-1)-pseudomanifold B.
Rational lower_bound(const PseudoComplex& closed_boundary);

/// Replaces the facet by the cone of a fresh vertex (id num_vertices()) over its boundary.
PseudoComplex stack(const PseudoComplex& complex, const Face& facet);

/// Inverse of stack. Throws Error("NotStackingVertex") when removal is not well defined.
PseudoComplex unstack(const PseudoComplex& complex, Vertex vertex);

// Standard complexes used by tests, the CLI, and examples.
PseudoComplex simplex(int dim);
PseudoComplex simplex_boundary(int dim);
PseudoComplex octahedron_boundary();
PseudoComplex icosahedron_boundary();
/// Boundary complex of the cyclic polytope C(n, d) via Gale's evenness condition.
PseudoComplex cyclic_polytope_boundary(int n, int dim);
/// Standard simplex with barycentric coordinates e_0..e_d.
PseudoComplex geometric_simplex(int dim);

}  // namespace fairdiv::simplicial

#include "fairdiv/simplicial/grunbaum.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>
#include <map>

namespace fairdiv::simplicial {

namespace {

struct Realization {
    Vertex extra;                    // vertex completing the facet to a simplex
    std::map<Vertex, Face> carrier;  // every vertex of the complex
};

std::string describe(const Face& f) {
    std::string s = "{";
    for (size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
    return s + "}";
}

Realization realize(const PseudoComplex& complex, const Face& facet) {
    auto cls = validate(complex, true);
    if (cls.kind != Classification::Kind::Closed)
        throw Error("RecursionFailed", "complex of dimension " + std::to_string(complex.dim()) +
                                           " is not a closed pseudomanifold (" + cls.reason + ")");
    if (!complex.contains_facet(facet)) throw Error("RecursionFailed", describe(facet) + " is not a facet");

    Realization out;
    if (complex.dim() == 0) {
        const Vertex a = facet[0];
        const Face& other = complex.facets()[0][0] == a ? complex.facets()[1] : complex.facets()[0];
        out.extra = other[0];
        out.carrier[a] = {a};
        out.carrier[out.extra] = {out.extra};
        return out;
    }

    const Vertex apex = facet[0];
    const Face rest(facet.begin() + 1, facet.end());
    const PseudoComplex lk = link(complex, {apex});
    Realization inner = realize(lk, rest);

    out.extra = inner.extra;
    Face opposite = make_face([&] {
        std::vector<Vertex> f = rest;
        f.push_back(inner.extra);
        return f;
    }());
    for (const auto& f : complex.facets())
        for (Vertex v : f) out.carrier.emplace(v, opposite);
    out.carrier[apex] = {apex};
    for (const auto& [v, c] : inner.carrier) out.carrier[v] = c;
    return out;
}

}  // namespace

CarrierMap simplex_carrier_for_facet(const PseudoComplex& polytope_boundary, const Face& facet) {
    const Face sorted = make_face(facet);
    Realization r = realize(polytope_boundary, sorted);

    Face corners = sorted;
    corners.push_back(r.extra);
    corners = make_face(std::move(corners));
    std::vector<Face> target_facets;
    for (size_t skip = 0; skip < corners.size(); ++skip) {
        Face f;
        for (size_t i = 0; i < corners.size(); ++i)
            if (i != skip) f.push_back(corners[i]);
        target_facets.push_back(std::move(f));
    }

    CarrierMap map{polytope_boundary, PseudoComplex(polytope_boundary.dim(), std::move(target_facets)), {}};
    map.carrier.resize(static_cast<size_t>(polytope_boundary.num_vertices()));
    for (const auto& [v, c] : r.carrier) map.carrier[static_cast<size_t>(v)] = c;
    if (auto problem = verify_carrier(map)) throw Error("RecursionFailed", *problem);
    return map;
}

}  // namespace fairdiv::simplicial

#include "fairdiv/simplicial/complex.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace fairdiv::simplicial {

namespace {

// Union-find over small dense index ranges.
struct Components {
    std::vector<int> parent;
    explicit Components(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

Face without(const Face& f, size_t index) {
    Face r;
    r.reserve(f.size() - 1);
    for (size_t i = 0; i < f.size(); ++i)
        if (i != index) r.push_back(f[i]);
    return r;
}

// All nonempty subfaces of a facet with at most max_size vertices.
void collect_subfaces(const Face& f, size_t max_size, std::set<Face>& out) {
    const size_t n = f.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        if (static_cast<size_t>(__builtin_popcount(mask)) > max_size) continue;
        Face s;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) s.push_back(f[i]);
        out.insert(std::move(s));
    }
}

bool link_connected(const PseudoComplex& complex, const Face& face) {
    std::vector<Face> star;
    for (const auto& f : complex.facets())
        if (is_subface(face, f)) star.push_back(f);
    if (star.empty()) return true;
    std::map<Vertex, int> index;
    for (const auto& f : star)
        for (Vertex v : f)
            if (!std::binary_search(face.begin(), face.end(), v)) index.emplace(v, 0);
    int next = 0;
    for (auto& [v, i] : index) i = next++;
    Components comp(index.size());
    for (const auto& f : star) {
        int first = -1;
        for (Vertex v : f) {
            if (std::binary_search(face.begin(), face.end(), v)) continue;
            int id = index[v];
            if (first < 0) first = id;
            else comp.unite(first, id);
        }
    }
    int root = comp.find(0);
    for (size_t i = 1; i < index.size(); ++i)
        if (comp.find(static_cast<int>(i)) != root) return false;
    return true;
}

}  // namespace

Face make_face(std::vector<Vertex> vertices) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return vertices;
}

bool is_subface(const Face& small, const Face& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Face face_union(const Face& a, const Face& b) {
    Face r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

PseudoComplex::PseudoComplex(int dim, std::vector<Face> facets,
                             std::optional<std::vector<RationalVector>> coords)
    : dim_(dim), facets_(std::move(facets)), coords_(std::move(coords)) {
    if (dim < 0) throw Error("BadComplex", "negative dimension");
    for (auto& f : facets_) {
        std::sort(f.begin(), f.end());
        for (Vertex v : f) {
            if (v < 0) throw Error("BadComplex", "negative vertex id");
            num_vertices_ = std::max(num_vertices_, v + 1);
        }
    }
    std::sort(facets_.begin(), facets_.end());
    if (coords_ && coords_->size() < static_cast<size_t>(num_vertices_))
        throw Error("BadComplex", "coordinates missing for some vertices");
}

bool PseudoComplex::contains_facet(const Face& f) const {
    return std::binary_search(facets_.begin(), facets_.end(), f);
}

std::vector<std::pair<Face, int>> PseudoComplex::ridge_multiplicities() const {
    std::map<Face, int> counts;
    for (const auto& f : facets_)
        for (size_t i = 0; i < f.size(); ++i) ++counts[without(f, i)];
    return {counts.begin(), counts.end()};
}

std::vector<Vertex> PseudoComplex::neighbors(Vertex v) const {
    std::set<Vertex> out;
    for (const auto& f : facets_)
        if (std::binary_search(f.begin(), f.end(), v))
            for (Vertex w : f)
                if (w != v) out.insert(w);
    return {out.begin(), out.end()};
}

std::string to_string(Classification::Kind kind) {
    switch (kind) {
        case Classification::Kind::Closed: return "closed";
        case Classification::Kind::WithBoundary: return "with-boundary";
        case Classification::Kind::Invalid: return "invalid";
    }
    return "invalid";
}

Classification validate(const PseudoComplex& complex, bool check_links) {
    const auto& facets = complex.facets();
    const size_t size = static_cast<size_t>(complex.dim()) + 1;
    if (facets.empty()) return {Classification::Kind::Invalid, "purity"};
    for (const auto& f : facets) {
        if (f.size() != size || std::adjacent_find(f.begin(), f.end()) != f.end())
            return {Classification::Kind::Invalid, "purity"};
    }
    if (std::adjacent_find(facets.begin(), facets.end()) != facets.end())
        return {Classification::Kind::Invalid, "face multiplicity"};

    bool has_boundary = false;
    std::map<Face, std::vector<int>> ridge_owners;
    for (size_t i = 0; i < facets.size(); ++i)
        for (size_t j = 0; j < facets[i].size(); ++j)
            ridge_owners[without(facets[i], j)].push_back(static_cast<int>(i));
    for (const auto& [ridge, owners] : ridge_owners) {
        if (owners.size() > 2) return {Classification::Kind::Invalid, "face multiplicity"};
        if (owners.size() == 1) has_boundary = true;
    }
    Components dual(facets.size());
    for (const auto& [ridge, owners] : ridge_owners)
        if (owners.size() == 2) dual.unite(owners[0], owners[1]);
    for (size_t i = 1; i < facets.size(); ++i)
        if (dual.find(static_cast<int>(i)) != dual.find(0))
            return {Classification::Kind::Invalid, "strong connectivity"};

    if (check_links && complex.dim() >= 2) {
        std::set<Face> faces;
        for (const auto& f : facets) collect_subfaces(f, size - 2, faces);
        for (const auto& face : faces)
            if (!link_connected(complex, face)) return {Classification::Kind::Invalid, "link connectivity"};
    }
    return {has_boundary ? Classification::Kind::WithBoundary : Classification::Kind::Closed, ""};
}

PseudoComplex boundary(const PseudoComplex& complex) {
    if (complex.dim() < 1) throw Error("ClosedInput", "0-dimensional complex has no boundary");
    std::vector<Face> faces;
    for (auto& [ridge, count] : complex.ridge_multiplicities())
        if (count == 1) faces.push_back(ridge);
    if (faces.empty()) throw Error("ClosedInput", "every ridge lies in two facets");
    if (complex.has_coords()) return PseudoComplex(complex.dim() - 1, std::move(faces), complex.coords());
    return PseudoComplex(complex.dim() - 1, std::move(faces));
}

PseudoComplex link(const PseudoComplex& complex, const Face& face) {
    std::vector<Face> out;
    for (const auto& f : complex.facets()) {
        if (!is_subface(face, f)) continue;
        Face rest;
        std::set_difference(f.begin(), f.end(), face.begin(), face.end(), std::back_inserter(rest));
        out.push_back(std::move(rest));
    }
    if (out.empty()) throw Error("NotAFace", "face is not contained in any facet");
    return PseudoComplex(complex.dim() - static_cast<int>(face.size()), std::move(out));
}

PseudoComplex cone(const PseudoComplex& complex) {
    const Vertex apex = complex.num_vertices();
    std::vector<Face> out;
    for (auto f : complex.facets()) {
        f.push_back(apex);
        out.push_back(std::move(f));
    }
    return PseudoComplex(complex.dim() + 1, std::move(out));
}

std::pair<PseudoComplex, std::vector<Vertex>> compact(const PseudoComplex& complex) {
    std::vector<Vertex> map(static_cast<size_t>(complex.num_vertices()), -1);
    for (const auto& f : complex.facets())
        for (Vertex v : f) map[static_cast<size_t>(v)] = 0;
    Vertex next = 0;
    for (auto& m : map)
        if (m == 0) m = next++;
    std::vector<Face> facets;
    for (const auto& f : complex.facets()) {
        Face g;
        for (Vertex v : f) g.push_back(map[static_cast<size_t>(v)]);
        facets.push_back(std::move(g));
    }
    std::optional<std::vector<RationalVector>> coords;
    if (complex.has_coords()) {
        coords.emplace(static_cast<size_t>(next));
        for (size_t v = 0; v < map.size(); ++v)
            if (map[v] >= 0) (*coords)[static_cast<size_t>(map[v])] = complex.coord(static_cast<Vertex>(v));
    }
    return {PseudoComplex(complex.dim(), std::move(facets), std::move(coords)), std::move(map)};
}

std::optional<Face> CarrierMap::of_face(const Face& face) const {
    Face acc;
    for (Vertex v : face) {
        const auto& c = of(v);
        if (!c) return std::nullopt;
        acc = face_union(acc, *c);
    }
    return acc;
}

CarrierMap compose(const CarrierMap& first, const CarrierMap& second) {
    CarrierMap out{first.source, second.target, {}};
    out.carrier.resize(first.carrier.size());
    for (size_t v = 0; v < first.carrier.size(); ++v)
        if (first.carrier[v]) out.carrier[v] = second.of_face(*first.carrier[v]);
    return out;
}

CarrierMap identity_carrier(const PseudoComplex& complex) {
    CarrierMap out{complex, complex, {}};
    out.carrier.resize(static_cast<size_t>(complex.num_vertices()));
    for (Vertex v = 0; v < complex.num_vertices(); ++v) out.carrier[static_cast<size_t>(v)] = Face{v};
    return out;
}

CarrierMap boundary_carrier(const PseudoComplex& ball) {
    PseudoComplex b = boundary(ball);
    CarrierMap out{ball, b, {}};
    out.carrier.resize(static_cast<size_t>(ball.num_vertices()));
    for (const auto& f : b.facets())
        for (Vertex v : f) out.carrier[static_cast<size_t>(v)] = Face{v};
    return out;
}

std::optional<std::string> verify_carrier(const CarrierMap& map) {
    const auto& target = map.target;
    auto is_target_face = [&](const Face& face) {
        for (const auto& f : target.facets())
            if (is_subface(face, f)) return true;
        return false;
    };
    for (size_t v = 0; v < map.carrier.size(); ++v) {
        const auto& c = map.carrier[v];
        if (!c) continue;
        if (c->empty() || !is_target_face(*c))
            return "carrier of vertex " + std::to_string(v) + " is not a face of the target";
    }
    std::set<Face> covered;
    for (const auto& f : map.source.facets()) {
        auto c = map.of_face(f);
        if (!c) continue;
        if (!is_target_face(*c)) {
            std::string s = "facet {";
            for (Vertex v : f) s += std::to_string(v) + " ";
            return s + "} is not carried into a single target facet";
        }
        if (c->size() == static_cast<size_t>(target.dim()) + 1) covered.insert(*c);
    }
    for (const auto& f : target.facets())
        if (!covered.count(f)) {
            std::string s = "target facet {";
            for (Vertex v : f) s += std::to_string(v) + " ";
            return s + "} is not covered";
        }
    // The part carried into a target facet must be a ball; an Euler
    // characteristic other than 1 rules that out (e.g. a punctured torus).
    for (const auto& t : target.facets()) {
        std::set<Face> faces;
        for (const auto& f : map.source.facets()) {
            auto c = map.of_face(f);
            if (c && is_subface(*c, t)) collect_subfaces(f, f.size(), faces);
        }
        long euler = 0;
        for (const auto& f : faces) euler += (f.size() % 2 == 1) ? 1 : -1;
        if (euler != 1) {
            std::string s = "part carried into target facet {";
            for (Vertex v : t) s += std::to_string(v) + " ";
            return s + "} has Euler characteristic " + std::to_string(euler);
        }
    }
    return std::nullopt;
}

std::pair<PseudoComplex, CarrierMap> barycentric(const PseudoComplex& complex) {
    std::set<Face> all;
    for (const auto& f : complex.facets()) collect_subfaces(f, f.size(), all);
    std::vector<Face> faces(all.begin(), all.end());
    std::stable_sort(faces.begin(), faces.end(),
                     [](const Face& a, const Face& b) { return a.size() < b.size(); });
    std::map<Face, Vertex> id;
    for (size_t i = 0; i < faces.size(); ++i) id[faces[i]] = static_cast<Vertex>(i);

    std::vector<Face> facets;
    for (const auto& f : complex.facets()) {
        Face order = f;
        do {
            Face flag;
            Face prefix;
            for (Vertex v : order) {
                prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), v), v);
                flag.push_back(id[prefix]);
            }
            facets.push_back(make_face(std::move(flag)));
        } while (std::next_permutation(order.begin(), order.end()));
    }

    std::optional<std::vector<RationalVector>> coords;
    if (complex.has_coords()) {
        coords.emplace();
        for (const auto& face : faces) {
            RationalVector c(complex.coord(face[0]).size());
            for (Vertex v : face)
                for (size_t k = 0; k < c.size(); ++k) c[k] += complex.coord(v)[k];
            for (auto& x : c) x /= static_cast<long>(face.size());
            coords->push_back(std::move(c));
        }
    }
    PseudoComplex sub(complex.dim(), std::move(facets), std::move(coords));
    CarrierMap carrier{sub, complex, {}};
    carrier.carrier.assign(faces.begin(), faces.end());
    return {std::move(sub), std::move(carrier)};
}

Rational mesh_diameter(const PseudoComplex& complex) {
    if (!complex.has_coords()) throw Error("NoCoordinates", "complex has no geometric realization");
    Rational best = 0;
    for (const auto& f : complex.facets())
        for (size_t i = 0; i < f.size(); ++i)
            for (size_t j = i + 1; j < f.size(); ++j) {
                const auto& a = complex.coord(f[i]);
                const auto& b = complex.coord(f[j]);
                for (size_t k = 0; k < a.size(); ++k) {
                    Rational diff = abs(a[k] - b[k]);
                    if (diff > best) best = diff;
                }
            }
    return best;
}

std::pair<PseudoComplex, CarrierMap> refine_to_mesh(const PseudoComplex& complex, const Rational& eps,
                                                    size_t max_facets) {
    if (eps <= 0) throw Error("EpsNonpositive", "mesh size must be positive");
    PseudoComplex current = complex;
    CarrierMap carrier = identity_carrier(complex);
    long factorial = 1;
    for (int i = 2; i <= complex.dim() + 1; ++i) factorial *= i;
    while (mesh_diameter(current) > eps) {
        if (current.num_facets() * static_cast<size_t>(factorial) > max_facets)
            throw Error("BudgetExceeded", "barycentric refinement would exceed the facet budget");
        auto [next, step] = barycentric(current);
        carrier = compose(step, carrier);
        current = std::move(next);
    }
    carrier.source = current;
    return {std::move(current), std::move(carrier)};
}

std::optional<Vertex> check_sperner(const SpernerColoring& coloring, const CarrierMap& carrier) {
    for (size_t v = 0; v < carrier.carrier.size(); ++v) {
        const auto& c = carrier.carrier[v];
        if (v >= coloring.colors.size()) return static_cast<Vertex>(v);
        if (!c) continue;
        if (!std::binary_search(c->begin(), c->end(), coloring.colors[v])) return static_cast<Vertex>(v);
    }
    return std::nullopt;
}

RainbowResult rainbow_facets(const PseudoComplex& complex, const SpernerColoring& coloring) {
    RainbowResult out;
    std::set<std::vector<Vertex>> sets;
    for (const auto& f : complex.facets()) {
        std::vector<Vertex> colors;
        for (Vertex v : f) colors.push_back(coloring(v));
        std::sort(colors.begin(), colors.end());
        if (std::adjacent_find(colors.begin(), colors.end()) != colors.end()) continue;
        out.facets.push_back(f);
        sets.insert(colors);
    }
    out.color_sets.assign(sets.begin(), sets.end());
    return out;
}

Rational lower_bound(const PseudoComplex& closed_boundary) {
    if (closed_boundary.dim() < 1) throw Error("BadComplex", "lower bound needs d >= 2");
    Rational r(static_cast<long>(closed_boundary.num_facets()) - 2, closed_boundary.dim());
    r.canonicalize();
    return r;
}

PseudoComplex stack(const PseudoComplex& complex, const Face& facet) {
    Face sorted = make_face(facet);
    if (!complex.contains_facet(sorted)) throw Error("NotAFacet", "stack requires a facet of the complex");
    const Vertex apex = complex.num_vertices();
    std::vector<Face> out;
    for (const auto& f : complex.facets())
        if (f != sorted) out.push_back(f);
    for (size_t i = 0; i < sorted.size(); ++i) {
        Face g = without(sorted, i);
        g.push_back(apex);
        out.push_back(std::move(g));
    }
    return PseudoComplex(complex.dim(), std::move(out));
}

PseudoComplex unstack(const PseudoComplex& complex, Vertex vertex) {
    const auto nbrs = complex.neighbors(vertex);
    const size_t n = static_cast<size_t>(complex.dim()) + 1;
    if (nbrs.size() != n) throw Error("NotStackingVertex", "vertex degree is not d+1");
    std::vector<Face> star, rest;
    for (const auto& f : complex.facets())
        (std::binary_search(f.begin(), f.end(), vertex) ? star : rest).push_back(f);
    if (star.size() != n) throw Error("NotStackingVertex", "link is not the boundary of a simplex");
    Face base(nbrs.begin(), nbrs.end());
    if (complex.contains_facet(base))
        throw Error("NotStackingVertex", "removing the vertex would duplicate an existing facet");
    rest.push_back(base);
    std::vector<Face> renumbered;
    for (auto f : rest) {
        for (auto& v : f)
            if (v > vertex) --v;
        renumbered.push_back(std::move(f));
    }
    PseudoComplex out(complex.dim(), std::move(renumbered));
    auto before = validate(complex, false);
    auto after = validate(out, false);
    if (!after.valid() || after.kind != before.kind)
        throw Error("NotStackingVertex", "unstacking does not yield a pseudomanifold of the same kind");
    return out;
}

PseudoComplex simplex(int dim) {
    Face f(static_cast<size_t>(dim) + 1);
    std::iota(f.begin(), f.end(), 0);
    return PseudoComplex(dim, {f});
}

PseudoComplex simplex_boundary(int dim) {
    std::vector<Face> facets;
    for (int skip = 0; skip <= dim + 1; ++skip) {
        Face f;
        for (int v = 0; v <= dim + 1; ++v)
            if (v != skip) f.push_back(v);
        facets.push_back(std::move(f));
    }
    return PseudoComplex(dim, std::move(facets));
}

PseudoComplex octahedron_boundary() {
    std::vector<Face> facets;
    for (int a : {0, 1})
        for (int b : {2, 3})
            for (int c : {4, 5}) facets.push_back({a, b, c});
    return PseudoComplex(2, std::move(facets));
}

PseudoComplex icosahedron_boundary() {
    // 0 top, 1..5 upper ring, 6..10 lower ring, 11 bottom.
    std::vector<Face> facets;
    for (int k = 0; k < 5; ++k) {
        int u = 1 + k, un = 1 + (k + 1) % 5;
        int l = 6 + k, ln = 6 + (k + 1) % 5;
        facets.push_back(make_face({0, u, un}));
        facets.push_back(make_face({11, l, ln}));
        facets.push_back(make_face({u, un, l}));
        facets.push_back(make_face({un, l, ln}));
    }
    return PseudoComplex(2, std::move(facets));
}

PseudoComplex cyclic_polytope_boundary(int n, int dim) {
    std::vector<Face> facets;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != dim) continue;
        bool ok = true;
        // Between any two non-members, the number of members must be even.
        for (int i = 0; i < n && ok; ++i) {
            if (mask & (1u << i)) continue;
            for (int j = i + 1; j < n; ++j) {
                if (mask & (1u << j)) continue;
                int between = 0;
                for (int t = i + 1; t < j; ++t)
                    if (mask & (1u << t)) ++between;
                if (between % 2 != 0) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) continue;
        Face f;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) f.push_back(i);
        facets.push_back(std::move(f));
    }
    return PseudoComplex(dim - 1, std::move(facets));
}

PseudoComplex geometric_simplex(int dim) {
    std::vector<RationalVector> coords;
    for (int v = 0; v <= dim; ++v) {
        RationalVector c(static_cast<size_t>(dim) + 1);
        c[static_cast<size_t>(v)] = 1;
        coords.push_back(std::move(c));
    }
    PseudoComplex s = simplex(dim);
    return PseudoComplex(dim, s.facets(), std::move(coords));
}

}  // namespace fairdiv::simplicial

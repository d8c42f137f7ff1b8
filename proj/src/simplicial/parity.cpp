#include "fairdiv/simplicial/parity.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fairdiv::simplicial {

namespace {

using Matrix = RationalMatrix;

// Sign of the polynomial sum_k c[k] e^k for infinitesimal e > 0.
int lex_sign(const RationalVector& c) {
    for (const auto& x : c)
        if (x != 0) return sgn(x);
    return 0;
}

// Barycentric coordinates (as polynomials in e) of the perturbed target inside
// the simplex spanned by the images of `face`, using the first `rows`
// coordinates. Empty when the images are affinely dependent.
std::optional<Matrix> perturbed_weights(const AffineTestMap& map, const Face& face, size_t rows) {
    const size_t n = face.size();
    Matrix a(n, RationalVector(n));
    for (size_t j = 0; j < n; ++j) {
        a[0][j] = 1;
        const auto& img = map.images[static_cast<size_t>(face[j])];
        for (size_t r = 0; r < rows; ++r) a[r + 1][j] = img[r];
    }
    return inverse(std::move(a));
}

bool all_positive(const Matrix& weights) {
    return std::all_of(weights.begin(), weights.end(), [](const RationalVector& row) { return lex_sign(row) > 0; });
}

Face without(const Face& f, size_t i) {
    Face r = f;
    r.erase(r.begin() + static_cast<long>(i));
    return r;
}

struct DoorInfo {
    bool door = false;
    int last_sign = 0;  // sign of f_d - e^d at the crossing
};

DoorInfo classify_ridge(const AffineTestMap& map, const Face& ridge, size_t d) {
    DoorInfo info;
    auto w = perturbed_weights(map, ridge, d - 1);
    if (!w || !all_positive(*w)) return info;
    info.door = true;
    RationalVector value(d + 1);
    for (size_t i = 0; i < ridge.size(); ++i) {
        const Rational& fd = map.images[static_cast<size_t>(ridge[i])][d - 1];
        for (size_t k = 0; k < d; ++k) value[k] += (*w)[i][k] * fd;
    }
    value[d] = -1;
    info.last_sign = lex_sign(value);
    return info;
}

}  // namespace

bool facet_contains_zero(const AffineTestMap& map, const Face& facet) {
    auto w = perturbed_weights(map, facet, facet.size() - 1);
    return w && all_positive(*w);
}

ParityResult parity_counts(const AffineTestMap& map) {
    const auto& K = map.complex;
    const size_t d = static_cast<size_t>(K.dim());
    if (d < 1) throw Error("DegenerateMap", "complex must have dimension at least 1");
    for (Vertex v = 0; v < K.num_vertices(); ++v)
        if (map.images.size() <= static_cast<size_t>(v) || map.images[static_cast<size_t>(v)].size() != d)
            throw Error("DegenerateMap", "vertex " + std::to_string(v) + " has no image in R^" + std::to_string(d));

    const auto& facets = K.facets();
    std::map<Face, std::vector<size_t>> owners;
    for (size_t i = 0; i < facets.size(); ++i)
        for (size_t j = 0; j < facets[i].size(); ++j) owners[without(facets[i], j)].push_back(i);

    std::map<Face, DoorInfo> ridges;
    for (const auto& [ridge, own] : owners) {
        if (own.size() > 2) throw Error("DegenerateMap", "ridge in more than two facets");
        ridges.emplace(ridge, classify_ridge(map, ridge, d));
    }

    // Doors of every facet, ordered by the id of the vertex opposite the door.
    std::vector<std::vector<Face>> doors(facets.size());
    for (size_t i = 0; i < facets.size(); ++i) {
        for (size_t j = 0; j < facets[i].size(); ++j) {
            Face r = without(facets[i], j);
            if (ridges.at(r).door) doors[i].push_back(std::move(r));
        }
        if (!doors[i].empty() && doors[i].size() != 2)
            throw Error("DegenerateMap", "facet with " + std::to_string(doors[i].size()) + " doors");
    }

    ParityResult out;
    std::vector<bool> visited(facets.size(), false);

    auto walk = [&](size_t start, const Face& entry, LevelPath& path) {
        size_t cur = start;
        Face in = entry;
        while (true) {
            visited[cur] = true;
            path.facets.push_back(facets[cur]);
            if (facet_contains_zero(map, facets[cur])) ++path.zeros;
            const Face& exit = doors[cur][0] == in ? doors[cur][1] : doors[cur][0];
            const auto& own = owners.at(exit);
            if (own.size() == 1) {
                path.ends.push_back(exit);
                return;
            }
            size_t next = own[0] == cur ? own[1] : own[0];
            if (visited[next]) return;  // closed a circle
            cur = next;
            in = exit;
        }
    };

    for (const auto& [ridge, info] : ridges) {
        if (!info.door || owners.at(ridge).size() != 1) continue;
        if (info.last_sign > 0) ++out.r_plus;
        size_t f = owners.at(ridge)[0];
        if (visited[f]) continue;
        LevelPath path;
        path.ends.push_back(ridge);
        walk(f, ridge, path);
        out.r += path.zeros;
        out.paths.push_back(std::move(path));
    }
    for (size_t i = 0; i < facets.size(); ++i) {
        if (visited[i] || doors[i].empty()) continue;
        LevelPath circle;
        walk(i, doors[i][1], circle);
        out.r += circle.zeros;
        out.paths.push_back(std::move(circle));
    }
    for (size_t i = 0; i < facets.size(); ++i)
        if (!visited[i] && facet_contains_zero(map, facets[i]))
            throw Error("DegenerateMap", "zero outside the traced level set");
    return out;
}

Face rainbow_for_face(const PseudoComplex& ball, const SpernerColoring& coloring, const Face& sigma) {
    const size_t d = static_cast<size_t>(ball.dim());
    if (sigma.size() != d) throw Error("NotFound", "sigma must have d vertices");
    const Face colors = make_face(sigma);

    // v_1..v_{d-1} = (e_i, 1), v_d = (-1..-1, 1), v_0 = (0..0, -1).
    std::vector<RationalVector> corner(d + 1, RationalVector(d));
    for (size_t i = 1; i <= d; ++i) {
        corner[i][d - 1] = 1;
        for (size_t k = 0; k + 1 < d; ++k) corner[i][k] = i == d ? -1 : (k + 1 == i ? 1 : 0);
    }
    corner[0][d - 1] = -1;

    AffineTestMap map{ball, {}};
    for (Vertex v = 0; v < ball.num_vertices(); ++v) {
        auto it = std::lower_bound(colors.begin(), colors.end(), coloring(v));
        size_t slot = (it != colors.end() && *it == coloring(v)) ? static_cast<size_t>(it - colors.begin()) + 1 : 0;
        map.images.push_back(corner[slot]);
    }

    ParityResult parity = parity_counts(map);
    for (const auto& path : parity.paths)
        for (const auto& f : path.facets)
            if (facet_contains_zero(map, f)) return f;
    throw Error("NotFound", "no facet carries the colors of sigma plus another; coloring is not Sperner");
}

}  // namespace fairdiv::simplicial

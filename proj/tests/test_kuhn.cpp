#include "doctest.h"

#include "fairdiv/error.hpp"
#include "fairdiv/simplicial/kuhn.hpp"

#include <set>

using namespace fairdiv;
using namespace fairdiv::simplicial;

namespace {

std::vector<int> support(const GridPoint& s, int m) {
    std::vector<int> out;
    int prev = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        int next = i < s.size() ? s[i] : m;
        if (next > prev) out.push_back(static_cast<int>(i));
        prev = next;
    }
    return out;
}

}  // namespace

TEST_CASE("grid enumeration") {
    CHECK(grid_points(2, 3).size() == 10);
    CHECK(grid_points(3, 4).size() == 35);
    CHECK(grid_to_point({1, 3}, 4) == RationalVector{Rational(1, 4), Rational(1, 2), Rational(1, 4)});
}

TEST_CASE("walk ends on a fully labeled simplex for hashed Sperner labels") {
    for (int d = 1; d <= 4; ++d)
        for (int m : {1, 2, 5, 9})
            for (unsigned seed = 0; seed < 15; ++seed) {
                auto label = [&](const GridPoint& s) {
                    auto sup = support(s, m);
                    size_t h = seed * 2654435761u;
                    for (int v : s) h = h * 31 + static_cast<size_t>(v);
                    return sup[(h >> 7) % sup.size()];
                };
                auto r = kuhn_walk(d, m, label);
                REQUIRE(r.vertices.size() == static_cast<size_t>(d) + 1);
                std::set<int> labels(r.labels.begin(), r.labels.end());
                CHECK(labels.size() == static_cast<size_t>(d) + 1);
                for (size_t j = 0; j < r.vertices.size(); ++j) CHECK(label(r.vertices[j]) == r.labels[j]);
                for (size_t j = 1; j < r.vertices.size(); ++j) {
                    int diff = 0;
                    for (size_t t = 0; t < r.vertices[j].size(); ++t) diff += r.vertices[j][t] - r.vertices[j - 1][t];
                    CHECK(diff == 1);
                }
            }
}

TEST_CASE("argmax labels lead to the barycenter") {
    const int m = 60;
    auto label = [&](const GridPoint& s) {
        auto x = grid_to_point(s, m);
        int best = 0;
        for (int i = 1; i < static_cast<int>(x.size()); ++i)
            if (x[static_cast<size_t>(i)] > x[static_cast<size_t>(best)]) best = i;
        return best;
    };
    auto r = kuhn_walk(2, m, label);
    auto x = grid_to_point(r.vertices[0], m);
    for (const auto& xi : x) CHECK(abs(xi - Rational(1, 3)) <= Rational(1, 20));
}

TEST_CASE("non-Sperner labels are rejected") {
    CHECK_THROWS_AS(kuhn_walk(2, 3, [](const GridPoint&) { return 2; }), Error);
}

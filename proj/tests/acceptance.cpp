// Acceptance checks, one PASS/FAIL line per criterion. Each criterion is
// checked against an oracle written here, independent of the code under test.
// Usage: acceptance [criterion...]

#include "fairdiv/division/division.hpp"
#include "fairdiv/error.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/kkm/kkm.hpp"
#include "fairdiv/necklace/binary.hpp"
#include "fairdiv/necklace/exhaustive.hpp"
#include "fairdiv/service/http.hpp"
#include "fairdiv/service/service.hpp"
#include "fairdiv/simplicial/complex.hpp"
#include "fairdiv/simplicial/parity.hpp"

#include <Eigen/Dense>
#include <httplib.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

using namespace fairdiv;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    std::string first_failure;

    void fail(const std::string& why) {
        if (first_failure.empty()) first_failure = why;
        pass = false;
    }
    void expect(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

// ---------------------------------------------------------------- necklaces

// Bead-level content: thief t gets the overlap of its pieces with every bead,
// with the necklace scaled to [0, N].
std::vector<std::vector<Rational>> oracle_tally(const necklace::Necklace& n, int k, const necklace::Splitting& s) {
    const long len = static_cast<long>(n.size());
    std::vector<std::vector<Rational>> tally(static_cast<size_t>(k), std::vector<Rational>(static_cast<size_t>(n.q), 0));
    std::vector<Rational> bounds{0};
    for (const auto& c : s.cuts) bounds.push_back(c * len);
    bounds.push_back(Rational(len));
    for (size_t p = 0; p + 1 < bounds.size(); ++p) {
        const int owner = s.owners[p] - 1;
        for (long b = 0; b < len; ++b) {
            const Rational lo = std::max(bounds[p], Rational(b)), hi = std::min(bounds[p + 1], Rational(b + 1));
            if (hi > lo) tally[static_cast<size_t>(owner)][static_cast<size_t>(n.beads[static_cast<size_t>(b)])] += hi - lo;
        }
    }
    return tally;
}

bool oracle_fair(const necklace::Necklace& n, int k, const necklace::Splitting& s) {
    if (s.owners.size() != s.cuts.size() + 1) return false;
    for (int o : s.owners)
        if (o < 1 || o > k) return false;
    const auto counts = n.counts();
    const auto tally = oracle_tally(n, k, s);
    for (const auto& row : tally)
        for (size_t t = 0; t < counts.size(); ++t)
            if (row[t] != make_rational(counts[t], k)) return false;
    return true;
}

// Pairs of thieves holding consecutive nonempty pieces. An empty piece in
// between separates its neighbours.
std::set<std::pair<int, int>> adjacent_pairs(const std::vector<int>& owners, const std::vector<bool>& nonempty) {
    std::set<std::pair<int, int>> out;
    for (size_t i = 0; i + 1 < owners.size(); ++i)
        if (nonempty[i] && nonempty[i + 1] && owners[i] != owners[i + 1])
            out.insert({std::min(owners[i], owners[i + 1]), std::max(owners[i], owners[i + 1])});
    return out;
}

std::set<std::pair<int, int>> adjacent_pairs(const necklace::Splitting& s) {
    std::vector<Rational> bounds{0};
    bounds.insert(bounds.end(), s.cuts.begin(), s.cuts.end());
    bounds.push_back(1);
    std::vector<bool> nonempty;
    for (size_t p = 0; p + 1 < bounds.size(); ++p) nonempty.push_back(bounds[p + 1] > bounds[p]);
    return adjacent_pairs(s.owners, nonempty);
}

bool one_bit_apart(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return false;
    int diff = 0;
    for (size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
    return diff == 1;
}

// Some injective labeling of thieves by t-bit strings puts every adjacent pair one bit apart.
bool oracle_binary_possible(const std::set<std::pair<int, int>>& adjacent, int k) {
    int t = 0;
    while ((1 << t) < k) ++t;
    std::vector<int> label(static_cast<size_t>(k), -1);
    std::vector<bool> used(static_cast<size_t>(1) << t, false);
    std::function<bool(int)> assign = [&](int thief) -> bool {
        if (thief == k) {
            for (const auto& [a, b] : adjacent)
                if (__builtin_popcount(static_cast<unsigned>(label[static_cast<size_t>(a - 1)] ^ label[static_cast<size_t>(b - 1)])) != 1)
                    return false;
            return true;
        }
        for (size_t v = 0; v < used.size(); ++v) {
            if (used[v]) continue;
            used[v] = true;
            label[static_cast<size_t>(thief)] = static_cast<int>(v);
            if (assign(thief + 1)) return true;
            used[v] = false;
        }
        return false;
    };
    return assign(0);
}

/**
 * Brute force over every placement of `cuts` cuts at multiples of 1/resolution
 * of a bead. With `order` the owners are fixed; otherwise owners are searched
 * with per-thief budgets, and `binary` asks for a hypercube labeling.
 */
bool oracle_splitting_exists(const std::vector<int>& beads, int q, int k, int cuts, int resolution,
                             const std::vector<int>& order, bool binary) {
    const int units = static_cast<int>(beads.size()) * resolution;
    std::vector<std::vector<int>> prefix(static_cast<size_t>(units) + 1, std::vector<int>(static_cast<size_t>(q), 0));
    for (int u = 0; u < units; ++u) {
        prefix[static_cast<size_t>(u) + 1] = prefix[static_cast<size_t>(u)];
        ++prefix[static_cast<size_t>(u) + 1][static_cast<size_t>(beads[static_cast<size_t>(u / resolution)])];
    }
    std::vector<int> target(static_cast<size_t>(q));
    for (int t = 0; t < q; ++t) target[static_cast<size_t>(t)] = prefix.back()[static_cast<size_t>(t)] / k;

    std::vector<int> pos(static_cast<size_t>(cuts) + 2, 0);
    pos.back() = units;
    auto piece = [&](size_t p, int t) { return prefix[static_cast<size_t>(pos[p + 1])][static_cast<size_t>(t)] - prefix[static_cast<size_t>(pos[p])][static_cast<size_t>(t)]; };

    auto check_owners = [&](const std::vector<int>& owners) {
        std::vector<std::vector<int>> got(static_cast<size_t>(k), std::vector<int>(static_cast<size_t>(q), 0));
        for (size_t p = 0; p < owners.size(); ++p)
            for (int t = 0; t < q; ++t) got[static_cast<size_t>(owners[p] - 1)][static_cast<size_t>(t)] += piece(p, t);
        for (const auto& row : got)
            if (row != target) return false;
        if (!binary) return true;
        std::vector<bool> nonempty;
        for (size_t p = 0; p < owners.size(); ++p) nonempty.push_back(pos[p + 1] > pos[p]);
        return oracle_binary_possible(adjacent_pairs(owners, nonempty), k);
    };

    const size_t pieces = static_cast<size_t>(cuts) + 1;
    std::vector<int> owners(pieces, 0);
    std::vector<std::vector<int>> left(static_cast<size_t>(k), target);
    std::function<bool(size_t)> owner_search = [&](size_t p) -> bool {
        if (p == pieces) return check_owners(owners);
        for (int o = 1; o <= k; ++o) {
            auto& budget = left[static_cast<size_t>(o - 1)];
            bool fits = true;
            for (int t = 0; t < q; ++t) fits = fits && piece(p, t) <= budget[static_cast<size_t>(t)];
            if (!fits) continue;
            for (int t = 0; t < q; ++t) budget[static_cast<size_t>(t)] -= piece(p, t);
            owners[p] = o;
            const bool found = owner_search(p + 1);
            for (int t = 0; t < q; ++t) budget[static_cast<size_t>(t)] += piece(p, t);
            if (found) return true;
        }
        return false;
    };

    std::function<bool(size_t)> place = [&](size_t i) -> bool {
        if (i == static_cast<size_t>(cuts) + 1) return order.empty() ? owner_search(0) : check_owners(order);
        for (int u = pos[i - 1]; u <= units; ++u) {
            pos[i] = u;
            if (place(i + 1)) return true;
        }
        return false;
    };
    return place(1);
}

std::vector<int> random_two_color(std::mt19937& rng, int k, int max_beads) {
    std::uniform_int_distribution<int> per(0, max_beads / k);
    int a = 0, b = 0;
    while (a + b == 0 || (a + b) * k > max_beads) a = per(rng), b = per(rng);
    std::vector<int> beads;
    for (int i = 0; i < a * k; ++i) beads.push_back(0);
    for (int i = 0; i < b * k; ++i) beads.push_back(1);
    std::shuffle(beads.begin(), beads.end(), rng);
    return beads;
}

void criterion1(Verdict& v) {
    std::mt19937 rng(20260101);
    double slowest = 0;
    int passed = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 2 + trial % 7;
        const auto n = necklace::make_necklace(random_two_color(rng, k, 64));
        const auto start = Clock::now();
        necklace::Splitting s;
        try {
            s = necklace::solve_binary_two_color(n, k);
        } catch (const Error& e) {
            v.fail("trial " + std::to_string(trial) + ": " + e.what());
            continue;
        }
        const double took = seconds_since(start);
        slowest = std::max(slowest, took);
        std::string why;
        if (!oracle_fair(n, k, s)) why = "unfair";
        if (why.empty() && s.size() > static_cast<size_t>(2 * (k - 1))) why = std::to_string(s.size()) + " cuts";
        // Binary: distinct t-bit strings, adjacent nonempty pieces one bit apart.
        int t = 0;
        while ((1 << t) < k) ++t;
        bool strings_ok = s.strings.size() == static_cast<size_t>(k) &&
                          std::set<std::string>(s.strings.begin(), s.strings.end()).size() == static_cast<size_t>(k);
        for (const auto& str : s.strings) strings_ok = strings_ok && str.size() == static_cast<size_t>(t);
        if (why.empty() && !strings_ok) why = "bad strings";
        for (const auto& [a, b] : adjacent_pairs(s))
            if (why.empty() && !one_bit_apart(s.strings[static_cast<size_t>(a - 1)], s.strings[static_cast<size_t>(b - 1)]))
                why = "thieves " + std::to_string(a) + " and " + std::to_string(b) + " adjacent";
        if (why.empty() && s.owners.front() != s.owners.back()) why = "ends owned by different thieves";
        if (why.empty() && took >= 1.0) why = "slower than 1 s";
        if (why.empty())
            ++passed;
        else
            v.fail("trial " + std::to_string(trial) + " (k=" + std::to_string(k) + ", N=" + std::to_string(n.size()) + "): " + why);
    }
    v.detail << passed << "/500 fair, binary, size <= 2(k-1), same owner for first and last piece; slowest " << slowest << " s";
}

void criterion2(Verdict& v) {
    const auto start = Clock::now();
    long checked = 0;
    for (int k = 2; k <= 3; ++k) {
        for (int len = k; len <= 12; len += k) {
            for (long mask = 0; mask < (1L << len); ++mask) {
                std::vector<int> beads;
                int ones = 0;
                for (int i = 0; i < len; ++i) beads.push_back(static_cast<int>((mask >> i) & 1)), ones += beads.back();
                if (ones % k != 0 || (len - ones) % k != 0) continue;
                const int q = (ones == 0 || ones == len) ? 1 : 2;
                // make_necklace numbers types by first appearance.
                const auto n = necklace::make_necklace(beads);
                const auto s = necklace::solve_exhaustive(n, k, (k - 1) * q, necklace::ConstraintGraph::free());
                ++checked;
                if (!s || !oracle_fair(n, k, *s) || s->size() > static_cast<size_t>((k - 1) * q)) {
                    std::string text;
                    for (int b : beads) text += static_cast<char>('A' + b);
                    v.fail("no valid splitting for " + text + " k=" + std::to_string(k));
                }
            }
        }
    }
    const double took = seconds_since(start);
    v.expect(took < 300, "took longer than 5 minutes");
    v.detail << checked << " necklaces (q <= 2, k <= 3, N <= 12), all split with <= (k-1)q cuts in " << took << " s";
}

void criterion3(Verdict& v) {
    struct Case {
        std::string beads;
        int k, cuts;
        std::vector<int> order;
        bool binary;
    };
    const std::vector<Case> cases{{"GGGRRRGGG", 3, 4, {1, 2, 3, 1, 2}, false},
                                  {"GGGRRRRGGGGG", 4, 6, {1, 2, 3, 4, 1, 2, 3}, false},
                                  {"GGGRRRGGGEEE", 3, 6, {}, true}};
    for (const auto& c : cases) {
        const auto n = necklace::parse_necklace(c.beads);
        necklace::ExhaustiveOptions options;
        options.owner_order = c.order;
        const auto graph = c.binary ? necklace::ConstraintGraph::binary(necklace::hypercube_dim(c.k)) : necklace::ConstraintGraph::free();
        const auto start = Clock::now();
        const auto found = necklace::solve_exhaustive(n, c.k, c.cuts, graph, options);
        const double took = seconds_since(start);
        // The oracle also allows cuts halfway through beads.
        const bool oracle = oracle_splitting_exists(n.beads, n.q, c.k, c.cuts, 2, c.order, c.binary);
        v.expect(!found, c.beads + ": solver found a splitting");
        v.expect(!oracle, c.beads + ": oracle found a splitting");
        v.expect(took < 10, c.beads + ": slower than 10 s");
        v.detail << c.beads << " none (" << took << " s); ";
    }
    // The oracle is not vacuous: the same necklaces split once the constraint is lifted.
    v.expect(oracle_splitting_exists(necklace::parse_necklace("GGGRRRGGG").beads, 2, 3, 4, 1, {}, false),
             "oracle finds no free splitting of GGGRRRGGG");
    v.expect(oracle_splitting_exists(necklace::parse_necklace("GGGRRRGGGEEE").beads, 3, 3, 6, 1, {}, false),
             "oracle finds no free splitting of GGGRRRGGGEEE");
    v.detail << "oracle agrees and finds free splittings";
}

void criterion4(Verdict& v) {
    std::mt19937 rng(4404);
    int passed = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int q = 1 + trial % 2;
        std::vector<int> beads;
        std::uniform_int_distribution<int> per(1, q == 1 ? 4 : 2);
        for (int t = 0; t < q; ++t) {
            const int a = per(rng);
            for (int i = 0; i < 4 * a; ++i) beads.push_back(t);
        }
        std::shuffle(beads.begin(), beads.end(), rng);
        const auto n = necklace::make_necklace(beads);
        necklace::Splitting s;
        try {
            s = necklace::solve_cyclic_k4(n);
        } catch (const Error& e) {
            v.fail("trial " + std::to_string(trial) + ": " + e.what());
            continue;
        }
        std::string why;
        if (!oracle_fair(n, 4, s)) why = "unfair";
        if (why.empty() && s.size() > static_cast<size_t>(3 * n.q)) why = std::to_string(s.size()) + " cuts";
        for (const auto& [a, b] : adjacent_pairs(s))
            if (why.empty() && ((a == 1 && b == 3) || (a == 2 && b == 4)))
                why = "thieves " + std::to_string(a) + " and " + std::to_string(b) + " adjacent";
        if (why.empty())
            ++passed;
        else
            v.fail("trial " + std::to_string(trial) + " (N=" + std::to_string(n.size()) + "): " + why);
    }
    v.detail << passed << "/100 cyclic splittings with <= 3q cuts (N <= 16)";
}

// ---------------------------------------------------------------- Sperner and parity

using simplicial::CarrierMap;
using simplicial::Face;
using simplicial::PseudoComplex;
using simplicial::SpernerColoring;
using simplicial::Vertex;

CarrierMap subdivided(const PseudoComplex& base, CarrierMap carrier, int rounds) {
    (void)base;
    for (int i = 0; i < rounds; ++i) {
        auto step = simplicial::barycentric(carrier.source).second;
        carrier = simplicial::compose(step, carrier);
    }
    return carrier;
}

SpernerColoring random_coloring(const CarrierMap& carrier, std::mt19937& rng) {
    SpernerColoring c;
    const int n = carrier.target.num_vertices();
    for (Vertex v = 0; v < carrier.source.num_vertices(); ++v) {
        const auto& face = carrier.of(v);
        c.colors.push_back(face ? (*face)[rng() % face->size()] : static_cast<Vertex>(rng() % static_cast<unsigned>(n)));
    }
    return c;
}

void criterion5(Verdict& v) {
    std::mt19937 rng(555);
    int odd = 0;
    for (int d = 1; d <= 4; ++d) {
        const PseudoComplex s = simplicial::simplex(d);
        const CarrierMap carrier = subdivided(s, simplicial::identity_carrier(s), d == 4 ? 1 : 2);
        for (int trial = 0; trial < 50; ++trial) {
            const auto col = random_coloring(carrier, rng);
            int full = 0;
            for (const auto& f : carrier.source.facets()) {
                std::set<Vertex> colors;
                for (Vertex x : f) colors.insert(col(x));
                full += colors.size() == static_cast<size_t>(d) + 1;
            }
            if (full % 2 == 1)
                ++odd;
            else
                v.fail("even fully labeled count on subdivided simplex, d=" + std::to_string(d));
        }
    }
    v.detail << odd << "/200 subdivided-simplex colorings odd; ";

    int met = 0;
    for (const auto& [name, b] : {std::pair{std::string("octahedron"), simplicial::octahedron_boundary()},
                                  std::pair{std::string("icosahedron"), simplicial::icosahedron_boundary()}}) {
        // (f - 2) / (d - 1) with d - 1 = 2 for these 2-spheres.
        const Rational bound = make_rational(static_cast<long>(b.num_facets()) - 2, 2);
        const PseudoComplex ball = simplicial::cone(b);
        const CarrierMap carrier = subdivided(ball, simplicial::boundary_carrier(ball), 1);
        size_t fewest = SIZE_MAX;
        for (int trial = 0; trial < 50; ++trial) {
            const auto col = random_coloring(carrier, rng);
            std::set<std::set<Vertex>> sets;
            for (const auto& f : carrier.source.facets()) {
                std::set<Vertex> colors;
                for (Vertex x : f) colors.insert(col(x));
                if (colors.size() == f.size()) sets.insert(colors);
            }
            fewest = std::min(fewest, sets.size());
            if (Rational(static_cast<long>(sets.size())) >= bound)
                ++met;
            else
                v.fail(name + ": " + std::to_string(sets.size()) + " color sets");
        }
        v.expect(simplicial::lower_bound(b) == bound, name + ": library bound differs");
        v.detail << name << " bound " << bound.get_str() << ", fewest " << fewest << "; ";
    }
    v.detail << met << "/100 ball colorings meet the bound";
}

// Cramer's rule with exact rationals at the point (e, e^2, ...), e = 2^-200.
using RMatrix = std::vector<RationalVector>;

Rational det(const RMatrix& m) {
    const size_t n = m.size();
    if (n == 1) return m[0][0];
    Rational total = 0;
    for (size_t c = 0; c < n; ++c) {
        if (m[0][c] == 0) continue;
        RMatrix minor;
        for (size_t r = 1; r < n; ++r) {
            RationalVector row;
            for (size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(m[r][j]);
            minor.push_back(row);
        }
        const Rational term = m[0][c] * det(minor);
        total += c % 2 == 0 ? term : Rational(-term);
    }
    return total;
}

const Rational& tiny() {
    static const Rational e = [] {
        mpz_class den = 1;
        den <<= 200;
        return Rational(1, den);
    }();
    return e;
}

std::optional<RationalVector> perturbed_weights(const std::vector<RationalVector>& images, const Face& face, size_t rows) {
    const size_t n = face.size();
    RMatrix a(n, RationalVector(n));
    RationalVector rhs(n);
    Rational power = 1;
    for (size_t r = 0; r < n; ++r) rhs[r] = power, power *= tiny();
    for (size_t j = 0; j < n; ++j) {
        a[0][j] = 1;
        for (size_t r = 0; r < rows; ++r) a[r + 1][j] = images[static_cast<size_t>(face[j])][r];
    }
    const Rational D = det(a);
    if (D == 0) return std::nullopt;
    RationalVector w(n);
    for (size_t j = 0; j < n; ++j) {
        RMatrix b = a;
        for (size_t r = 0; r < n; ++r) b[r][j] = rhs[r];
        w[j] = det(b) / D;
    }
    return w;
}

std::pair<int, int> oracle_zero_counts(const simplicial::AffineTestMap& map) {
    const size_t d = static_cast<size_t>(map.complex.dim());
    int r = 0;
    std::map<Face, int> ridges;
    for (const auto& f : map.complex.facets()) {
        const auto w = perturbed_weights(map.images, f, d);
        bool inside = w.has_value();
        if (w)
            for (const auto& x : *w) inside = inside && x > 0;
        r += inside;
        for (size_t i = 0; i < f.size(); ++i) {
            Face g = f;
            g.erase(g.begin() + static_cast<long>(i));
            ++ridges[g];
        }
    }
    int r_plus = 0;
    Rational top = 1;
    for (size_t i = 0; i < d; ++i) top *= tiny();
    for (const auto& [ridge, count] : ridges) {
        if (count != 1) continue;
        const auto w = perturbed_weights(map.images, ridge, d - 1);
        if (!w) continue;
        bool inside = true;
        Rational last = 0;
        for (size_t i = 0; i < ridge.size(); ++i) {
            inside = inside && (*w)[i] > 0;
            last += (*w)[i] * map.images[static_cast<size_t>(ridge[i])][d - 1];
        }
        if (inside && last > top) ++r_plus;
    }
    return {r, r_plus};
}

void criterion6(Verdict& v) {
    std::mt19937 rng(66);
    const std::vector<std::pair<std::string, PseudoComplex>> complexes{
        {"twice-subdivided triangle", simplicial::barycentric(simplicial::barycentric(simplicial::simplex(2)).first).first},
        {"subdivided disk over a pentagon", simplicial::barycentric(simplicial::cone(simplicial::cyclic_polytope_boundary(5, 2))).first},
        {"subdivided tetrahedron", simplicial::barycentric(simplicial::simplex(3)).first},
        {"subdivided ball over the octahedron", simplicial::barycentric(simplicial::cone(simplicial::octahedron_boundary())).first}};
    int agreed = 0, zeros = 0, boundary_zeros = 0;
    for (const auto& [name, k] : complexes) {
        for (int trial = 0; trial < 50; ++trial) {
            const int spread = trial % 2 ? 2 : 6;
            std::uniform_int_distribution<int> pick(-spread, spread);
            simplicial::AffineTestMap map{k, {}};
            for (Vertex x = 0; x < k.num_vertices(); ++x) {
                RationalVector img;
                for (int i = 0; i < k.dim(); ++i) img.push_back(make_rational(pick(rng), 1 + std::abs(pick(rng))));
                map.images.push_back(img);
            }
            const auto got = simplicial::parity_counts(map);
            const auto [r, r_plus] = oracle_zero_counts(map);
            zeros += r;
            boundary_zeros += r_plus;
            const bool ok = got.r == r && got.r_plus == r_plus && (got.r - got.r_plus) % 2 == 0;
            if (ok)
                ++agreed;
            else
                v.fail(name + " trial " + std::to_string(trial) + ": r=" + std::to_string(got.r) + "/" + std::to_string(r) +
                       " r+=" + std::to_string(got.r_plus) + "/" + std::to_string(r_plus));
        }
    }
    v.detail << agreed << "/200 maps with r = r+ (mod 2), both counts equal to the per-facet scan (" << zeros << " zeros, "
             << boundary_zeros << " on the boundary)";
}

// ---------------------------------------------------------------- KKM

void criterion7(Verdict& v) {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> u(0.05, 1);
    std::uniform_int_distribution<int> terms(1, 12);
    int passed = 0;
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n = 3 + static_cast<size_t>(trial % 6);
        kkm::Matrix m(n, std::vector<double>(n, 0.0));
        std::vector<double> w(static_cast<size_t>(terms(rng)));
        double total = 0;
        for (auto& x : w) total += x = u(rng);
        for (double x : w) {
            std::vector<int> p(n);
            std::iota(p.begin(), p.end(), 0);
            std::shuffle(p.begin(), p.end(), rng);
            for (size_t i = 0; i < n; ++i) m[i][static_cast<size_t>(p[i])] += x / total;
        }
        std::vector<kkm::BirkhoffTerm> out;
        try {
            out = kkm::birkhoff(m);
        } catch (const Error& e) {
            v.fail("trial " + std::to_string(trial) + ": " + e.what());
            continue;
        }
        kkm::Matrix back(n, std::vector<double>(n, 0.0));
        bool ok = out.size() <= (n - 1) * (n - 1) + 1;
        for (const auto& t : out) {
            std::vector<int> sorted = t.perm;
            std::sort(sorted.begin(), sorted.end());
            for (size_t i = 0; i < n; ++i) ok = ok && sorted.size() == n && sorted[i] == static_cast<int>(i);
            ok = ok && t.weight > 0;
            if (!ok) break;
            for (size_t i = 0; i < n; ++i) back[i][static_cast<size_t>(t.perm[i])] += t.weight;
        }
        double err = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) err = std::max(err, std::abs(back[i][j] - m[i][j]));
        worst = std::max(worst, err);
        ok = ok && err <= 1e-9;
        if (ok)
            ++passed;
        else
            v.fail("trial " + std::to_string(trial) + " (n=" + std::to_string(n) + ")");
    }
    v.detail << passed << "/100 decompositions, permutation factors, <= (n-1)^2+1 terms, worst error " << worst;
}

// Euclidean distance from x to the convex hull of the vertices: the best
// affine projection over all faces whose weights are nonnegative.
double oracle_distance(const kkm::Point& x, const std::vector<RationalVector>& simplex) {
    const size_t n = simplex.size(), dim = x.size();
    std::vector<Eigen::VectorXd> verts;
    for (const auto& s : simplex) {
        Eigen::VectorXd p(static_cast<Eigen::Index>(dim));
        for (size_t i = 0; i < dim; ++i) p[static_cast<Eigen::Index>(i)] = s[i].get_d();
        verts.push_back(p);
    }
    Eigen::VectorXd target(static_cast<Eigen::Index>(dim));
    for (size_t i = 0; i < dim; ++i) target[static_cast<Eigen::Index>(i)] = x[i];
    double best = 1e300;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<size_t> face;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) face.push_back(i);
        const Eigen::VectorXd& base = verts[face[0]];
        const Eigen::Index m = static_cast<Eigen::Index>(face.size()) - 1;
        Eigen::VectorXd point = base;
        if (m > 0) {
            Eigen::MatrixXd e(static_cast<Eigen::Index>(dim), m);
            for (Eigen::Index j = 0; j < m; ++j) e.col(j) = verts[face[static_cast<size_t>(j) + 1]] - base;
            const Eigen::VectorXd mu = (e.transpose() * e).ldlt().solve(e.transpose() * (target - base));
            if ((mu.array() < -1e-12).any() || mu.sum() > 1 + 1e-12) continue;
            point = base + e * mu;
        }
        best = std::min(best, (point - target).norm());
    }
    return best;
}

double oracle_distance_to_set(const kkm::Cover& cover, int k, const kkm::Point& x) {
    double best = 1e300;
    for (const auto& cell : cover.cells())
        if (std::find(cell.members.begin(), cell.members.end(), k) != cell.members.end())
            best = std::min(best, oracle_distance(x, cell.vertices));
    return best;
}

void criterion8(Verdict& v) {
    std::mt19937 rng(888);
    std::uniform_int_distribution<int> weight(1, 5);
    const double eps = 1e-3;
    int passed = 0, instances = 0;
    double slowest = 0, worst_residual = 0, worst_distance = 0;
    for (int d = 2; d <= 3; ++d) {
        for (int trial = 0; trial < 4; ++trial) {
            const bool dual = trial >= 2;
            std::vector<kkm::Cover> covers;
            for (int j = 0; j < d; ++j) {
                RationalVector w;
                for (int i = 0; i <= d; ++i) w.push_back(make_rational(weight(rng), 3));
                covers.push_back(kkm::grid_cover(d, 4, w, dual));
            }
            ++instances;
            bool ok = true;
            for (const auto& c : covers) ok = ok && kkm::check_cover(c).ok;
            const auto start = Clock::now();
            kkm::StrongColorfulPoint p;
            try {
                p = kkm::strong_colorful_kkm(covers, eps, dual);
            } catch (const Error& e) {
                v.fail("d=" + std::to_string(d) + " trial " + std::to_string(trial) + ": " + e.what());
                continue;
            }
            const double took = seconds_since(start);
            slowest = std::max(slowest, took);
            const auto f = kkm::strong_kkm_map(covers, eps, dual, p.x);
            double residual = 0;
            for (double value : f) residual = std::max(residual, std::abs(value - 1.0 / (d + 1)));
            worst_residual = std::max(worst_residual, residual);
            ok = ok && residual <= eps && took < 30 && p.picks.size() == static_cast<size_t>(d) + 1;
            for (int i = 0; ok && i <= d; ++i) {
                std::vector<int> row = p.picks[static_cast<size_t>(i)];
                row.push_back(i);
                std::sort(row.begin(), row.end());
                for (int c = 0; c <= d; ++c) ok = ok && row[static_cast<size_t>(c)] == c;
                for (int j = 0; ok && j < d; ++j) {
                    const double dist = oracle_distance_to_set(covers[static_cast<size_t>(j)],
                                                               p.picks[static_cast<size_t>(i)][static_cast<size_t>(j)], p.x);
                    worst_distance = std::max(worst_distance, dist);
                    ok = dist < eps;
                }
            }
            if (ok)
                ++passed;
            else
                v.fail("d=" + std::to_string(d) + " trial " + std::to_string(trial) + (dual ? " (dual)" : ""));
        }
    }
    v.detail << passed << "/" << instances << " instances on simplices of dimension 2 and 3; residual <= " << worst_residual
             << ", pick distance <= " << worst_distance << ", slowest " << slowest << " s";
}

// ---------------------------------------------------------------- division

using division::Density;
using division::Mode;

Density random_density(std::mt19937& rng) {
    std::uniform_int_distribution<int> count(1, 4), value(0, 6), step(1, 8);
    const int pieces = count(rng);
    std::vector<int> cuts{0};
    for (int i = 1; i < pieces; ++i) cuts.push_back(cuts.back() + step(rng));
    const int total = cuts.back() + step(rng);
    cuts.push_back(total);
    std::vector<std::pair<Rational, Rational>> pts;
    for (int c : cuts) pts.push_back({make_rational(c, total), Rational(value(rng) + 1)});
    Rational mass = 0;
    for (size_t i = 1; i < pts.size(); ++i) mass += (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second) / 2;
    for (auto& p : pts) p.second /= mass;
    return Density(pts);
}

// Midpoint sums of the density, independent of the closed-form integral.
double quadrature(const Density& density, double a, double b) {
    const auto& pts = density.points();
    auto at = [&](double t) {
        for (size_t i = 1; i < pts.size(); ++i) {
            const double x0 = pts[i - 1].first.get_d(), x1 = pts[i].first.get_d();
            if (t <= x1 && x1 > x0)
                return pts[i - 1].second.get_d() + (pts[i].second.get_d() - pts[i - 1].second.get_d()) * (t - x0) / (x1 - x0);
        }
        return pts.back().second.get_d();
    };
    const int steps = 20000;
    const double h = (b - a) / steps;
    double sum = 0;
    for (int i = 0; i < steps; ++i) sum += h * at(a + (i + 0.5) * h);
    return sum;
}

double oracle_envy(const RationalVector& x, const std::vector<int>& assignment, const std::vector<Density>& dens, Mode mode) {
    const size_t n = x.size();
    double worst = 0;
    for (size_t j = 0; j < dens.size(); ++j) {
        std::vector<double> worth(n);
        double left = 0;
        for (size_t i = 0; i < n; ++i) {
            if (mode == Mode::Cake) {
                worth[i] = quadrature(dens[j], left, left + x[i].get_d());
                left += x[i].get_d();
            } else {
                worth[i] = -x[i].get_d() * (1 - quadrature(dens[j], double(i) / n, double(i + 1) / n));
            }
        }
        for (double w : worth) worst = std::max(worst, w - worth[static_cast<size_t>(assignment[j])]);
    }
    return worst;
}

void criterion9(Verdict& v) {
    std::mt19937 rng(999);
    const Rational eps(1, 1000);
    int passed = 0, instances = 0;
    double worst_ratio = 0, slowest = 0;
    auto record = [&](bool ok, const std::string& what) {
        ++instances;
        if (ok)
            ++passed;
        else
            v.fail(what);
    };
    for (Mode mode : {Mode::Cake, Mode::Rent}) {
        for (int n = 3; n <= 4; ++n) {
            for (int trial = 0; trial < 3; ++trial) {
                std::vector<Density> dens;
                std::vector<division::AgentProfile> agents;
                for (int j = 0; j < n; ++j) dens.push_back(random_density(rng)), agents.push_back(division::AgentProfile::scripted(dens.back()));
                const Rational bound = division::lipschitz(agents) * eps;
                const std::string tag = division::to_string(mode) + " n=" + std::to_string(n) + " trial " + std::to_string(trial);
                try {
                    const auto start = Clock::now();
                    const auto r = division::envy_free_division(agents, eps, mode);
                    slowest = std::max(slowest, seconds_since(start));
                    const Rational envy = division::envy_report(r.division, r.assignment, agents, mode);
                    const double check = oracle_envy(r.division, r.assignment, dens, mode);
                    worst_ratio = std::max(worst_ratio, Rational(envy / bound).get_d());
                    record(envy <= bound && check <= bound.get_d() + 1e-4, tag);
                } catch (const Error& e) {
                    record(false, tag + ": " + e.what());
                }
                // Secret variant: n - 1 known agents, n pieces.
                std::vector<Density> known_dens(dens.begin(), dens.end() - 1);
                std::vector<division::AgentProfile> known(agents.begin(), agents.end() - 1);
                const Rational known_bound = division::lipschitz(known) * eps;
                try {
                    const auto start = Clock::now();
                    const auto r = division::secret_preference_division(known, eps, mode);
                    slowest = std::max(slowest, seconds_since(start));
                    bool ok = r.rows.size() == static_cast<size_t>(n);
                    for (const auto& row : r.rows) {
                        const Rational envy = division::envy_report(r.division, row, known, mode);
                        worst_ratio = std::max(worst_ratio, Rational(envy / known_bound).get_d());
                        ok = ok && envy <= known_bound && oracle_envy(r.division, row, known_dens, mode) <= known_bound.get_d() + 1e-4;
                    }
                    record(ok, "secret " + tag);
                } catch (const Error& e) {
                    record(false, "secret " + tag + ": " + e.what());
                }
            }
        }
    }
    v.detail << passed << "/" << instances << " cake, rent and secret instances within L*eps (eps = 1/1000); worst envy "
             << worst_ratio << " L*eps; slowest " << slowest << " s";
}

// ---------------------------------------------------------------- service

void criterion10(Verdict& v) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("fairdiv-acceptance-" + std::to_string(std::random_device{}()));
    fs::remove_all(dir);
    service::ServiceConfig config;
    config.data_dir = dir;
    config.max_pieces = 6;

    std::mt19937 rng(1010);
    std::map<std::string, std::string> results;  // id -> result bytes
    int scripted_equal = 0, scripted = 0;
    {
        service::Service svc(config);
        service::HttpServer server(svc);
        const int port = server.bind("127.0.0.1", 0);
        if (port <= 0) {
            v.fail("cannot bind a port");
            return;
        }
        std::thread thread([&] { server.listen(); });
        httplib::Client client("127.0.0.1", port);
        client.set_read_timeout(120, 0);

        // Scripted sessions through HTTP against direct library calls.
        for (Mode mode : {Mode::Cake, Mode::Rent}) {
            for (bool secret : {false, true}) {
                for (int n = 3; n <= 4; ++n) {
                    std::vector<division::AgentProfile> agents;
                    json specs = json::array();
                    const int count = secret ? n - 1 : n;
                    for (int j = 0; j < count; ++j) {
                        agents.push_back(division::AgentProfile::scripted(random_density(rng)));
                        specs.push_back(io::profile_json(agents.back()));
                    }
                    const json body{{"mode", division::to_string(mode)}, {"agents", specs}, {"eps", "1/200"}, {"secret", secret}};
                    auto created = client.Post("/sessions", body.dump(), "application/json");
                    if (!created || created->status != 201) {
                        v.fail("create failed");
                        continue;
                    }
                    const std::string id = json::parse(created->body)["id"];
                    auto got = client.Get("/sessions/" + id + "/result");
                    const json result = json::parse(got->body);
                    results[id] = got->body;
                    ++scripted;
                    bool equal = result["state"] == "done";
                    if (secret) {
                        const auto direct = division::secret_preference_division(agents, Rational(1, 200), mode);
                        equal = equal && io::vector_from(result["division"]) == direct.division &&
                                result["pick_table"].get<std::vector<std::vector<int>>>() == direct.rows;
                    } else {
                        const auto direct = division::envy_free_division(agents, Rational(1, 200), mode);
                        equal = equal && io::vector_from(result["division"]) == direct.division &&
                                result["assignment"].get<std::vector<int>>() == direct.assignment && result["mesh"] == direct.mesh;
                    }
                    if (equal)
                        ++scripted_equal;
                    else
                        v.fail("scripted " + division::to_string(mode) + (secret ? " secret" : "") + " differs from the library");
                }
            }
        }

        // Interactive sessions answered over HTTP by scripted stand-ins.
        auto drive = [&](const std::string& id, const std::vector<std::optional<Density>>& stand_ins, Mode mode) {
            for (int round = 0; round < 100000; ++round) {
                bool asked = false;
                for (size_t j = 0; j < stand_ins.size(); ++j) {
                    if (!stand_ins[j]) continue;
                    auto q = client.Get("/sessions/" + id + "/queries?agent=" + std::to_string(j));
                    const json listed = json::parse(q->body);
                    for (const auto& query : listed["queries"]) {
                        const auto x = io::vector_from(query["division"]);
                        const json answer{{"agent", j}, {"division", query["division"]},
                                          {"preferred", division::scripted_preference(*stand_ins[j], x, mode)}};
                        auto r = client.Post("/sessions/" + id + "/answers", answer.dump(), "application/json");
                        if (!r || r->status != 200) return false;
                        asked = true;
                    }
                }
                if (!asked) return true;
            }
            return false;
        };
        const std::vector<std::pair<json, std::vector<std::optional<Density>>>> interactive{
            {json{{"mode", "rent"}, {"agents", {{{"kind", "interactive"}}, {{"kind", "interactive"}}}}, {"eps", "1/4"}, {"secret", true}},
             {random_density(rng), random_density(rng)}},
            {json{{"mode", "cake"}, {"agents", {{{"kind", "interactive"}}, io::profile_json(division::AgentProfile::scripted(random_density(rng))), {{"kind", "interactive"}}}}, {"eps", "1/20"}},
             {random_density(rng), std::nullopt, random_density(rng)}},
            {json{{"mode", "rent"}, {"agents", {{{"kind", "interactive"}}, {{"kind", "interactive"}}, {{"kind", "interactive"}}}}, {"eps", "1/3"}},
             {random_density(rng), random_density(rng), random_density(rng)}}};
        for (const auto& [body, stand_ins] : interactive) {
            auto created = client.Post("/sessions", body.dump(), "application/json");
            const std::string id = json::parse(created->body)["id"];
            const bool settled = drive(id, stand_ins, division::parse_mode(body["mode"]));
            auto got = client.Get("/sessions/" + id + "/result");
            v.expect(settled && json::parse(got->body)["state"] == "done", "interactive " + body["mode"].get<std::string>() + " session did not finish");
            results[id] = got->body;
        }
        server.stop();
        thread.join();
    }

    // Replay every log twice: directly, and through a restarted service.
    int identical = 0;
    service::EventStore store(dir);
    service::Service restarted(config);
    for (const auto& [id, bytes] : results) {
        const auto replayed = service::Session::replay(store.read(id), config.max_pieces);
        const bool same = replayed.result_json().dump() == bytes && restarted.result(id).body.dump() == bytes;
        if (same)
            ++identical;
        else
            v.fail("replay of " + id + " differs");
    }
    fs::remove_all(dir);
    v.detail << identical << "/" << results.size() << " session logs replay to byte-identical results; " << scripted_equal << "/"
             << scripted << " scripted sessions equal the library";
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
        {"binary two-color splittings", criterion1},
        {"splitting size bound by exhaustion", criterion2},
        {"counterexample necklaces", criterion3},
        {"cyclic splittings for four thieves", criterion4},
        {"Sperner parity and color-set bound", criterion5},
        {"PL parity", criterion6},
        {"Birkhoff decomposition", criterion7},
        {"strong colorful KKM", criterion8},
        {"fair division end to end", criterion9},
        {"service determinism", criterion10}};
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(number)) continue;
        Verdict v;
        const auto start = Clock::now();
        try {
            criteria[i].second(v);
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << number << " (" << criteria[i].first << "): " << v.detail.str();
        if (!v.pass) std::cout << " | first failure: " << v.first_failure;
        std::cout << " [" << seconds_since(start) << " s]" << std::endl;
        failures += !v.pass;
    }
    return failures == 0 ? 0 : 1;
}

#include "fairdiv/kkm/kkm.hpp"

#include "fairdiv/error.hpp"
#include "fairdiv/simplicial/kuhn.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace fairdiv::kkm {

using simplicial::Face;
using simplicial::GridPoint;
using simplicial::PseudoComplex;
using simplicial::Vertex;

namespace {

std::string describe(const RationalVector& x) {
    std::string s = "(";
    for (size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + to_string(x[i]);
    return s + ")";
}

// Each Kuhn simplex has diameter at most sqrt(d+1)/m in barycentric coordinates.
int mesh_for(int d, double eps) {
    if (!(eps > 0)) throw Error("EpsNonpositive", "eps must be positive");
    return std::max(1, static_cast<int>(std::ceil(std::sqrt(d + 1.0) / eps)));
}

int owner(const GridPoint& s, int d) {
    long sum = 0;
    for (int v : s) sum += v;
    return static_cast<int>(sum % (d + 1));
}

// First admissible index of cover `c` at x, restricted to the support of x.
int first_member(const Cover& c, const RationalVector& x) {
    for (int i = 0; i <= c.dim(); ++i)
        if (x[static_cast<size_t>(i)] != 0 && c.contains(i, x)) return i;
    throw Error("CoverViolation", "point " + describe(x) + " lies in no set of its supporting face");
}

RationalVector barycenter(const std::vector<GridPoint>& vertices, int m) {
    RationalVector x;
    for (const auto& s : vertices) {
        auto p = simplicial::grid_to_point(s, m);
        if (x.empty()) x.assign(p.size(), 0);
        for (size_t i = 0; i < p.size(); ++i) x[i] += p[i];
    }
    for (auto& c : x) {
        c /= static_cast<long>(vertices.size());
        c.canonicalize();
    }
    return x;
}

void check_covers(const std::vector<Cover>& covers, size_t expected, int d, bool dual) {
    if (covers.size() != expected)
        throw Error("BadConfig", "expected " + std::to_string(expected) + " covers, got " + std::to_string(covers.size()));
    for (const auto& c : covers) {
        if (c.dim() != d) throw Error("BadConfig", "covers live on simplices of different dimensions");
        if (c.dual() != dual) throw Error("BadConfig", dual ? "expected dual KKM covers" : "expected KKM covers");
    }
}

}  // namespace

ColorfulPoint colorful_kkm(const std::vector<Cover>& covers, double eps) {
    if (covers.empty()) throw Error("BadConfig", "no covers");
    const int d = covers.front().dim();
    check_covers(covers, static_cast<size_t>(d) + 1, d, false);
    const int m = mesh_for(d, eps);

    auto label = [&](const GridPoint& s) {
        return first_member(covers[static_cast<size_t>(owner(s, d))], simplicial::grid_to_point(s, m));
    };
    auto walk = simplicial::kuhn_walk(d, m, label);

    ColorfulPoint out;
    out.mesh = m;
    out.evaluations = walk.evaluations;
    out.x = barycenter(walk.vertices, m);
    out.perm.assign(static_cast<size_t>(d) + 1, -1);
    out.witnesses.resize(static_cast<size_t>(d) + 1);
    for (size_t v = 0; v < walk.vertices.size(); ++v) {
        const auto j = static_cast<size_t>(owner(walk.vertices[v], d));
        out.perm[j] = walk.labels[v];
        out.witnesses[j] = simplicial::grid_to_point(walk.vertices[v], m);
    }
    const Point p = to_point(out.x);
    for (size_t j = 0; j < covers.size(); ++j) out.distances.push_back(covers[j].slack(out.perm[j], p));
    return out;
}

KkmPoint kkm_point(const Cover& cover, double eps) {
    if (cover.dual()) throw Error("BadConfig", "kkm_point needs a KKM cover, not a dual one");
    const int d = cover.dim();
    const int m = mesh_for(d, eps);
    auto label = [&](const GridPoint& s) { return first_member(cover, simplicial::grid_to_point(s, m)); };
    auto walk = simplicial::kuhn_walk(d, m, label);

    KkmPoint out;
    out.mesh = m;
    out.evaluations = walk.evaluations;
    out.x = barycenter(walk.vertices, m);
    out.witnesses.resize(static_cast<size_t>(d) + 1);
    for (size_t v = 0; v < walk.vertices.size(); ++v)
        out.witnesses[static_cast<size_t>(walk.labels[v])] = simplicial::grid_to_point(walk.vertices[v], m);
    const Point p = to_point(out.x);
    for (int i = 0; i <= d; ++i) out.distances.push_back(cover.slack(i, p));
    return out;
}

Point strong_kkm_map(const std::vector<Cover>& covers, double eps, bool dual, const Point& raw) {
    const size_t n = raw.size();
    Point x(n);
    double total = 0;
    for (size_t k = 0; k < n; ++k) total += x[k] = std::max(0.0, raw[k]);
    for (auto& v : x) v /= total;
    const double lowest = *std::min_element(x.begin(), x.end());
    const double width = 0.5 / static_cast<double>(n);

    std::vector<double> rho(n);
    for (size_t k = 0; k < n; ++k) {
        if (!dual) rho[k] = std::min(1.0, x[k] / width);
        else rho[k] = std::max(std::clamp(1.0 - x[k] / width, 0.0, 1.0), std::min(1.0, lowest / width));
    }

    Point f(n, 0.0);
    for (const auto& cover : covers) {
        std::vector<double> g(n);
        double sum = 0;
        for (size_t k = 0; k < n; ++k) {
            if (rho[k] == 0) continue;
            sum += g[k] = std::max(0.0, eps + cover.margin(static_cast<int>(k), x)) * rho[k];
        }
        if (sum <= 0) throw Error("CoverViolation", "no set of a cover is near the point");
        for (size_t k = 0; k < n; ++k) f[k] += g[k] / sum / static_cast<double>(covers.size());
    }
    return f;
}

namespace {

double residual_of(const Point& f) {
    const double b = 1.0 / static_cast<double>(f.size());
    double r = 0;
    for (double v : f) r = std::max(r, std::abs(v - b));
    return r;
}

// Newton iteration on f(x) = b in the chart (x_0..x_{d-1}), with central
// differences and backtracking that keeps x inside the simplex.
Point polish(const std::function<Point(const Point&)>& f, Point x, double& residual) {
    const size_t n = x.size(), d = n - 1;
    const double b = 1.0 / static_cast<double>(n);
    auto value = [&](const Point& p) {
        Point v = f(p);
        Eigen::VectorXd out(static_cast<Eigen::Index>(d));
        for (size_t k = 0; k < d; ++k) out[static_cast<Eigen::Index>(k)] = v[k] - b;
        return std::make_pair(out, residual_of(v));
    };
    auto inside = [](const Point& p) { return std::all_of(p.begin(), p.end(), [](double v) { return v >= 0; }); };
    auto shift = [&](const Point& p, size_t k, double h) {
        Point q = p;
        q[k] += h;
        q[d] -= h;
        return q;
    };

    auto [F, r] = value(x);
    residual = r;
    for (int iter = 0; iter < 60 && residual > 1e-14; ++iter) {
        Eigen::MatrixXd J(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (size_t k = 0; k < d; ++k) {
            const double h = 1e-7;
            Point hi = shift(x, k, h), lo = shift(x, k, -h);
            double span = 2 * h;
            if (!inside(hi)) {
                hi = x;
                span = h;
            }
            if (!inside(lo)) {
                lo = x;
                span = span == h ? 0 : h;
            }
            if (span == 0) return x;
            J.col(static_cast<Eigen::Index>(k)) = (value(hi).first - value(lo).first) / span;
        }
        const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-F);
        if (!step.allFinite()) break;
        bool improved = false;
        for (double t = 1; t > 1e-6; t /= 2) {
            Point y = x;
            for (size_t k = 0; k < d; ++k) {
                y[k] += t * step[static_cast<Eigen::Index>(k)];
                y[d] -= t * step[static_cast<Eigen::Index>(k)];
            }
            if (!inside(y)) continue;
            auto [G, s] = value(y);
            if (s < residual) {
                x = std::move(y);
                F = G;
                residual = s;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return x;
}

}  // namespace

StrongColorfulPoint strong_colorful_kkm(const std::vector<Cover>& covers, double eps, bool dual,
                                        const StrongOptions& options) {
    if (covers.empty()) throw Error("BadConfig", "no covers");
    if (!(eps > 0)) throw Error("EpsNonpositive", "eps must be positive");
    const int d = covers.front().dim();
    if (d < 1) throw Error("BadConfig", "need d >= 1");
    check_covers(covers, static_cast<size_t>(d), d, dual);
    const size_t n = static_cast<size_t>(d) + 1;

    // Continuation in the fattening: a wide band keeps f smooth enough for a
    // coarse walk, then the band shrinks to eps with each root seeding the next.
    auto bracket = [&](double band, double& residual, int& mesh) {
        auto f = [&](const Point& p) { return strong_kkm_map(covers, band, dual, p); };
        Point best_x;
        residual = std::numeric_limits<double>::infinity();
        for (int m = options.start_mesh; m <= options.max_mesh && residual > eps; m *= 2) {
            auto label = [&](const GridPoint& s) {
                const RationalVector xr = simplicial::grid_to_point(s, m);
                const Point v = f(to_point(xr));
                int pick = -1;
                for (size_t k = 0; k < n; ++k) {
                    if (xr[k] == 0) continue;
                    if (pick < 0 || (dual ? v[k] < v[static_cast<size_t>(pick)] : v[k] > v[static_cast<size_t>(pick)]))
                        pick = static_cast<int>(k);
                }
                return pick;
            };
            auto walk = simplicial::kuhn_walk(d, m, label, options.max_steps);
            double r = 0;
            Point candidate = polish(f, to_point(barycenter(walk.vertices, m)), r);
            if (r < residual) {
                residual = r;
                best_x = candidate;
                mesh = m;
            }
        }
        return best_x;
    };

    double band = std::max(eps, 0.25);
    double best = 0;
    int mesh = 0;
    Point x = bracket(band, best, mesh);
    while (band > eps) {
        band = std::max(eps, band / 2);
        auto f = [&](const Point& p) { return strong_kkm_map(covers, band, dual, p); };
        double r = 0;
        Point next = polish(f, x, r);
        if (r > eps) next = bracket(band, r, mesh);
        x = next;
        best = r;
    }
    if (best > eps) throw Error("RootNotFound", "best residual " + std::to_string(best));

    StrongColorfulPoint out;
    out.x = x;
    out.mesh = mesh;
    out.residual = best;
    out.matrix.assign(n, std::vector<double>(n, 0.0));
    for (size_t k = 0; k < n; ++k) out.matrix[k][0] = 1.0 / static_cast<double>(n);
    for (size_t j = 0; j < covers.size(); ++j) {
        const Point fj = strong_kkm_map({covers[j]}, eps, dual, x);
        for (size_t k = 0; k < n; ++k) out.matrix[k][j + 1] = fj[k];
    }
    // The rows are off by at most d * residual; rescaling keeps the zero pattern.
    out.terms = birkhoff(sinkhorn(out.matrix), 1e-12);

    for (size_t i = 0; i < n; ++i) {
        auto term = std::find_if(out.terms.begin(), out.terms.end(),
                                 [&](const BirkhoffTerm& t) { return t.perm[i] == 0; });
        if (term == out.terms.end()) throw Error("RootNotFound", "no permutation sends column 0 to row " + std::to_string(i));
        std::vector<int> pick(static_cast<size_t>(d));
        std::vector<double> slack(static_cast<size_t>(d));
        for (size_t r = 0; r < n; ++r) {
            const int col = term->perm[r];
            if (col == 0) continue;
            pick[static_cast<size_t>(col - 1)] = static_cast<int>(r);
            slack[static_cast<size_t>(col - 1)] = covers[static_cast<size_t>(col - 1)].slack(static_cast<int>(r), x);
        }
        out.picks.push_back(std::move(pick));
        out.slacks.push_back(std::move(slack));
    }
    return out;
}

ComplexKkmResult kkm_pseudomanifold(const PseudoComplex& complex, const std::vector<ComplexCover>& covers,
                                    const Rational& eps, size_t max_facets) {
    const auto kind = simplicial::validate(complex).kind;
    if (kind != simplicial::Classification::Kind::WithBoundary)
        throw Error("BadComplex", "need a pseudomanifold with boundary");
    const int d = complex.dim();
    if (covers.size() != static_cast<size_t>(d) + 1)
        throw Error("BadConfig", "need d+1 = " + std::to_string(d + 1) + " covers");
    const PseudoComplex rim = simplicial::boundary(complex);

    std::set<Face> rim_faces;
    std::set<Vertex> rim_vertex_set;
    for (const auto& f : rim.facets())
        for (unsigned mask = 1; mask < (1u << f.size()); ++mask) {
            Face sub;
            for (size_t j = 0; j < f.size(); ++j)
                if (mask & (1u << j)) sub.push_back(f[j]);
            rim_faces.insert(sub);
            if (sub.size() == 1) rim_vertex_set.insert(sub[0]);
        }
    const std::vector<Vertex> rim_vertices(rim_vertex_set.begin(), rim_vertex_set.end());

    const auto n = static_cast<size_t>(complex.num_vertices());
    std::vector<RationalVector> units(n, RationalVector(n, 0));
    for (size_t v = 0; v < n; ++v) units[v][v] = 1;
    const PseudoComplex realized(d, complex.facets(), units);
    auto [fine, to_complex] = simplicial::refine_to_mesh(realized, eps, max_facets);

    // c_j(v): first index among the admissible ones whose set holds v.
    std::vector<std::vector<Vertex>> color(covers.size(), std::vector<Vertex>(static_cast<size_t>(fine.num_vertices())));
    for (Vertex v = 0; v < fine.num_vertices(); ++v) {
        const auto& carrier = to_complex.of(v);
        const bool on_rim = carrier && rim_faces.count(*carrier);
        const std::vector<Vertex>& admissible = on_rim ? *carrier : rim_vertices;
        for (size_t j = 0; j < covers.size(); ++j) {
            auto it = std::find_if(admissible.begin(), admissible.end(),
                                   [&](Vertex i) { return covers[j](i, fine.coord(v)); });
            if (it == admissible.end())
                throw Error("CoverViolation", "point " + describe(fine.coord(v)) + " lies in no admissible set of cover " +
                                                  std::to_string(j));
            color[j][static_cast<size_t>(v)] = *it;
        }
    }

    auto [subdivided, to_fine] = simplicial::barycentric(fine);
    simplicial::SpernerColoring coloring;
    simplicial::CarrierMap to_rim{subdivided, rim, {}};
    for (Vertex v = 0; v < subdivided.num_vertices(); ++v) {
        const Face& sigma = *to_fine.of(v);
        coloring.colors.push_back(color[sigma.size() - 1][static_cast<size_t>(sigma[0])]);
        auto carrier = to_complex.of_face(sigma);
        to_rim.carrier.push_back(carrier && rim_faces.count(*carrier) ? carrier : std::nullopt);
    }
    if (auto bad = simplicial::check_sperner(coloring, to_rim))
        throw Error("NotSperner", "derived coloring breaks the boundary condition at vertex " + std::to_string(*bad));

    ComplexKkmResult out;
    out.bound = simplicial::lower_bound(rim);
    out.refined_facets = subdivided.num_facets();
    std::set<std::vector<Vertex>> seen;
    for (const auto& facet : subdivided.facets()) {
        std::vector<Vertex> colors;
        for (Vertex v : facet) colors.push_back(coloring(v));
        std::sort(colors.begin(), colors.end());
        if (std::adjacent_find(colors.begin(), colors.end()) != colors.end() || !seen.insert(colors).second) continue;

        ComplexIntersection hit;
        hit.subset = colors;
        hit.assignment.resize(static_cast<size_t>(d) + 1);
        hit.witnesses.resize(static_cast<size_t>(d) + 1);
        for (Vertex v : facet) {
            const Face& sigma = *to_fine.of(v);
            const size_t k = sigma.size() - 1;
            hit.assignment[k] = coloring(v);
            hit.witnesses[k] = fine.coord(sigma[0]);
            if (k == static_cast<size_t>(d)) hit.point = subdivided.coord(v);
        }
        out.intersections.push_back(std::move(hit));
    }
    return out;
}

}  // namespace fairdiv::kkm

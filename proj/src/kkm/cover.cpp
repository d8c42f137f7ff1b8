#include "fairdiv/kkm/cover.hpp"

#include "fairdiv/error.hpp"
#include "fairdiv/simplicial/kuhn.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace fairdiv::kkm {

Point to_point(const RationalVector& x) {
    Point p;
    p.reserve(x.size());
    for (const auto& v : x) p.push_back(v.get_d());
    return p;
}

struct Cover::Geometry {
    std::vector<std::vector<Point>> vertices;
    std::vector<Point> lo, hi;             // bounding boxes
    std::vector<RationalMatrix> inverse;   // vertex matrix inverse per cell
};

namespace {

Rational determinant(RationalMatrix a) {
    const size_t n = a.size();
    Rational det = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (size_t row = col + 1; row < n; ++row) {
            if (a[row][col] == 0) continue;
            const Rational m = a[row][col] / a[col][col];
            for (size_t k = col; k < n; ++k) a[row][k] -= m * a[col][k];
        }
    }
    return det;
}

// Columns are the cell vertices.
RationalMatrix vertex_matrix(const Cell& cell) {
    const size_t n = cell.vertices.size();
    RationalMatrix m(n, RationalVector(n));
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i) m[i][j] = cell.vertices[j][i];
    return m;
}

double box_distance(const Point& x, const Point& lo, const Point& hi) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double gap = std::max({lo[i] - x[i], x[i] - hi[i], 0.0});
        s += gap * gap;
    }
    return std::sqrt(s);
}

bool in_box(const Point& x, const Point& lo, const Point& hi) {
    constexpr double slop = 1e-9;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] < lo[i] - slop || x[i] > hi[i] + slop) return false;
    return true;
}

std::vector<int> support(const RationalVector& x) {
    std::vector<int> s;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0) s.push_back(static_cast<int>(i));
    return s;
}

bool allowed(const std::vector<int>& face, int d, bool dual, int i) {
    const bool in_face = std::binary_search(face.begin(), face.end(), i);
    if (!dual) return in_face;
    if (static_cast<int>(face.size()) == d + 1) return true;
    return !in_face;
}

void check_point(const RationalVector& x, int d) {
    if (static_cast<int>(x.size()) != d + 1) throw Error("BadPoint", "point must have d+1 coordinates");
}

}  // namespace

Cover Cover::from_cells(int d, std::vector<Cell> cells, bool dual) {
    if (d < 0) throw Error("BadCover", "negative dimension");
    if (cells.empty()) throw Error("BadCover", "no cells");
    auto geo = std::make_shared<Geometry>();
    for (auto& cell : cells) {
        if (static_cast<int>(cell.vertices.size()) != d + 1) throw Error("BadCover", "cell needs d+1 vertices");
        for (const auto& v : cell.vertices) {
            check_point(v, d);
            if (std::accumulate(v.begin(), v.end(), Rational(0)) != 1 ||
                std::any_of(v.begin(), v.end(), [](const Rational& c) { return c < 0; }))
                throw Error("BadCover", "cell vertex outside the simplex");
        }
        std::sort(cell.members.begin(), cell.members.end());
        cell.members.erase(std::unique(cell.members.begin(), cell.members.end()), cell.members.end());
        for (int i : cell.members)
            if (i < 0 || i > d) throw Error("BadCover", "member index out of range");
        auto inv = inverse(vertex_matrix(cell));
        if (!inv) throw Error("BadCover", "degenerate cell");
        geo->inverse.push_back(std::move(*inv));
        std::vector<Point> pts;
        for (const auto& v : cell.vertices) pts.push_back(to_point(v));
        Point lo = pts[0], hi = pts[0];
        for (const auto& p : pts)
            for (size_t i = 0; i < p.size(); ++i) {
                lo[i] = std::min(lo[i], p[i]);
                hi[i] = std::max(hi[i], p[i]);
            }
        geo->vertices.push_back(std::move(pts));
        geo->lo.push_back(std::move(lo));
        geo->hi.push_back(std::move(hi));
    }
    Cover c;
    c.d_ = d;
    c.dual_ = dual;
    c.cells_ = std::move(cells);
    c.geometry_ = std::move(geo);
    return c;
}

Cover Cover::from_predicate(int d, Contains contains, Margin margin, bool dual) {
    if (d < 0) throw Error("BadCover", "negative dimension");
    Cover c;
    c.d_ = d;
    c.dual_ = dual;
    c.contains_ = std::move(contains);
    c.margin_ = std::move(margin);
    return c;
}

bool Cover::contains(int i, const RationalVector& x) const {
    check_point(x, d_);
    if (!partition_backed()) return contains_(i, x);
    const Point p = to_point(x);
    for (size_t c = 0; c < cells_.size(); ++c) {
        if (!std::binary_search(cells_[c].members.begin(), cells_[c].members.end(), i)) continue;
        if (!in_box(p, geometry_->lo[c], geometry_->hi[c])) continue;
        const auto& inv = geometry_->inverse[c];
        bool inside = true;
        for (size_t r = 0; r < inv.size() && inside; ++r) {
            Rational lambda = 0;
            for (size_t k = 0; k < x.size(); ++k) lambda += inv[r][k] * x[k];
            if (lambda < 0) inside = false;
        }
        if (inside) return true;
    }
    return false;
}

std::vector<int> Cover::members(const RationalVector& x) const {
    std::vector<int> out;
    for (int i = 0; i <= d_; ++i)
        if (contains(i, x)) out.push_back(i);
    return out;
}

double Cover::slack(int i, const Point& x) const {
    if (static_cast<int>(x.size()) != d_ + 1) throw Error("BadPoint", "point must have d+1 coordinates");
    if (!partition_backed()) return std::max(0.0, -margin_(i, x));
    return nearest_cell(i, x, true);
}

double Cover::margin(int i, const Point& x) const {
    if (static_cast<int>(x.size()) != d_ + 1) throw Error("BadPoint", "point must have d+1 coordinates");
    if (!partition_backed()) return margin_(i, x);
    // Points inside a cell come back with rounding noise as their distance.
    const double outside = nearest_cell(i, x, true);
    if (outside > 1e-12) return -outside;
    const double depth = nearest_cell(i, x, false);
    // A set covering everything has no cells to measure against.
    return std::isinf(depth) ? 1.0 : depth;
}

double Cover::nearest_cell(int i, const Point& x, bool with) const {
    double best = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < cells_.size(); ++c) {
        if (std::binary_search(cells_[c].members.begin(), cells_[c].members.end(), i) != with) continue;
        if (box_distance(x, geometry_->lo[c], geometry_->hi[c]) >= best) continue;
        best = std::min(best, distance_to_simplex(x, geometry_->vertices[c]));
        if (best == 0) break;
    }
    return best;
}

double distance_to_simplex(const Point& x, const std::vector<Point>& vertices) {
    const size_t n = vertices.size(), dim = x.size();
    const Eigen::Map<const Eigen::VectorXd> target(x.data(), static_cast<Eigen::Index>(dim));
    double best = std::numeric_limits<double>::infinity();
    // The nearest point lies in the relative interior of some face; try them all.
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<size_t> idx;
        for (size_t j = 0; j < n; ++j)
            if (mask & (1u << j)) idx.push_back(j);
        const Eigen::Map<const Eigen::VectorXd> p0(vertices[idx[0]].data(), static_cast<Eigen::Index>(dim));
        Eigen::VectorXd proj = p0;
        bool ok = true;
        if (idx.size() > 1) {
            Eigen::MatrixXd dirs(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(idx.size() - 1));
            for (size_t j = 1; j < idx.size(); ++j)
                dirs.col(static_cast<Eigen::Index>(j - 1)) =
                    Eigen::Map<const Eigen::VectorXd>(vertices[idx[j]].data(), static_cast<Eigen::Index>(dim)) - p0;
            Eigen::VectorXd mu = dirs.colPivHouseholderQr().solve(target - p0);
            const double first = 1.0 - mu.sum();
            constexpr double tol = -1e-12;
            ok = first >= tol && (mu.array() >= tol).all();
            proj = p0 + dirs * mu;
        }
        if (ok) best = std::min(best, (target - proj).norm());
    }
    return best;
}

namespace {

// Barycentric subdivision of Delta_d: one cell per ordering of the vertices,
// spanned by the barycenters of the growing prefixes of that ordering.
std::vector<Cell> chain_cells(int d, bool first_is_member) {
    std::vector<int> order(static_cast<size_t>(d) + 1);
    std::iota(order.begin(), order.end(), 0);
    std::vector<Cell> cells;
    do {
        Cell cell;
        RationalVector acc(static_cast<size_t>(d) + 1, 0);
        for (size_t k = 0; k < order.size(); ++k) {
            RationalVector v(static_cast<size_t>(d) + 1, 0);
            for (size_t j = 0; j <= k; ++j) v[static_cast<size_t>(order[j])] = Rational(1, static_cast<long>(k) + 1);
            for (auto& c : v) c.canonicalize();
            cell.vertices.push_back(std::move(v));
        }
        cell.members = {first_is_member ? order.front() : order.back()};
        cells.push_back(std::move(cell));
    } while (std::next_permutation(order.begin(), order.end()));
    return cells;
}

}  // namespace

Cover argmax_cover(int d) { return Cover::from_cells(d, chain_cells(d, true)); }

// On the cell of ordering o the coordinate x_{o[0]} is largest, so x_{o[d]} is smallest.
Cover argmin_cover(int d) { return Cover::from_cells(d, chain_cells(d, false), true); }

Cover vertex_cover(int d, int m, const std::function<std::vector<int>(const simplicial::GridPoint&)>& members_at,
                   bool dual) {
    if (m < 1) throw Error("BadConfig", "mesh must be positive");
    std::map<simplicial::GridPoint, std::vector<int>> seen;
    std::vector<Cell> cells;
    for (const auto& simplex : simplicial::kuhn_simplices(d, m)) {
        Cell cell;
        for (const auto& s : simplex) {
            auto it = seen.find(s);
            if (it == seen.end()) it = seen.emplace(s, members_at(s)).first;
            cell.members.insert(cell.members.end(), it->second.begin(), it->second.end());
            cell.vertices.push_back(simplicial::grid_to_point(s, m));
        }
        cells.push_back(std::move(cell));
    }
    return Cover::from_cells(d, std::move(cells), dual);
}

Cover grid_cover(int d, int m, const RationalVector& weights, bool dual) {
    if (static_cast<int>(weights.size()) != d + 1) throw Error("BadConfig", "need d+1 weights");
    return vertex_cover(
        d, m,
        [&](const simplicial::GridPoint& s) {
            const RationalVector x = simplicial::grid_to_point(s, m);
            Rational best = weights[0] * x[0];
            for (size_t i = 1; i < x.size(); ++i) {
                const Rational v = weights[i] * x[i];
                if (dual ? v < best : v > best) best = v;
            }
            std::vector<int> members;
            for (size_t i = 0; i < x.size(); ++i)
                if (weights[i] * x[i] == best) members.push_back(static_cast<int>(i));
            return members;
        },
        dual);
}

CoverCheck check_cover(const Cover& cover, int resolution) {
    const int d = cover.dim();
    CoverCheck result;

    if (!cover.partition_backed()) {
        if (resolution < 1) throw Error("BadConfig", "resolution must be positive");
        result.sampled = true;
        for (const auto& s : simplicial::grid_points(d, resolution)) {
            const RationalVector x = simplicial::grid_to_point(s, resolution);
            const auto face = support(x);
            bool covered = false;
            for (int i = 0; i <= d && !covered; ++i)
                if (allowed(face, d, cover.dual(), i) && cover.contains(i, x)) covered = true;
            if (!covered) {
                result.ok = false;
                result.face = face;
                result.witness = x;
                return result;
            }
        }
        return result;
    }

    // Tiling: volumes add up and every ridge off the boundary of Delta_d is shared by two cells.
    Rational volume = 0;
    std::map<std::vector<RationalVector>, int> ridges;
    for (const auto& cell : cover.cells()) {
        volume += abs(determinant(vertex_matrix(cell)));
        for (size_t skip = 0; skip < cell.vertices.size(); ++skip) {
            std::vector<RationalVector> ridge;
            for (size_t j = 0; j < cell.vertices.size(); ++j)
                if (j != skip) ridge.push_back(cell.vertices[j]);
            std::sort(ridge.begin(), ridge.end());
            ++ridges[ridge];
        }
    }
    if (volume != 1) throw Error("BadCover", "cells do not tile the simplex (volume " + to_string(volume) + ")");
    for (const auto& [ridge, count] : ridges) {
        bool on_boundary = false;
        for (int i = 0; i <= d && !on_boundary; ++i)
            on_boundary = std::all_of(ridge.begin(), ridge.end(), [&](const RationalVector& v) { return v[static_cast<size_t>(i)] == 0; });
        if (count != (on_boundary ? 1 : 2)) throw Error("BadCover", "cells do not meet face to face");
    }

    // Each face tau of a cell that is full-dimensional inside the face of Delta_d
    // spanned by its support, with the union of members of all cells containing it.
    std::map<std::vector<RationalVector>, std::vector<int>> pieces;
    for (const auto& cell : cover.cells()) {
        const size_t n = cell.vertices.size();
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<RationalVector> tau;
            std::vector<bool> supp(n, false);
            for (size_t j = 0; j < n; ++j) {
                if (!(mask & (1u << j))) continue;
                tau.push_back(cell.vertices[j]);
                for (size_t i = 0; i < n; ++i)
                    if (cell.vertices[j][i] != 0) supp[i] = true;
            }
            if (static_cast<size_t>(std::count(supp.begin(), supp.end(), true)) != tau.size()) continue;
            std::sort(tau.begin(), tau.end());
            auto& m = pieces[tau];
            m.insert(m.end(), cell.members.begin(), cell.members.end());
        }
    }
    for (const auto& [tau, members] : pieces) {
        RationalVector center(static_cast<size_t>(d) + 1, 0);
        for (const auto& v : tau)
            for (size_t i = 0; i < v.size(); ++i) center[i] += v[i] / static_cast<long>(tau.size());
        const auto face = support(center);
        if (std::any_of(members.begin(), members.end(), [&](int i) { return allowed(face, d, cover.dual(), i); }))
            continue;
        result.ok = false;
        result.face = face;
        result.witness = center;
        return result;
    }
    return result;
}

}  // namespace fairdiv::kkm

#pragma once

#include "fairdiv/rational.hpp"
#include "fairdiv/simplicial/kuhn.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace fairdiv::kkm {

/// Barycentric coordinates (x_0..x_d) of a point of Delta_d, in floating point.
using Point = std::vector<double>;

Point to_point(const RationalVector& x);

/// A closed d-simplex of a partition together with the cover indices it belongs to.
struct Cell {
    std::vector<RationalVector> vertices;  // d+1 points of Delta_d
    std::vector<int> members;              // sorted indices i with cell in C_i
};

/**
 * A family C_0..C_d of closed subsets of Delta_d.
 *
 * Partition-backed covers are unions of cells from a face-to-face triangulation
 * of Delta_d; membership, distance and the cover check are exact. Predicate
 * covers answer membership exactly at rational points and provide a slack
 * function that is zero on C_i and positive off it; their cover check samples a
 * grid.
 */
class Cover {
public:
    using Contains = std::function<bool(int, const RationalVector&)>;
    using Margin = std::function<double(int, const Point&)>;

    static Cover from_cells(int d, std::vector<Cell> cells, bool dual = false);
    static Cover from_predicate(int d, Contains contains, Margin margin, bool dual = false);

    int dim() const { return d_; }
    bool dual() const { return dual_; }
    bool partition_backed() const { return !cells_.empty(); }
    const std::vector<Cell>& cells() const { return cells_; }

    bool contains(int i, const RationalVector& x) const;
    /// All i with x in C_i, ascending.
    std::vector<int> members(const RationalVector& x) const;

    /// Zero on C_i and positive elsewhere; for partition-backed covers this is the
    /// Euclidean distance from x to C_i (in barycentric coordinates).
    double slack(int i, const Point& x) const;

    /// Signed version: -slack outside C_i, and inside it the distance to the cells
    /// that avoid C_i (partition-backed) or the predicate's own margin.
    double margin(int i, const Point& x) const;

private:
    struct Geometry;

    // Distance from x to the nearest cell that has (with) or lacks (!with) index i.
    double nearest_cell(int i, const Point& x, bool with) const;

    int d_ = 0;
    bool dual_ = false;
    std::vector<Cell> cells_;
    std::shared_ptr<const Geometry> geometry_;
    Contains contains_;
    Margin margin_;
};

/// C_i = {x : x_i >= x_j for all j}, partition-backed. The classical KKM cover.
Cover argmax_cover(int d);
/// C_i = {x : x_i <= x_j for all j}, partition-backed. A dual KKM cover.
Cover argmin_cover(int d);

/**
 * Partition-backed cover on the Kuhn grid of mesh 1/m: each grid simplex
 * belongs to every C_i that is optimal for w_i * x_i at one of its vertices
 * (largest for a KKM cover, smallest for a dual one, ties all kept). Exactly
 * KKM (dual KKM) for positive weights.
 */
Cover grid_cover(int d, int m, const RationalVector& weights, bool dual = false);

/// Same cells, with the sets at each grid vertex supplied by the caller (asked
/// once per vertex). KKM (dual KKM) whenever the vertex sets are.
Cover vertex_cover(int d, int m, const std::function<std::vector<int>(const simplicial::GridPoint&)>& members_at,
                   bool dual = false);

/// Euclidean distance from x to the convex hull of the given points.
double distance_to_simplex(const Point& x, const std::vector<Point>& vertices);

struct CoverCheck {
    bool ok = true;
    bool sampled = false;         // verdict from a grid sample rather than exact
    std::vector<int> face;        // violated face of Delta_d (vertex indices)
    RationalVector witness;       // a point of that face lying in no allowed C_i
};

/**
 * KKM condition: every face I of Delta_d lies in the union of C_i, i in I.
 * Dual condition: every proper face I lies in the union of C_i, i not in I,
 * and the C_i cover Delta_d. Exact for partition-backed covers; otherwise the
 * grid of mesh 1/resolution is examined. Throws Error("BadCover") if the cells
 * do not tile Delta_d face to face.
 */
CoverCheck check_cover(const Cover& cover, int resolution = 64);

}  // namespace fairdiv::kkm

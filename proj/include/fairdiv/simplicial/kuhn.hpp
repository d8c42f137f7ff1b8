#pragma once

#include "fairdiv/rational.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace fairdiv::simplicial {

/**
 * Grid point of the Freudenthal (Kuhn) triangulation of Delta_d with mesh 1/m.
 *
 * A point x = (x_0..x_d) is stored through its partial sums
 * s_k = m * (x_0 + ... + x_{k-1}), k = 1..d, so 0 <= s_1 <= ... <= s_d <= m.
 * For cake division s_k / m is exactly the position of the k-th cut.
 */
using GridPoint = std::vector<int>;

RationalVector grid_to_point(const GridPoint& s, int m);

/// All grid points in lexicographic order. There are C(m+d, d) of them.
std::vector<GridPoint> grid_points(int d, int m);

/// Every d-simplex of the triangulation (m^d of them), each as its d+1 grid
/// points listed along the unit steps.
std::vector<std::vector<GridPoint>> kuhn_simplices(int d, int m);

struct KuhnResult {
    std::vector<GridPoint> vertices;  // d+1 vertices of a fully labeled simplex
    std::vector<int> labels;          // label of each vertex, a permutation of 0..d
    size_t steps = 0;                 // simplices visited
    size_t evaluations = 0;           // distinct label calls
};

/**
 * Finds a fully labeled simplex of the mesh-1/m Kuhn triangulation of Delta_d
 * by the dimension-raising door walk from vertex e_0: inside each face
 * spanned by e_0..e_k the walk moves through simplices whose labels contain
 * 0..k-1 until it reaches one also labeled k.
 *
 * The labeling must be Sperner (label(x) is an index with x_label > 0);
 * violations throw Error("NotSperner"). Throws Error("BudgetExceeded") after
 * max_steps pivots. Labels are cached, so each grid point is queried once.
 */
KuhnResult kuhn_walk(int d, int m, const std::function<int(const GridPoint&)>& label, size_t max_steps = 50'000'000);

}  // namespace fairdiv::simplicial

#pragma once

#include "fairdiv/kkm/birkhoff.hpp"
#include "fairdiv/kkm/cover.hpp"
#include "fairdiv/simplicial/complex.hpp"

#include <functional>
#include <vector>

namespace fairdiv::kkm {

struct KkmPoint {
    RationalVector x;                    // barycenter of the fully labeled simplex
    std::vector<RationalVector> witnesses;  // witnesses[i] lies in C_i
    std::vector<double> distances;       // slack of x in each C_i
    int mesh = 0;                        // grid 1/mesh
    size_t evaluations = 0;
};

/// A point within eps of every C_i of a KKM cover, from a fully labeled simplex
/// of a Kuhn grid fine enough that each simplex has diameter <= eps. Throws
/// Error("CoverViolation") when a grid point lies in no admissible set.
KkmPoint kkm_point(const Cover& cover, double eps);

struct ColorfulPoint {
    RationalVector x;
    std::vector<int> perm;               // cover j contributes the set C^j_{perm[j]}
    std::vector<RationalVector> witnesses;  // witnesses[j] lies in C^j_{perm[j]}
    std::vector<double> distances;       // slack of x in C^j_{perm[j]}
    int mesh = 0;
    size_t evaluations = 0;
};

/// d+1 KKM covers. Grid points are handed to the covers in turn (the sum of the
/// Kuhn coordinates mod d+1 picks the cover), so the vertices of each grid
/// simplex consult pairwise distinct covers.
ColorfulPoint colorful_kkm(const std::vector<Cover>& covers, double eps);

struct StrongColorfulPoint {
    Point x;
    double residual = 0;   // max_k |f_k(x) - 1/(d+1)|
    Matrix matrix;         // row k: 1/(d+1), f_{1,k}(x), ..., f_{d,k}(x)
    std::vector<BirkhoffTerm> terms;
    /// picks[i][j-1]: the set of cover j used when index i is taken away;
    /// picks[i] is a bijection from covers 1..d onto {0..d} minus i.
    std::vector<std::vector<int>> picks;
    /// slack of x in C^j_{picks[i][j-1]}, each below eps.
    std::vector<std::vector<double>> slacks;
    int mesh = 0;
};

struct StrongOptions {
    int start_mesh = 16;
    int max_mesh = 1024;
    size_t max_steps = 20'000'000;
};

/**
 * d KKM covers (or d dual KKM covers when dual is set) of Delta_d. Each closed
 * C^j_k is replaced by its open eps-neighbourhood U^j_k and
 *   g_{j,k}(x) = max(0, eps + margin_j(k, x)) * rho_k(x),   f_j = g_j / sum_k g_{j,k},
 * which is positive exactly on U^j_k and grows with the depth inside C^j_k, like
 * the distance to the complement of U^j_k. A boundary factor rho_k, linear over
 * a fixed band of width 1/(2(d+1)) along the faces, makes f = (f_1 + ... + f_d)/d
 * keep every face of Delta_d (dual: push it off the face's large coordinates). A fully labeled Kuhn simplex
 * for the labels argmax_k f_k (dual: argmin) brackets a zero of f - 1/(d+1),
 * which Newton iteration then polishes. The bijections come from the Birkhoff
 * terms of the doubly stochastic matrix with first column 1/(d+1).
 *
 * Throws Error("RootNotFound") with the best residual if no point with
 * residual <= eps turns up by max_mesh.
 */
StrongColorfulPoint strong_colorful_kkm(const std::vector<Cover>& covers, double eps, bool dual,
                                        const StrongOptions& options = {});

/// The map f above at x, exposed for checking.
Point strong_kkm_map(const std::vector<Cover>& covers, double eps, bool dual, const Point& x);

/// Closed set C_i (i a vertex of the boundary of K) as a membership test at points
/// given by barycentric weights on the vertices of K.
using ComplexCover = std::function<bool(simplicial::Vertex, const RationalVector&)>;

struct ComplexIntersection {
    std::vector<simplicial::Vertex> subset;     // sorted, d+1 boundary vertices
    std::vector<simplicial::Vertex> assignment; // cover j contributes C^j_{assignment[j]}
    RationalVector point;                        // weights on the vertices of K
    std::vector<RationalVector> witnesses;       // witnesses[j] lies in C^j_{assignment[j]}
};

struct ComplexKkmResult {
    std::vector<ComplexIntersection> intersections;  // one per distinct subset
    Rational bound;                                  // (f_{d-1}(boundary) - 2) / (d - 1)
    size_t refined_facets = 0;
};

/**
 * d+1 KKM covers of a d-pseudomanifold with boundary. K is realized with its
 * vertices as unit vectors, refined barycentrically to mesh eps, and colored by
 * c_j(v) = the first i (among the boundary face carrying v, if any) with v in
 * C^j_i; then each facet of the barycentric subdivision of the refinement takes
 * the color c_k of a vertex of the k-dimensional face it subdivides. Rainbow
 * facets of that coloring give the subsets. Throws Error("CoverViolation") when
 * some vertex has no admissible set.
 */
ComplexKkmResult kkm_pseudomanifold(const simplicial::PseudoComplex& complex, const std::vector<ComplexCover>& covers,
                                    const Rational& eps, size_t max_facets = 2'000'000);

}  // namespace fairdiv::kkm

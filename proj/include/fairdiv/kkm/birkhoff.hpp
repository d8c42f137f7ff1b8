#pragma once

#include <vector>

namespace fairdiv::kkm {

using Matrix = std::vector<std::vector<double>>;

struct BirkhoffTerm {
    double weight = 0;
    std::vector<int> perm;  // row i -> column perm[i]
};

/**
 * Writes a doubly stochastic matrix as a convex combination of permutation
 * matrices by repeatedly peeling off a perfect matching of the entries above
 * tol, weighted by its smallest entry. Each round empties at least one entry,
 * so an n x n matrix needs at most (n-1)^2 + 1 terms.
 *
 * Throws Error("NotDoublyStochastic") if a row or column sum is off by more
 * than tol or an entry is below -tol, and Error("MatchingFailed") if mass
 * remains without a perfect matching.
 */
std::vector<BirkhoffTerm> birkhoff(const Matrix& m, double tol = 1e-9);

/// Perfect matching rows -> columns using only entries above tol.
std::vector<int> perfect_matching(const Matrix& m, double tol);

/// Alternating row and column normalization (Sinkhorn scaling); keeps the zero
/// pattern. Stops once all sums are within tol of 1 or after max_rounds.
Matrix sinkhorn(Matrix m, double tol = 1e-13, int max_rounds = 100000);

}  // namespace fairdiv::kkm

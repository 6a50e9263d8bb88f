#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace curvlab {

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

// Modified Gram-Schmidt on k row vectors of length n, in place, two passes.
// Returns false if a row collapses below eps before normalization.
bool gram_schmidt_rows(std::span<double> rows, int k, int n,
                       double eps = 1e-13);

// Eigenvalues of a symmetric n x n matrix (row-major), ascending.
// Cyclic Jacobi; plenty for the small matrices used here.
std::vector<double> symmetric_eigenvalues(std::vector<double> m, int n);

// Random orthogonal n x n matrix, row-major, from a seeded stream
// (orthonormalized i.i.d. standard normal rows).
std::vector<double> random_orthogonal(int n, std::uint64_t seed);

}  // namespace curvlab

#pragma once

#include <string>
#include <vector>

#include "chronomap/som_string.hpp"

namespace chronomap {

/// Symmetric pairwise distances, stored densely.
struct DistanceMatrix {
  int n = 0;
  std::vector<double> d;  // row-major n*n

  double at(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return d[static_cast<std::size_t>(i) * n + j]; }
};

/// Planar embedding recovered from distances. `coords[i]` has `dims`
/// entries; `eigenvalues` are the retained ones, largest first.
struct MdsEmbedding {
  int dims = 0;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> coords;
  std::vector<int> clamped_axes;  // axes whose eigenvalue was negative
};

struct MonotoneResult {
  double spearman = 0.0;
  bool monotone = false;  // first-axis coordinates strictly monotone
};

DistanceMatrix pairwise_distances(const std::vector<std::vector<double>>& points);

/// Principal-coordinates embedding: double-center -1/2 D^2, take the top
/// `dims` (1 or 2) eigenpairs, scale eigenvectors by sqrt(eigenvalue).
/// Needs n >= dims + 1 points and a symmetric, zero-diagonal input.
/// Negative eigenvalues clamp to zero and are reported in `clamped_axes`.
/// Axes are oriented so the first point never sits right of (or above)
/// the last.
MdsEmbedding classical_mds(const DistanceMatrix& distances, int dims);

/// Proper crossings among the segments of the polyline visiting the points
/// in `order`. Shared-endpoint (adjacent) pairs never count; touching or
/// collinear overlap does not count either.
int crossing_count(const std::vector<std::vector<double>>& coords, const std::vector<int>& order);
int crossing_count(const std::vector<std::vector<double>>& coords);  // index order

/// Whether the first-axis coordinates are strictly monotone along `order`,
/// plus the Spearman rank correlation between position in `order` and the
/// first coordinate (exact formula without ties, average ranks with ties).
MonotoneResult ordering_monotone(const MdsEmbedding& embedding, const std::vector<int>& order);
MonotoneResult ordering_monotone(const MdsEmbedding& embedding);  // index order

/// Eigendecomposition of a symmetric matrix (cyclic Jacobi), eigenvalues
/// descending. Exposed so the reconstruction can be verified directly.
void symmetric_eigen(const std::vector<double>& matrix, int n, std::vector<double>& eigenvalues,
                     std::vector<double>& eigenvectors /* column-major */);

void write_embedding_csv(const std::string& path, const MdsEmbedding& embedding);
MdsEmbedding load_embedding_csv(const std::string& path);

}  // namespace chronomap

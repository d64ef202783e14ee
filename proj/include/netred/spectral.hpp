#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "netred/graphs.hpp"
#include "netred/types.hpp"

namespace netred {

/// Bottom-k eigenpairs of a Laplacian (the spectral embedding).
///
/// Columns are sign-normalised: the first entry of largest magnitude in each
/// column is positive. For a connected-graph Laplacian this makes the first
/// column +1/sqrt(n).
struct SpectralData {
  Vector lambda_k;  ///< ascending
  Matrix v_k;       ///< n x k, orthonormal columns
  std::optional<double> lambda_next;  ///< lambda_{k+1}; absent when k == n
  bool tied = false;  ///< lambda_k == lambda_{k+1} up to roundoff: the subspace is not unique

  Index k() const { return lambda_k.size(); }
  Index n() const { return v_k.rows(); }
};

SpectralData bottom_k_eig(const Matrix& l, int k);

struct ClusteringResult {
  Partition partition;
  double within_ss = 0.0;  ///< within-cluster sum of squares of the best restart
  int best_restart = 0;
};

/// k-means on the rows of data.v_k with k-means++ seeding; best of
/// `restarts` runs. Labels are renumbered by first appearance.
ClusteringResult cluster_embedding(const SpectralData& data, int k, int restarts, std::uint64_t seed,
                                   int max_iterations = 300);

/// Same, on an arbitrary point cloud (one point per row).
ClusteringResult kmeans_rows(const Matrix& points, int k, int restarts, std::uint64_t seed,
                             int max_iterations = 300);

struct SinThetaReport {
  std::vector<double> angles;  ///< principal angles, ascending
  double frobenius = 0.0;      ///< ||sin Theta||_F
};

/// Principal angles between the column spans of two orthonormal n x k bases.
SinThetaReport sin_theta(const Matrix& v_a, const Matrix& v_b);

/// max |V^T V - I|
double orthonormality_defect(const Matrix& v);

}  // namespace netred

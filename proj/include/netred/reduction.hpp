#pragma once

#include <cstdint>
#include <vector>

#include "netred/graphs.hpp"
#include "netred/netmodel.hpp"
#include "netred/spectral.hpp"
#include "netred/types.hpp"

namespace netred {

/// Block-constant refinement V_hat = P S of a spectral embedding.
struct RefinementResult {
  Matrix s_matrix;        ///< k x k; S e1 = 1_k/sqrt(n), S^T dg{|I_i|} S = I
  Matrix v_hat;           ///< P S, orthonormal columns
  double objective = 0.0; ///< ||V_k - P S||_F^2
  double sigma_min = 0.0; ///< smallest singular value in the Procrustes step
  bool non_unique = false;  ///< sigma_min < 1e-12: another rotation attains the same objective
};

/// Closed-form minimiser of ||V_k - P S||_F^2 over S subject to
/// S e1 = 1_k/sqrt(n) and S^T dg{|I_i|} S = I_k, for a fixed partition.
///
/// The first column of S is forced. Writing the remaining columns as
/// dg{|I_i|}^{-1/2} Q O with Q an orthonormal basis of the complement of
/// dg{|I_i|}^{1/2} 1_k / sqrt(n), the problem becomes an orthogonal
/// Procrustes fit of O against Q^T P~^T V~_k, solved by one SVD.
RefinementResult refine_embedding(const Matrix& v_k, const Partition& partition);
RefinementResult refine_embedding(const SpectralData& data, const Partition& partition);

/// Orthonormal basis (k x (k-1)) of the complement of `u` (unit vector),
/// from a Householder QR of [u | I] so the first Q column is pinned to u.
Matrix orthogonal_complement(const Vector& u);

/// (S^{-1})^T dg{lambda} S^{-1} through LU solves with S^T, symmetrised.
Matrix reduced_laplacian(const Matrix& s_matrix, const Vector& lambda);

struct BlockIdealCheck {
  bool is_ideal = false;
  double residual = 0.0;  ///< ||V_k - V_hat||_F
};

/// is_ideal when the refinement residual is at most 1e-8 n.
BlockIdealCheck block_ideal_check(const Matrix& v_k, const Partition& partition);
BlockIdealCheck block_ideal_check(const SpectralData& data, const Partition& partition);

/// Structure-preserving reduced network: k aggregate nodes coupled by L_k.
struct ReducedModel {
  Partition partition;
  Vector lambda_k;
  Matrix l_k;
  std::vector<AggregateTF> aggregates;
  Matrix s_matrix;
  RationalTF coupling;

  int k() const { return partition.k(); }
  Index n() const { return partition.n(); }
};

/// Aggregates per block and the reduced Laplacian for a given partition.
struct ReducedBuild {
  ReducedModel model;
  RefinementResult refinement;
};
ReducedBuild build_reduced_model(const NetworkModel& network, const SpectralData& data,
                                 const Partition& partition);

struct ReductionDiagnostics {
  double lambda_next = 0.0;
  double refinement_residual = 0.0;
  double within_ss = 0.0;
  bool tied_spectrum = false;
  bool refinement_non_unique = false;
};

struct ReductionOutput {
  ReducedModel reduced;
  SpectralData spectral;
  RefinementResult refinement;
  ReductionDiagnostics diagnostics;
};

/// The full pipeline: bottom-k eigenpairs, clustering of the embedding,
/// aggregation per cluster, refinement and reduced Laplacian.
/// Requires 1 <= k < n and a connected graph (lambda_2 > 1e-9 scale).
ReductionOutput reduce_network(const NetworkModel& network, int k, std::uint64_t seed, int restarts = 50);

}  // namespace netred

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "netred/types.hpp"

namespace netred {

/// k-way partition of the node indices {0, ..., n-1}; no block may be empty.
class Partition {
 public:
  Partition(std::vector<int> assignment, int k);

  /// Contiguous blocks: the first sizes[0] nodes form block 0, and so on.
  static Partition contiguous(std::span<const int> sizes);

  int k() const noexcept { return k_; }
  Index n() const { return static_cast<Index>(assignment_.size()); }
  int label(Index node) const { return assignment_[static_cast<std::size_t>(node)]; }
  const std::vector<int>& assignment() const noexcept { return assignment_; }
  const std::vector<int>& block_sizes() const noexcept { return sizes_; }
  std::vector<Index> members(int block) const;

  int n_min() const;
  int n_max() const;
  /// n_max / n_min
  double balance() const;

  /// n x k indicator matrix P = [1_{I_1} ... 1_{I_k}].
  Matrix indicator() const;

 private:
  std::vector<int> assignment_;
  std::vector<int> sizes_;
  int k_;
};

/// True when `a` and `b` induce the same set partition (labels may differ).
bool same_partition(const Partition& a, const Partition& b);

/// Label bijection found -> reference maximising agreement (Hungarian method),
/// and the number of nodes it places correctly.
struct LabelMatching {
  std::vector<int> mapping;
  Index agreements = 0;
};
LabelMatching match_labels(const Partition& found, const Partition& reference);

/// Weighted stochastic block model (blocks, Q, W).
struct WsbmParams {
  std::vector<int> sizes;
  Matrix q;
  Matrix w;

  /// Throws InvalidArgument on any violated invariant.
  void validate() const;
  int k() const { return static_cast<int>(sizes.size()); }
  Index n() const;
  Partition partition() const { return Partition::contiguous(sizes); }
  /// Same Q and W with every block size multiplied by `factor`.
  WsbmParams scaled(int factor) const;
  /// B = Q ⊙ W
  Matrix block_weights() const { return q.cwiseProduct(w); }
};

/// Three-area example: sizes 20/40/20 with strong intra-area coupling.
WsbmParams three_area_params();

/// Symmetric adjacency sample. Entries (i, j), i >= j, are visited in
/// row-major order of the lower triangle (diagonal included) and each draws
/// one uniform u: A_ij = A_ji = W if u < Q, else 0. Diagonal self-loops are
/// drawn by the same rule; they cancel in L = D_A - A.
Matrix sample_adjacency(const WsbmParams& params, std::uint64_t seed);

/// dg{A 1} - A
Matrix laplacian(const Matrix& adjacency);

struct ExpectedLaplacian {
  Matrix l_blk;
  Matrix b;  ///< Q ⊙ W
};

/// Laplacian of the expected adjacency P B P^T.
ExpectedLaplacian expected_laplacian(const WsbmParams& params);

/// Closed-form spectrum of the expected Laplacian.
struct BlockSpectrum {
  std::vector<double> eigenvalues_clustered;  ///< k smallest, ascending
  std::vector<double> eigenvalue_bulk;        ///< per block, multiplicity n_i - 1
  double b_min = 0.0;                         ///< min row sum of B
  double delta = 0.0;  ///< min_i B_ii - 2 rho max_i sum_{j != i} B_ij
  double lambda_k1_lower = 0.0;  ///< b_min * n_min
  int n_min = 0;

  /// Clustered and bulk eigenvalues as one ascending multiset.
  std::vector<double> all_eigenvalues(std::span<const int> sizes) const;
};

BlockSpectrum block_spectrum_oracle(const WsbmParams& params);

/// Spectral norm of L(seed) - L_blk for every seed.
std::vector<double> concentration_stat(const WsbmParams& params, std::span<const std::uint64_t> seeds);

/// Largest |eigenvalue| of a symmetric matrix (its spectral norm).
double symmetric_spectral_norm(const Matrix& m);

}  // namespace netred

#pragma once

#include <cmath>
#include <vector>

#include "netred/graphs.hpp"
#include "netred/netmodel.hpp"
#include "netred/rng.hpp"
#include "netred/types.hpp"

namespace netred::testing {

inline double rel_diff(const CMatrix& a, const CMatrix& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

/// Random complex point with Re(s) in [0.1, 2] and Im(s) in [-5, 5].
inline Complex random_rhp_point(Rng& rng) { return {rng.uniform(0.1, 2.0), rng.uniform(-5.0, 5.0)}; }

/// Random n x k matrix with orthonormal columns (QR of a Gaussian-ish draw).
inline Matrix random_orthonormal(Index n, Index k, Rng& rng) {
  Matrix m(n, k);
  for (Index c = 0; c < k; ++c)
    for (Index r = 0; r < n; ++r) m(r, c) = rng.uniform(-1.0, 1.0);
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(n, k);
}

/// Weighted Erdos-Renyi style Laplacian: every pair connected with weight in [0.5, 2].
inline Matrix random_dense_laplacian(Index n, Rng& rng) {
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) a(i, j) = a(j, i) = rng.uniform(0.5, 2.0);
  return laplacian(a);
}

/// Random WSBM instance with strong intra-block weights, swing nodes and f = 1/s.
inline NetworkModel random_wsbm_model(const WsbmParams& params, std::uint64_t seed) {
  Rng rng(seed, streams::nodes);
  return NetworkModel(sample_swing_nodes(params.n(), SwingPrior{}, rng), integrator(),
                      laplacian(sample_adjacency(params, seed)));
}

/// Random k-block parameters with a positive spectral gap margin.
inline WsbmParams random_separated_params(int k, Rng& rng, int size_lo = 3, int size_hi = 8) {
  WsbmParams p;
  for (int i = 0; i < k; ++i) p.sizes.push_back(size_lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(size_hi - size_lo + 1))));
  p.q = Matrix::Ones(k, k);
  p.w = Matrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    p.w(i, i) = rng.uniform(20.0, 40.0);
    for (int j = 0; j < i; ++j) p.w(i, j) = p.w(j, i) = rng.uniform(0.05, 0.5);
  }
  return p;
}

}  // namespace netred::testing

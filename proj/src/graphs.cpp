#include "netred/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <limits>
#include <string>

#include "netred/errors.hpp"
#include "netred/rng.hpp"

namespace netred {

// Partition

Partition::Partition(std::vector<int> assignment, int k) : assignment_(std::move(assignment)), k_(k) {
  if (k_ < 1) throw Error(ErrorCode::InvalidArgument, "partition needs k >= 1");
  sizes_.assign(static_cast<std::size_t>(k_), 0);
  for (int label : assignment_) {
    if (label < 0 || label >= k_) {
      throw Error(ErrorCode::InvalidArgument, "block label " + std::to_string(label) + " outside [0, k)");
    }
    ++sizes_[static_cast<std::size_t>(label)];
  }
  for (int b = 0; b < k_; ++b) {
    if (sizes_[static_cast<std::size_t>(b)] == 0) {
      throw Error(ErrorCode::EmptyBlock, "block " + std::to_string(b) + " is empty");
    }
  }
}

Partition Partition::contiguous(std::span<const int> sizes) {
  std::vector<int> assignment;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    if (sizes[b] < 1) throw Error(ErrorCode::EmptyBlock, "block sizes must be positive");
    assignment.insert(assignment.end(), static_cast<std::size_t>(sizes[b]), static_cast<int>(b));
  }
  return Partition(std::move(assignment), static_cast<int>(sizes.size()));
}

std::vector<Index> Partition::members(int block) const {
  std::vector<Index> out;
  for (Index i = 0; i < n(); ++i) {
    if (label(i) == block) out.push_back(i);
  }
  return out;
}

int Partition::n_min() const { return *std::min_element(sizes_.begin(), sizes_.end()); }
int Partition::n_max() const { return *std::max_element(sizes_.begin(), sizes_.end()); }
double Partition::balance() const { return static_cast<double>(n_max()) / n_min(); }

Matrix Partition::indicator() const {
  Matrix p = Matrix::Zero(n(), k_);
  for (Index i = 0; i < n(); ++i) p(i, label(i)) = 1.0;
  return p;
}

bool same_partition(const Partition& a, const Partition& b) {
  if (a.n() != b.n() || a.k() != b.k()) return false;
  std::vector<int> forward(static_cast<std::size_t>(a.k()), -1);
  std::vector<int> backward(static_cast<std::size_t>(b.k()), -1);
  for (Index i = 0; i < a.n(); ++i) {
    const auto la = static_cast<std::size_t>(a.label(i));
    const auto lb = static_cast<std::size_t>(b.label(i));
    if (forward[la] == -1 && backward[lb] == -1) {
      forward[la] = b.label(i);
      backward[lb] = a.label(i);
    } else if (forward[la] != b.label(i) || backward[lb] != a.label(i)) {
      return false;
    }
  }
  return true;
}

LabelMatching match_labels(const Partition& found, const Partition& reference) {
  if (found.n() != reference.n()) throw Error(ErrorCode::InvalidArgument, "partitions differ in size");
  const int m = std::max(found.k(), reference.k());
  // Hungarian method on cost = -agreements (rows: found labels, cols: reference labels), 1-based.
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(m + 1),
                                        std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  for (Index i = 0; i < found.n(); ++i) {
    cost[static_cast<std::size_t>(found.label(i) + 1)][static_cast<std::size_t>(reference.label(i) + 1)] -= 1.0;
  }
  const double inf = std::numeric_limits<double>::infinity();
  const auto sz = static_cast<std::size_t>(m + 1);
  std::vector<double> u(sz, 0.0), v(sz, 0.0), minv(sz);
  std::vector<std::size_t> p(sz, 0), way(sz, 0);
  std::vector<char> used(sz);
  for (std::size_t row = 1; row < sz; ++row) {
    p[0] = row;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j < sz; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j < sz; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  LabelMatching result;
  result.mapping.assign(static_cast<std::size_t>(found.k()), -1);
  for (std::size_t j = 1; j < sz; ++j) {
    const std::size_t row = p[j];
    if (row >= 1 && static_cast<int>(row) <= found.k() && static_cast<int>(j) <= reference.k()) {
      result.mapping[row - 1] = static_cast<int>(j - 1);
    }
  }
  for (Index i = 0; i < found.n(); ++i) {
    if (result.mapping[static_cast<std::size_t>(found.label(i))] == reference.label(i)) ++result.agreements;
  }
  return result;
}

// WsbmParams

Index WsbmParams::n() const {
  Index total = 0;
  for (int s : sizes) total += s;
  return total;
}

void WsbmParams::validate() const {
  const Index k = static_cast<Index>(sizes.size());
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "block model needs k >= 1");
  for (int s : sizes) {
    if (s < 1) throw Error(ErrorCode::InvalidArgument, "block sizes must be >= 1");
  }
  if (n() < 2) throw Error(ErrorCode::InvalidArgument, "block model needs n >= 2");
  if (q.rows() != k || q.cols() != k || w.rows() != k || w.cols() != k) {
    throw Error(ErrorCode::InvalidArgument, "Q and W must be k x k");
  }
  if (!q.allFinite() || !w.allFinite()) throw Error(ErrorCode::InvalidArgument, "Q and W must be finite");
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 || (w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "Q and W must be symmetric");
  }
  if (q.minCoeff() < 0.0 || q.maxCoeff() > 1.0) throw Error(ErrorCode::InvalidArgument, "Q entries must lie in [0, 1]");
  if (w.minCoeff() < 0.0) throw Error(ErrorCode::InvalidArgument, "W entries must be nonnegative");
}

WsbmParams WsbmParams::scaled(int factor) const {
  if (factor < 1) throw Error(ErrorCode::InvalidArgument, "scale factor must be >= 1");
  WsbmParams out = *this;
  for (int& s : out.sizes) s *= factor;
  return out;
}

WsbmParams three_area_params() {
  WsbmParams p;
  p.sizes = {20, 40, 20};
  p.q.resize(3, 3);
  p.q << 0.8, 0.1, 0.1,
         0.1, 0.8, 0.1,
         0.1, 0.1, 0.8;
  p.w.resize(3, 3);
  p.w << 20.0, 0.4, 0.8,
         0.4, 20.0, 0.7,
         0.8, 0.7, 20.0;
  return p;
}

Matrix sample_adjacency(const WsbmParams& params, std::uint64_t seed) {
  params.validate();
  const Partition blocks = params.partition();
  const Index n = params.n();
  Rng rng(seed, streams::graph);
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      const double u = rng.uniform();
      if (u < params.q(blocks.label(i), blocks.label(j))) {
        const double weight = params.w(blocks.label(i), blocks.label(j));
        a(i, j) = weight;
        a(j, i) = weight;
      }
    }
  }
  return a;
}

Matrix laplacian(const Matrix& adjacency) {
  if (adjacency.rows() != adjacency.cols()) throw Error(ErrorCode::InvalidArgument, "adjacency must be square");
  Matrix l = -adjacency;
  const Vector degrees = adjacency.rowwise().sum();
  l.diagonal() += degrees;
  return l;
}

ExpectedLaplacian expected_laplacian(const WsbmParams& params) {
  params.validate();
  ExpectedLaplacian out;
  out.b = params.block_weights();
  const Matrix p = params.partition().indicator();
  const Matrix a_blk = p * out.b * p.transpose();
  out.l_blk = laplacian(a_blk);
  return out;
}

std::vector<double> BlockSpectrum::all_eigenvalues(std::span<const int> sizes) const {
  std::vector<double> out = eigenvalues_clustered;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out.insert(out.end(), static_cast<std::size_t>(sizes[i] - 1), eigenvalue_bulk[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BlockSpectrum block_spectrum_oracle(const WsbmParams& params) {
  params.validate();
  const Index k = params.k();
  const Matrix b = params.block_weights();
  Vector sizes(k);
  for (Index i = 0; i < k; ++i) sizes(i) = params.sizes[static_cast<std::size_t>(i)];

  // The k x k reduced Laplacian dg{B dg{n} 1} - B dg{n} is similar, through
  // dg{n}^{1/2}, to the symmetric dg{B n} - dg{n}^{1/2} B dg{n}^{1/2}.
  const Vector root = sizes.cwiseSqrt();
  Matrix reduced = -(root.asDiagonal() * b * root.asDiagonal());
  reduced.diagonal() += b * sizes;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(reduced, Eigen::EigenvaluesOnly);

  BlockSpectrum out;
  out.eigenvalues_clustered.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + k);
  out.eigenvalue_bulk.resize(static_cast<std::size_t>(k));
  double max_off = 0.0;
  double min_diag = std::numeric_limits<double>::infinity();
  out.b_min = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < k; ++i) {
    double bulk = sizes(i) * b(i, i);
    double off = 0.0;
    for (Index j = 0; j < k; ++j) {
      if (j == i) continue;
      bulk += b(i, j) * sizes(j);
      off += b(i, j);
    }
    out.eigenvalue_bulk[static_cast<std::size_t>(i)] = bulk;
    max_off = std::max(max_off, off);
    min_diag = std::min(min_diag, b(i, i));
    out.b_min = std::min(out.b_min, b.row(i).sum());
  }
  const Partition blocks = params.partition();
  out.n_min = blocks.n_min();
  out.delta = min_diag - 2.0 * blocks.balance() * max_off;
  out.lambda_k1_lower = out.b_min * out.n_min;
  return out;
}

double symmetric_spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> concentration_stat(const WsbmParams& params, std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "concentration_stat needs at least one seed");
  const Matrix l_blk = expected_laplacian(params).l_blk;
  std::vector<double> out;
  out.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    out.push_back(symmetric_spectral_norm(laplacian(sample_adjacency(params, seed)) - l_blk));
  }
  return out;
}

}  // namespace netred

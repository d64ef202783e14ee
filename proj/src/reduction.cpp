#include "netred/reduction.hpp"

#include <cmath>
#include <string>

#include "netred/errors.hpp"

namespace netred {

Matrix orthogonal_complement(const Vector& u) {
  const Index k = u.size();
  Matrix stacked(k, k + 1);
  stacked.col(0) = u;
  stacked.rightCols(k) = Matrix::Identity(k, k);
  Eigen::HouseholderQR<Matrix> qr(stacked);
  const Matrix q = qr.householderQ() * Matrix::Identity(k, k);
  return q.rightCols(k - 1);
}

RefinementResult refine_embedding(const Matrix& v_k, const Partition& partition) {
  const Index n = partition.n();
  const int k = partition.k();
  if (v_k.rows() != n || v_k.cols() != k) {
    throw Error(ErrorCode::InvalidArgument, "embedding must be n x k for a k-block partition");
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  if ((v_k.col(0).array() - 1.0 / root_n).abs().maxCoeff() > 1e-6) {
    throw Error(ErrorCode::InvalidArgument, "first embedding column must be 1/sqrt(n)");
  }

  Vector sizes(k);
  for (int i = 0; i < k; ++i) sizes(i) = partition.block_sizes()[static_cast<std::size_t>(i)];
  const Vector root_sizes = sizes.cwiseSqrt();
  const Matrix p = partition.indicator();

  RefinementResult out;
  out.s_matrix = Matrix::Zero(k, k);
  out.s_matrix.col(0).setConstant(1.0 / root_n);
  out.sigma_min = 1.0;

  if (k > 1) {
    const Vector u = root_sizes / root_n;
    const Matrix q = orthogonal_complement(u);
    // P~^T V~ with P~ = P dg{|I_i|}^{-1/2}
    const Matrix projected = root_sizes.cwiseInverse().asDiagonal() * (p.transpose() * v_k.rightCols(k - 1));
    const Matrix cross = q.transpose() * projected;
    Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix rotation = svd.matrixU() * svd.matrixV().transpose();
    out.sigma_min = svd.singularValues().minCoeff();
    out.non_unique = out.sigma_min < 1e-12;
    out.s_matrix.rightCols(k - 1) = root_sizes.cwiseInverse().asDiagonal() * q * rotation;
  }

  out.v_hat = p * out.s_matrix;
  out.objective = (v_k - out.v_hat).squaredNorm();
  return out;
}

RefinementResult refine_embedding(const SpectralData& data, const Partition& partition) {
  return refine_embedding(data.v_k, partition);
}

Matrix reduced_laplacian(const Matrix& s_matrix, const Vector& lambda) {
  const Index k = s_matrix.rows();
  if (s_matrix.cols() != k || lambda.size() != k) {
    throw Error(ErrorCode::InvalidArgument, "S must be k x k with k eigenvalues");
  }
  Eigen::JacobiSVD<Matrix> svd(s_matrix);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(k - 1);
  if (!(smin > 0.0) || smax / smin >= 1e10) {
    throw Error(ErrorCode::SingularS, "refinement matrix S is singular or ill-conditioned");
  }
  const Eigen::PartialPivLU<Matrix> lu(s_matrix.transpose());
  const Matrix left = lu.solve(Matrix(lambda.asDiagonal()));  // S^{-T} Λ
  const Matrix l_k = lu.solve(left.transpose()).transpose();   // S^{-T} Λ S^{-1}
  const double asym = (l_k - l_k.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * (1.0 + l_k.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::SingularS, "reduced Laplacian lost symmetry: S is numerically singular");
  }
  return 0.5 * (l_k + l_k.transpose());
}

BlockIdealCheck block_ideal_check(const Matrix& v_k, const Partition& partition) {
  const RefinementResult r = refine_embedding(v_k, partition);
  BlockIdealCheck out;
  out.residual = std::sqrt(r.objective);
  out.is_ideal = out.residual <= 1e-8 * static_cast<double>(partition.n());
  return out;
}

BlockIdealCheck block_ideal_check(const SpectralData& data, const Partition& partition) {
  return block_ideal_check(data.v_k, partition);
}

ReducedBuild build_reduced_model(const NetworkModel& network, const SpectralData& data,
                                 const Partition& partition) {
  if (partition.n() != network.size()) throw Error(ErrorCode::InvalidArgument, "partition size mismatch");
  std::vector<AggregateTF> aggregates;
  aggregates.reserve(static_cast<std::size_t>(partition.k()));
  for (int b = 0; b < partition.k(); ++b) {
    std::vector<RationalTF> members;
    for (Index i : partition.members(b)) members.push_back(network.nodes()[static_cast<std::size_t>(i)]);
    aggregates.push_back(aggregate_tf(std::move(members)));
  }
  RefinementResult refinement = refine_embedding(data, partition);
  Matrix l_k = reduced_laplacian(refinement.s_matrix, data.lambda_k);
  ReducedModel model{partition, data.lambda_k, std::move(l_k), std::move(aggregates), refinement.s_matrix,
                     network.coupling()};
  return ReducedBuild{std::move(model), std::move(refinement)};
}

namespace {

template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(ErrorCode::ReductionFailed, std::string("stage '") + name + "': " + e.what());
  }
}

}  // namespace

ReductionOutput reduce_network(const NetworkModel& network, int k, std::uint64_t seed, int restarts) {
  const Index n = network.size();
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (k >= n) {
    throw Error(ErrorCode::KTooLarge, "reduction needs k < n (k = " + std::to_string(k) +
                                          ", n = " + std::to_string(n) + ")");
  }

  SpectralData spectral = stage("eigendecomposition", [&] { return bottom_k_eig(network.laplacian(), k); });
  const double lambda2 = k >= 2 ? spectral.lambda_k(1) : *spectral.lambda_next;
  const double scale = std::max(1.0, network.laplacian().cwiseAbs().maxCoeff());
  if (lambda2 <= 1e-9 * scale) {
    throw Error(ErrorCode::DisconnectedGraph, "lambda_2 = " + std::to_string(lambda2) + ": graph is disconnected");
  }

  ClusteringResult clusters = stage("clustering", [&] { return cluster_embedding(spectral, k, restarts, seed); });
  ReducedBuild build = stage("refinement", [&] { return build_reduced_model(network, spectral, clusters.partition); });

  ReductionDiagnostics diag;
  diag.lambda_next = *spectral.lambda_next;
  diag.refinement_residual = std::sqrt(build.refinement.objective);
  diag.within_ss = clusters.within_ss;
  diag.tied_spectrum = spectral.tied;
  diag.refinement_non_unique = build.refinement.non_unique;
  return ReductionOutput{std::move(build.model), std::move(spectral), std::move(build.refinement), diag};
}

}  // namespace netred

#include "netred/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <limits>
#include <string>

#include "netred/errors.hpp"
#include "netred/rng.hpp"

namespace netred {

namespace {

void normalize_signs(Matrix& v) {
  for (Index c = 0; c < v.cols(); ++c) {
    Index arg = 0;
    double best = -1.0;
    for (Index r = 0; r < v.rows(); ++r) {
      if (std::abs(v(r, c)) > best) {
        best = std::abs(v(r, c));
        arg = r;
      }
    }
    if (v(arg, c) < 0.0) v.col(c) = -v.col(c);
  }
}

struct LloydRun {
  std::vector<int> labels;
  Matrix centroids;
  double within_ss = 0.0;
  bool degenerate = false;
};

// k-means++ seeding followed by Lloyd iterations.
LloydRun lloyd(const Matrix& x, int k, Rng& rng, int max_iterations) {
  const Index n = x.rows();
  const Index d = x.cols();
  Matrix centroids(k, d);
  std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());

  Index first = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  centroids.row(0) = x.row(first);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double dist = (x.row(i) - centroids.row(c - 1)).squaredNorm();
      nearest[static_cast<std::size_t>(i)] = std::min(nearest[static_cast<std::size_t>(i)], dist);
      total += nearest[static_cast<std::size_t>(i)];
    }
    Index pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += nearest[static_cast<std::size_t>(i)];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centroids.row(c) = x.row(pick);
  }

  LloydRun run;
  run.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<double> dist2(static_cast<std::size_t>(n), 0.0);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (x.row(i) - centroids.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double dc = (x.row(i) - centroids.row(c)).squaredNorm();
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      dist2[static_cast<std::size_t>(i)] = best_d;
      if (run.labels[static_cast<std::size_t>(i)] != best) {
        run.labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }

    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int label : run.labels) ++counts[static_cast<std::size_t>(label)];
    // Empty clusters take the point farthest from its current centroid.
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Index far = -1;
      double far_d = -1.0;
      for (Index i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])] > 1 &&
            dist2[static_cast<std::size_t>(i)] > far_d) {
          far_d = dist2[static_cast<std::size_t>(i)];
          far = i;
        }
      }
      if (far < 0) break;
      --counts[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(far)])];
      run.labels[static_cast<std::size_t>(far)] = c;
      dist2[static_cast<std::size_t>(far)] = 0.0;
      counts[static_cast<std::size_t>(c)] = 1;
      changed = true;
    }

    centroids.setZero();
    for (Index i = 0; i < n; ++i) centroids.row(run.labels[static_cast<std::size_t>(i)]) += x.row(i);
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) centroids.row(c) /= counts[static_cast<std::size_t>(c)];
    }
    if (!changed) break;
  }

  run.within_ss = 0.0;
  for (Index i = 0; i < n; ++i) {
    run.within_ss += (x.row(i) - centroids.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  for (int a = 0; a < k && !run.degenerate; ++a) {
    for (int b = a + 1; b < k; ++b) {
      if ((centroids.row(a) - centroids.row(b)).norm() <= 1e-12) {
        run.degenerate = true;
        break;
      }
    }
  }
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int label : run.labels) ++counts[static_cast<std::size_t>(label)];
  if (std::find(counts.begin(), counts.end(), 0) != counts.end()) run.degenerate = true;
  run.centroids = std::move(centroids);
  return run;
}

}  // namespace

SpectralData bottom_k_eig(const Matrix& l, int k) {
  if (l.rows() != l.cols()) throw Error(ErrorCode::NotSymmetric, "matrix is not square");
  const Index n = l.rows();
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (k > n) throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  if ((l - l.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(l);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::NearSingular, "symmetric eigensolver failed");

  SpectralData out;
  out.lambda_k = eig.eigenvalues().head(k);
  out.v_k = eig.eigenvectors().leftCols(k);
  normalize_signs(out.v_k);
  if (k < n) {
    out.lambda_next = eig.eigenvalues()(k);
    const double lk = out.lambda_k(k - 1);
    out.tied = std::abs(*out.lambda_next - lk) <= 1e-9 * (1.0 + std::abs(lk));
  }
  return out;
}

ClusteringResult kmeans_rows(const Matrix& points, int k, int restarts, std::uint64_t seed, int max_iterations) {
  if (k < 1 || k > points.rows()) throw Error(ErrorCode::KTooLarge, "k must lie in [1, number of points]");
  if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");

  const Rng base(seed, streams::clustering);
  std::optional<LloydRun> best;
  int best_restart = -1;
  for (int r = 0; r < restarts; ++r) {
    Rng rng = base.split(static_cast<std::uint64_t>(r));
    LloydRun run = lloyd(points, k, rng, max_iterations);
    if (run.degenerate) continue;
    if (!best || run.within_ss < best->within_ss) {
      best = std::move(run);
      best_restart = r;
    }
  }
  if (!best) {
    throw Error(ErrorCode::DegenerateEmbedding, "every k-means restart ended with coinciding centroids");
  }

  std::vector<int> relabel(static_cast<std::size_t>(k), -1);
  int next = 0;
  std::vector<int> labels(best->labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int& mapped = relabel[static_cast<std::size_t>(best->labels[i])];
    if (mapped < 0) mapped = next++;
    labels[i] = mapped;
  }
  return ClusteringResult{Partition(std::move(labels), k), best->within_ss, best_restart};
}

ClusteringResult cluster_embedding(const SpectralData& data, int k, int restarts, std::uint64_t seed,
                                   int max_iterations) {
  if (data.v_k.cols() < k) throw Error(ErrorCode::KTooLarge, "embedding has fewer than k columns");
  return kmeans_rows(data.v_k, k, restarts, seed, max_iterations);
}

double orthonormality_defect(const Matrix& v) {
  return (v.transpose() * v - Matrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
}

SinThetaReport sin_theta(const Matrix& v_a, const Matrix& v_b) {
  if (v_a.rows() != v_b.rows() || v_a.cols() != v_b.cols()) {
    throw Error(ErrorCode::InvalidArgument, "bases must have the same shape");
  }
  if (orthonormality_defect(v_a) > 1e-8 || orthonormality_defect(v_b) > 1e-8) {
    throw Error(ErrorCode::NotOrthonormal, "sin_theta needs orthonormal columns");
  }
  Eigen::JacobiSVD<Matrix> svd(v_a.transpose() * v_b);
  const Vector sigma = svd.singularValues().cwiseMax(0.0).cwiseMin(1.0);
  SinThetaReport out;
  double sum_sq = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) {
    out.angles.push_back(std::acos(sigma(i)));
    sum_sq += sigma(i) * sigma(i);
  }
  std::sort(out.angles.begin(), out.angles.end());
  out.frobenius = std::sqrt(std::max(0.0, static_cast<double>(v_a.cols()) - sum_sq));
  return out;
}

}  // namespace netred

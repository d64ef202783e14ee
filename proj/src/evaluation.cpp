#include "netred/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "netred/errors.hpp"

namespace netred {

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  // Largest eigenvalue of a Hermitian Gram matrix is exact to relative roundoff.
  const CMatrix gram = m.rows() >= m.cols() ? CMatrix(m.adjoint() * m) : CMatrix(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

namespace {

CMatrix solve_checked(const CMatrix& system, const CMatrix& rhs, const char* what) {
  const Eigen::PartialPivLU<CMatrix> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond >= 1e-12)) {
    throw Error(ErrorCode::NearSingular, std::string(what) + " is near-singular (rcond " + std::to_string(rcond) + ")");
  }
  return lu.solve(rhs);
}

}  // namespace

CMatrix eval_t_yu(const NetworkModel& model, Complex s) {
  const Index n = model.size();
  const Complex f = model.coupling()(s);
  CMatrix system = f * model.laplacian().cast<Complex>();
  system.diagonal() += model.node_inverses(s);
  return solve_checked(system, CMatrix::Identity(n, n), "G^{-1}(s) + f(s) L");
}

CMatrix eval_t_k(const NetworkModel& model, const SpectralData& data, Complex s) {
  if (data.n() != model.size()) throw Error(ErrorCode::InvalidArgument, "spectral data size mismatch");
  const Complex f = model.coupling()(s);
  const CMatrix v = data.v_k.cast<Complex>();
  CMatrix core = v.adjoint() * model.node_inverses(s).asDiagonal() * v;
  core.diagonal() += f * data.lambda_k.cast<Complex>();
  const CMatrix inner = solve_checked(core, v.adjoint(), "k x k core of T_k");
  return v * inner;
}

CMatrix eval_reduced_core(const ReducedModel& reduced, Complex s) {
  const Index k = reduced.k();
  CVector g_hat(k);
  for (Index i = 0; i < k; ++i) g_hat(i) = reduced.aggregates[static_cast<std::size_t>(i)](s);
  const Complex f = reduced.coupling(s);
  CMatrix loop = CMatrix::Identity(k, k) + f * (g_hat.asDiagonal() * reduced.l_k.cast<Complex>());
  return solve_checked(loop, CMatrix(g_hat.asDiagonal()), "I_k + G_hat L_k f");
}

CMatrix eval_t_hat_k(const ReducedModel& reduced, Complex s) {
  const CMatrix core = eval_reduced_core(reduced, s);
  const auto& label = reduced.partition.assignment();
  const Index n = reduced.n();
  CMatrix out(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) out(r, c) = core(label[static_cast<std::size_t>(r)], label[static_cast<std::size_t>(c)]);
  }
  return out;
}

CMatrix eval_t_hat_k(const NetworkModel& model, const ReducedModel& reduced, Complex s) {
  if (reduced.n() != model.size()) throw Error(ErrorCode::InvalidArgument, "reduced model size mismatch");
  return eval_t_hat_k(reduced, s);
}

std::optional<double> theorem1_bound(double m1, double m2, double f_abs, double lambda_k1) {
  if (m1 < 0 || m2 < 0 || f_abs < 0 || lambda_k1 < 0) {
    throw Error(ErrorCode::InvalidArgument, "bound inputs must be nonnegative");
  }
  const double margin = f_abs * lambda_k1 - m2 - m1 * m2 * m2;
  if (!(margin > 0.0)) return std::nullopt;
  const double num = m1 * m2 + 1.0;
  return num * num / margin;
}

ErrorReport band_error(const NetworkModel& model, const ReducedModel& reduced, const SpectralData& data,
                       const FreqGrid& grid, const BandErrorOptions& options) {
  if (reduced.n() != model.size() || data.n() != model.size()) {
    throw Error(ErrorCode::InvalidArgument, "model, reduced model and spectral data disagree on n");
  }
  ErrorReport report;
  report.per_freq.reserve(grid.points.size());
  for (double omega : grid.points) {
    FreqErrorPoint pt;
    pt.omega = omega;
    const Complex s(0.0, omega);
    try {
      const CMatrix t_yu = eval_t_yu(model, s);
      const CMatrix t_hat = eval_t_hat_k(reduced, s);
      pt.err_yu_hatk = spectral_norm(t_yu - t_hat);
      if (options.with_rank_k_bound) {
        const CMatrix t_k = eval_t_k(model, data, s);
        pt.err_yu_tk = spectral_norm(t_yu - t_k);
        pt.err_tk_hatk = spectral_norm(t_k - t_hat);
        if (data.lambda_next) {
          const double m1 = spectral_norm(t_k);
          const double m2 = model.node_inverses(s).cwiseAbs().maxCoeff();
          const double f_abs = std::abs(model.coupling()(s));
          pt.bound = theorem1_bound(m1, m2, f_abs, *data.lambda_next);
          pt.feasible = pt.bound.has_value();
        }
      }
    } catch (const Error& e) {
      pt.ok = false;
      pt.failure = e.what();
      pt.err_yu_tk.reset();
      pt.err_tk_hatk.reset();
      pt.bound.reset();
      pt.feasible = false;
      ++report.failures;
    }
    if (pt.ok) {
      report.sup_err = std::max(report.sup_err, pt.err_yu_hatk);
      if (pt.err_tk_hatk) report.sup_err_tk_hatk = std::max(report.sup_err_tk_hatk, *pt.err_tk_hatk);
      if (pt.feasible && *pt.err_yu_tk > *pt.bound + 1e-7 * (1.0 + *pt.bound)) report.bound_satisfied = false;
    }
    report.per_freq.push_back(std::move(pt));
  }
  return report;
}

double hinf_grid(const NetworkModel& model, const FreqGrid& grid) {
  double best = 0.0;
  for (double omega : grid.points) best = std::max(best, spectral_norm(eval_t_yu(model, Complex(0.0, omega))));
  return best;
}

double hinf_grid(const ReducedModel& reduced, const FreqGrid& grid) {
  // P X P^T = P~ (D^{1/2} X D^{1/2}) P~^T with P~ having orthonormal columns,
  // so the k x k scaled core has the same norm as the broadcast n x n response.
  const Index k = reduced.k();
  CVector root(k);
  for (Index i = 0; i < k; ++i) root(i) = std::sqrt(static_cast<double>(reduced.partition.block_sizes()[static_cast<std::size_t>(i)]));
  double best = 0.0;
  for (double omega : grid.points) {
    const CMatrix core = eval_reduced_core(reduced, Complex(0.0, omega));
    best = std::max(best, spectral_norm(root.asDiagonal() * core * root.asDiagonal()));
  }
  return best;
}

}  // namespace netred

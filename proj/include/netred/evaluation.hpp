#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netred/freq_grid.hpp"
#include "netred/netmodel.hpp"
#include "netred/reduction.hpp"
#include "netred/spectral.hpp"
#include "netred/types.hpp"

namespace netred {

/// Largest singular value.
double spectral_norm(const CMatrix& m);

/// T_yu(s) = (G^{-1}(s) + f(s) L)^{-1}. NearSingular when the reciprocal
/// condition estimate of the n x n system drops below 1e-12.
CMatrix eval_t_yu(const NetworkModel& model, Complex s);

/// Rank-k approximant V_k (V_k^T G^{-1}(s) V_k + f(s) Lambda_k)^{-1} V_k^T.
CMatrix eval_t_k(const NetworkModel& model, const SpectralData& data, Complex s);

/// The reduced network's k x k response (I_k + G_hat(s) L_k f(s))^{-1} G_hat(s).
CMatrix eval_reduced_core(const ReducedModel& reduced, Complex s);

/// P (I_k + G_hat(s) L_k f(s))^{-1} G_hat(s) P^T, broadcast to all n nodes.
CMatrix eval_t_hat_k(const ReducedModel& reduced, Complex s);
CMatrix eval_t_hat_k(const NetworkModel& model, const ReducedModel& reduced, Complex s);

/// Right-hand side of the rank-k error bound
///   (m1 m2 + 1)^2 / (f_abs lambda_k1 - m2 - m1 m2^2),
/// or nullopt when f_abs lambda_k1 <= m2 + m1 m2^2.
std::optional<double> theorem1_bound(double m1, double m2, double f_abs, double lambda_k1);

struct FreqErrorPoint {
  double omega = 0.0;
  bool ok = true;                   ///< false when evaluation failed at this frequency
  std::string failure;              ///< error message when !ok
  double err_yu_hatk = 0.0;         ///< ||T_yu - T_hat_k||
  std::optional<double> err_yu_tk;  ///< ||T_yu - T_k||, absent when skipped
  std::optional<double> err_tk_hatk;  ///< ||T_k - T_hat_k||, zero for a block-ideal Laplacian
  std::optional<double> bound;      ///< rank-k bound; absent when infeasible or skipped
  bool feasible = false;            ///< bound precondition held
};

struct ErrorReport {
  std::vector<FreqErrorPoint> per_freq;
  double sup_err = 0.0;  ///< max err_yu_hatk over successful points
  double sup_err_tk_hatk = 0.0;  ///< max err_tk_hatk (when evaluated)
  bool bound_satisfied = true;  ///< err_yu_tk <= bound + 1e-7 (1 + bound) wherever feasible
  int failures = 0;
};

struct BandErrorOptions {
  bool with_rank_k_bound = true;  ///< also evaluate T_k and the bound (costs an extra n x n norm)
};

ErrorReport band_error(const NetworkModel& model, const ReducedModel& reduced, const SpectralData& data,
                       const FreqGrid& grid, const BandErrorOptions& options = {});

/// max over the grid of ||T(j w)||: a lower estimate of the H-infinity norm.
double hinf_grid(const NetworkModel& model, const FreqGrid& grid);
double hinf_grid(const ReducedModel& reduced, const FreqGrid& grid);

}  // namespace netred

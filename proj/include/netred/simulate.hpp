#pragma once

#include <string>
#include <vector>

#include "netred/graphs.hpp"
#include "netred/netmodel.hpp"
#include "netred/reduction.hpp"
#include "netred/types.hpp"

namespace netred {

/// x' = A x + B u, y = C x + D u.
struct StateSpace {
  Matrix a;
  Matrix b;
  Matrix c;
  Matrix d;

  Index states() const { return a.rows(); }
  Index inputs() const { return d.cols(); }
  Index outputs() const { return d.rows(); }

  /// C (sI - A)^{-1} B + D
  CMatrix frequency_response(Complex s) const;
  /// Throws InvalidArgument on inconsistent shapes or non-finite entries.
  void validate() const;
};

/// Controllable canonical realization of a proper SISO transfer function.
StateSpace realize(const RationalTF& tf);

/// Closed loop y = G (u - f L y) with G = blkdiag(nodes) and the coupling f(s)
/// realized once per node and lifted through L. IllPosed when the
/// feedthrough loop I + D_G D_f L is singular.
StateSpace close_loop(const std::vector<StateSpace>& nodes, const StateSpace& coupling, const Matrix& l);

/// Input/output broadcast through the partition: u_red = P^T u, y = P y_red.
StateSpace broadcast(const StateSpace& reduced, const Partition& partition);

StateSpace full_closed_loop(const NetworkModel& model);
/// Reduced closed loop in broadcast (n-input, n-output) form.
StateSpace reduced_closed_loop(const ReducedModel& reduced);

struct SimResult {
  std::vector<double> times;
  Matrix outputs;  ///< times x outputs
  std::string input_spec;
};

/// Fixed-step RK4 from rest with a unit step on `input_node` (0-based).
/// Diverged when any state magnitude exceeds 1e12.
SimResult step_response(const StateSpace& sys, Index input_node, double t_end, double dt);

/// ||a - b||_2 / ||a||_2 over sampled trajectories (0 when both vanish).
double relative_l2(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

struct GroupComparison {
  int group = 0;
  double max_member_error = 0.0;  ///< max over members of rel. L2(full member, broadcast aggregate)
  double spread = 0.0;            ///< max over members of rel. L2(group mean, full member)
};

struct ResponseComparison {
  std::vector<GroupComparison> groups;
  std::vector<double> node_errors;  ///< per node rel. L2 between full and reduced
  double max_node_error = 0.0;
  /// min over group pairs of ||y_a - y_b|| / max(||y_a||, ||y_b||) on the
  /// reduced group outputs; how far apart the group responses are.
  double min_group_separation = 0.0;
};

/// Both results must share the time grid and carry one column per node
/// (reduced results in broadcast form). GridMismatch otherwise.
ResponseComparison compare_responses(const SimResult& full, const SimResult& reduced, const Partition& partition);

}  // namespace netred

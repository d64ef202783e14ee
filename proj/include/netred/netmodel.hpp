#pragma once

#include <span>
#include <vector>

#include "netred/freq_grid.hpp"
#include "netred/polynomial.hpp"
#include "netred/rng.hpp"
#include "netred/types.hpp"

namespace netred {

/// Proper rational transfer function num(s)/den(s), coefficients ascending.
///
/// Stored in canonical form: trailing zeros trimmed and den monic.
class RationalTF {
 public:
  RationalTF(std::vector<double> num, std::vector<double> den);

  static RationalTF constant(double gain);

  const std::vector<double>& num() const noexcept { return num_; }
  const std::vector<double>& den() const noexcept { return den_; }
  int num_degree() const { return poly::degree(num_); }
  int den_degree() const { return poly::degree(den_); }
  bool is_zero() const { return poly::is_zero(num_); }

  /// num(s)/den(s); throws PoleAtS when |den(s)| <= 1e-14 * max|den coeff|.
  Complex operator()(Complex s) const;
  /// den(s)/num(s); throws PoleAtS near a zero of num.
  Complex inverse(Complex s) const;

  /// Coefficient-wise comparison of canonical forms.
  bool approx_equal(const RationalTF& other, double tol = 1e-12) const;

 private:
  std::vector<double> num_;
  std::vector<double> den_;
};

Complex tf_eval(const RationalTF& tf, Complex s);

/// Aggregate dynamics of a coherent group: (sum_i g_i^{-1}(s))^{-1}.
///
/// Evaluation-based; `to_rational` builds an explicit fraction only where a
/// realization is needed (time-domain simulation of the reduced network).
class AggregateTF {
 public:
  explicit AggregateTF(std::vector<RationalTF> members);

  Complex operator()(Complex s) const;
  /// sum_i g_i^{-1}(s)
  Complex inverse(Complex s) const;

  std::span<const RationalTF> members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  /// Common-denominator form. Members sharing a numerator shape are summed
  /// first, so groups of identical-numerator nodes (the usual case) stay at
  /// the node order instead of growing with the group size.
  RationalTF to_rational() const;

 private:
  std::vector<RationalTF> members_;
};

AggregateTF aggregate_tf(std::vector<RationalTF> members);

/// Node dynamics G(s) = diag{g_i}, coupling dynamics f(s) and Laplacian L.
class NetworkModel {
 public:
  NetworkModel(std::vector<RationalTF> nodes, RationalTF coupling, Matrix laplacian);

  Index size() const { return laplacian_.rows(); }
  const std::vector<RationalTF>& nodes() const noexcept { return nodes_; }
  const RationalTF& coupling() const noexcept { return coupling_; }
  const Matrix& laplacian() const noexcept { return laplacian_; }

  /// diag{g_i^{-1}(s)} as a vector.
  CVector node_inverses(Complex s) const;

 private:
  std::vector<RationalTF> nodes_;
  RationalTF coupling_;
  Matrix laplacian_;
};

/// Throws InvalidArgument unless `l` is a symmetric, zero-row-sum matrix with
/// nonpositive off-diagonal entries.
void validate_laplacian(const Matrix& l);

/// Grid certificate for the passivity/boundedness assumptions on the node and
/// coupling dynamics. Quantities are maxima/minima over a finite grid, not
/// proofs over the continuous band.
struct PassivityReport {
  double gamma = 0.0;    ///< max |g_i(jw)|^2 / Re g_i(jw)
  double m_eta = 0.0;    ///< max |g_i^{-1}(jw)|
  double f_lower = 0.0;  ///< min |f(jw)|
  double eta = 0.0;
  std::vector<double> grid;
  /// max |Im f(jw)| over the grid. Nonzero for f = 1/s, which the positive-real
  /// coupling condition formally excludes; reported instead of rejected.
  double coupling_axis_imag = 0.0;
};

PassivityReport passivity_check(const NetworkModel& model, double eta, int grid_size,
                                double omega_min = 1e-3);

// Presets.

/// g(s) = 1/(m s + d): first-order swing dynamics, output strictly passive
/// with gamma = 1/d.
RationalTF first_order_swing(double inertia, double damping);

/// f(s) = 1/s
RationalTF integrator();

struct SwingPrior {
  double m_lo = 1.0;
  double m_hi = 3.0;
  double d_lo = 0.5;
  double d_hi = 1.5;
};

/// n swing nodes with m ~ U[m_lo, m_hi], d ~ U[d_lo, d_hi], drawn in node
/// order as (m_0, d_0, m_1, d_1, ...).
std::vector<RationalTF> sample_swing_nodes(Index n, const SwingPrior& prior, Rng& rng);

}  // namespace netred

#include "netred/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "netred/errors.hpp"

namespace netred {

FreqGrid FreqGrid::log_spaced(double omega_min, double eta, int size) {
  if (!(omega_min > 0.0) || !(eta > omega_min) || size < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "frequency grid needs 0 < omega_min < eta and at least 2 points");
  }
  FreqGrid grid;
  grid.eta = eta;
  grid.omega_min = omega_min;
  grid.points.resize(static_cast<std::size_t>(size));
  const double lo = std::log10(omega_min);
  const double hi = std::log10(eta);
  for (int i = 0; i < size; ++i) {
    grid.points[static_cast<std::size_t>(i)] = std::pow(10.0, lo + (hi - lo) * i / (size - 1));
  }
  grid.points.front() = omega_min;
  grid.points.back() = eta;
  return grid;
}

// RationalTF

RationalTF::RationalTF(std::vector<double> num, std::vector<double> den) {
  if (den.empty() || poly::is_zero(den)) {
    throw Error(ErrorCode::InvalidArgument, "denominator is identically zero");
  }
  for (double c : num) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite numerator coefficient");
  }
  for (double c : den) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite denominator coefficient");
  }
  num = poly::trim(std::move(num));
  den = poly::trim(std::move(den));
  if (!poly::is_zero(num) && poly::degree(num) > poly::degree(den)) {
    throw Error(ErrorCode::ImproperTF, "numerator degree exceeds denominator degree");
  }
  const double lead = den.back();
  num_ = poly::scale(num, 1.0 / lead);
  den_ = poly::scale(den, 1.0 / lead);
  den_.back() = 1.0;
}

RationalTF RationalTF::constant(double gain) { return RationalTF({gain}, {1.0}); }

Complex RationalTF::operator()(Complex s) const {
  const Complex d = poly::eval(den_, s);
  if (std::abs(d) <= 1e-14 * poly::max_abs(den_)) {
    std::ostringstream os;
    os << "evaluation at or near a pole, s = " << s;
    throw Error(ErrorCode::PoleAtS, os.str());
  }
  return poly::eval(num_, s) / d;
}

Complex RationalTF::inverse(Complex s) const {
  if (is_zero()) throw Error(ErrorCode::ZeroNumerator, "inverse of the zero function");
  const Complex n = poly::eval(num_, s);
  if (std::abs(n) <= 1e-14 * poly::max_abs(num_)) {
    std::ostringstream os;
    os << "inverse evaluated at or near a zero, s = " << s;
    throw Error(ErrorCode::PoleAtS, os.str());
  }
  return poly::eval(den_, s) / n;
}

bool RationalTF::approx_equal(const RationalTF& other, double tol) const {
  auto close = [tol](const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t len = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < len; ++i) {
      const double x = i < a.size() ? a[i] : 0.0;
      const double y = i < b.size() ? b[i] : 0.0;
      if (std::abs(x - y) > tol) return false;
    }
    return true;
  };
  return close(num_, other.num_) && close(den_, other.den_);
}

Complex tf_eval(const RationalTF& tf, Complex s) { return tf(s); }

// AggregateTF

AggregateTF::AggregateTF(std::vector<RationalTF> members) : members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorCode::InvalidArgument, "aggregate of an empty group");
  for (const auto& g : members_) {
    if (g.is_zero()) throw Error(ErrorCode::ZeroNumerator, "member with zero numerator has no inverse");
  }
}

Complex AggregateTF::inverse(Complex s) const {
  Complex sum(0.0, 0.0);
  for (const auto& g : members_) sum += g.inverse(s);
  return sum;
}

Complex AggregateTF::operator()(Complex s) const {
  const Complex inv = inverse(s);
  if (std::abs(inv) == 0.0) throw Error(ErrorCode::PoleAtS, "aggregate inverse vanishes");
  return 1.0 / inv;
}

RationalTF AggregateTF::to_rational() const {
  // g_j = c_j q_j / den_j with q_j monic, so g_j^{-1} = (den_j / c_j) / q_j.
  // Members whose q_j agree are summed over the shared q.
  struct Term {
    poly::Coeffs q;
    poly::Coeffs numerator;
  };
  std::vector<Term> terms;
  for (const auto& g : members_) {
    const auto& num = g.num();
    const int deg = poly::degree(num);
    const double lead = num[static_cast<std::size_t>(deg)];
    poly::Coeffs q(num.begin(), num.begin() + deg + 1);
    for (double& c : q) c /= lead;
    const poly::Coeffs part = poly::scale(g.den(), 1.0 / lead);
    auto same = std::find_if(terms.begin(), terms.end(), [&](const Term& t) {
      if (t.q.size() != q.size()) return false;
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (std::abs(t.q[i] - q[i]) > 1e-12 * (1.0 + std::abs(q[i]))) return false;
      }
      return true;
    });
    if (same == terms.end()) {
      terms.push_back({q, part});
    } else {
      same->numerator = poly::add(same->numerator, part);
    }
  }
  // 1 / sum_t (N_t / q_t) = prod q / sum_t N_t prod_{u != t} q_u
  poly::Coeffs numerator{1.0};
  for (const auto& t : terms) numerator = poly::multiply(numerator, t.q);
  poly::Coeffs denominator{0.0};
  for (std::size_t t = 0; t < terms.size(); ++t) {
    poly::Coeffs prod = terms[t].numerator;
    for (std::size_t u = 0; u < terms.size(); ++u) {
      if (u != t) prod = poly::multiply(prod, terms[u].q);
    }
    denominator = poly::add(denominator, prod);
  }
  return RationalTF(numerator, denominator);
}

AggregateTF aggregate_tf(std::vector<RationalTF> members) { return AggregateTF(std::move(members)); }

// NetworkModel

void validate_laplacian(const Matrix& l) {
  if (l.rows() != l.cols()) throw Error(ErrorCode::InvalidArgument, "Laplacian must be square");
  if (!l.allFinite()) throw Error(ErrorCode::InvalidArgument, "Laplacian has non-finite entries");
  const Index n = l.rows();
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  if ((l - l.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::NotSymmetric, "Laplacian is not symmetric");
  }
  if (l.rowwise().sum().cwiseAbs().maxCoeff() > 1e-10 * static_cast<double>(n) * scale) {
    throw Error(ErrorCode::InvalidArgument, "Laplacian row sums are not zero");
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && l(i, j) > 0.0) {
        throw Error(ErrorCode::InvalidArgument, "Laplacian has a positive off-diagonal entry");
      }
    }
  }
}

NetworkModel::NetworkModel(std::vector<RationalTF> nodes, RationalTF coupling, Matrix laplacian)
    : nodes_(std::move(nodes)), coupling_(std::move(coupling)), laplacian_(std::move(laplacian)) {
  if (laplacian_.rows() < 2) throw Error(ErrorCode::InvalidArgument, "a network needs n >= 2 nodes");
  if (static_cast<Index>(nodes_.size()) != laplacian_.rows()) {
    throw Error(ErrorCode::InvalidArgument, "number of node transfer functions does not match Laplacian");
  }
  validate_laplacian(laplacian_);
}

CVector NetworkModel::node_inverses(Complex s) const {
  CVector out(size());
  for (Index i = 0; i < size(); ++i) out(i) = nodes_[static_cast<std::size_t>(i)].inverse(s);
  return out;
}

PassivityReport passivity_check(const NetworkModel& model, double eta, int grid_size, double omega_min) {
  if (!(eta > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta must be positive");
  if (grid_size < 2) throw Error(ErrorCode::InvalidArgument, "grid_size must be at least 2");
  const FreqGrid grid = FreqGrid::log_spaced(omega_min, eta, grid_size);

  PassivityReport report;
  report.eta = eta;
  report.grid = grid.points;
  report.f_lower = std::numeric_limits<double>::infinity();
  for (double w : grid.points) {
    const Complex s(0.0, w);
    for (std::size_t i = 0; i < model.nodes().size(); ++i) {
      const Complex g = model.nodes()[i](s);
      if (!(g.real() > 0.0)) {
        std::ostringstream os;
        os << "Re g_" << i << "(j" << w << ") = " << g.real() << " <= 0";
        throw Error(ErrorCode::NotPassiveOnGrid, os.str());
      }
      report.gamma = std::max(report.gamma, std::norm(g) / g.real());
      report.m_eta = std::max(report.m_eta, std::abs(model.nodes()[i].inverse(s)));
    }
    const Complex f = model.coupling()(s);
    report.f_lower = std::min(report.f_lower, std::abs(f));
    report.coupling_axis_imag = std::max(report.coupling_axis_imag, std::abs(f.imag()));
  }
  if (report.f_lower < 1e-12) {
    throw Error(ErrorCode::CouplingVanishes, "coupling magnitude vanishes on the grid");
  }
  return report;
}

RationalTF first_order_swing(double inertia, double damping) {
  if (!(inertia > 0.0) || !(damping > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "swing inertia and damping must be positive");
  }
  return RationalTF({1.0}, {damping, inertia});
}

RationalTF integrator() { return RationalTF({1.0}, {0.0, 1.0}); }

std::vector<RationalTF> sample_swing_nodes(Index n, const SwingPrior& prior, Rng& rng) {
  std::vector<RationalTF> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double m = rng.uniform(prior.m_lo, prior.m_hi);
    const double d = rng.uniform(prior.d_lo, prior.d_hi);
    out.push_back(first_order_swing(m, d));
  }
  return out;
}

}  // namespace netred

#include "netred/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netred/errors.hpp"

namespace netred {

CMatrix StateSpace::frequency_response(Complex s) const {
  const Index m = states();
  CMatrix out = d.cast<Complex>();
  if (m == 0) return out;
  CMatrix resolvent = -a.cast<Complex>();
  resolvent.diagonal().array() += s;
  out += c.cast<Complex>() * resolvent.partialPivLu().solve(b.cast<Complex>());
  return out;
}

void StateSpace::validate() const {
  const Index m = a.rows();
  if (a.cols() != m || b.rows() != m || c.cols() != m || c.rows() != d.rows() || b.cols() != d.cols()) {
    throw Error(ErrorCode::InvalidArgument, "state-space matrices have inconsistent shapes");
  }
  if (!a.allFinite() || !b.allFinite() || !c.allFinite() || !d.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "state-space matrices contain non-finite entries");
  }
}

StateSpace realize(const RationalTF& tf) {
  const auto& den = tf.den();  // monic
  const int m = tf.den_degree();
  if (tf.num_degree() > m) throw Error(ErrorCode::ImproperTF, "cannot realize an improper transfer function");
  std::vector<double> num = tf.num();
  num.resize(static_cast<std::size_t>(m) + 1, 0.0);
  const double feedthrough = num[static_cast<std::size_t>(m)];

  StateSpace ss;
  ss.a = Matrix::Zero(m, m);
  ss.b = Matrix::Zero(m, 1);
  ss.c = Matrix::Zero(1, m);
  ss.d = Matrix::Constant(1, 1, feedthrough);
  if (m == 0) return ss;
  for (int i = 0; i + 1 < m; ++i) ss.a(i, i + 1) = 1.0;
  for (int j = 0; j < m; ++j) {
    ss.a(m - 1, j) = -den[static_cast<std::size_t>(j)];
    ss.c(0, j) = num[static_cast<std::size_t>(j)] - feedthrough * den[static_cast<std::size_t>(j)];
  }
  ss.b(m - 1, 0) = 1.0;
  return ss;
}

StateSpace close_loop(const std::vector<StateSpace>& nodes, const StateSpace& coupling, const Matrix& l) {
  const Index n = static_cast<Index>(nodes.size());
  if (l.rows() != n || l.cols() != n) throw Error(ErrorCode::InvalidArgument, "Laplacian size mismatch");
  coupling.validate();
  if (coupling.inputs() != 1 || coupling.outputs() != 1) {
    throw Error(ErrorCode::InvalidArgument, "coupling must be SISO");
  }

  // Block-diagonal node system G.
  Index mg = 0;
  for (const auto& g : nodes) {
    g.validate();
    if (g.inputs() != 1 || g.outputs() != 1) throw Error(ErrorCode::InvalidArgument, "node systems must be SISO");
    mg += g.states();
  }
  Matrix ag = Matrix::Zero(mg, mg), bg = Matrix::Zero(mg, n), cg = Matrix::Zero(n, mg);
  Vector dg(n);
  Index off = 0;
  for (Index i = 0; i < n; ++i) {
    const auto& g = nodes[static_cast<std::size_t>(i)];
    const Index mi = g.states();
    ag.block(off, off, mi, mi) = g.a;
    bg.block(off, i, mi, 1) = g.b;
    cg.block(i, off, 1, mi) = g.c;
    dg(i) = g.d(0, 0);
    off += mi;
  }

  // Coupling K = f L: one copy of f per node, fed by L y.
  const Index mf = coupling.states();
  const Index mk = mf * n;
  Matrix ak = Matrix::Zero(mk, mk), bk = Matrix::Zero(mk, n), ck = Matrix::Zero(n, mk);
  for (Index i = 0; i < n; ++i) {
    ak.block(i * mf, i * mf, mf, mf) = coupling.a;
    bk.block(i * mf, 0, mf, n) = coupling.b * l.row(i);
    ck.block(i, i * mf, 1, mf) = coupling.c;
  }
  const Matrix dk = coupling.d(0, 0) * l;

  // y = E (Cg xg - Dg Ck xk + Dg u), E = (I + Dg Dk)^{-1}
  const Matrix loop = Matrix::Identity(n, n) + dg.asDiagonal() * dk;
  const Eigen::FullPivLU<Matrix> lu(loop);
  if (!lu.isInvertible() || lu.rcond() < 1e-12) {
    throw Error(ErrorCode::IllPosed, "feedthrough loop I + D_G D_fL is singular");
  }
  const Matrix e = lu.inverse();
  const Matrix y_x = e * (Matrix(n, mg + mk) << cg, -(dg.asDiagonal() * ck)).finished();
  const Matrix y_u = e * Matrix(dg.asDiagonal());

  StateSpace out;
  const Index m = mg + mk;
  out.a = Matrix::Zero(m, m);
  out.b = Matrix::Zero(m, n);
  // xg' = Ag xg + Bg u - Bg (Ck xk + Dk y)
  out.a.topLeftCorner(mg, mg) = ag;
  out.a.topRightCorner(mg, mk) = -bg * ck;
  out.a.topRows(mg) -= bg * dk * y_x;
  out.b.topRows(mg) = bg - bg * dk * y_u;
  // xk' = Ak xk + Bk y
  out.a.bottomRightCorner(mk, mk) = ak;
  out.a.bottomRows(mk) += bk * y_x;
  out.b.bottomRows(mk) = bk * y_u;
  out.c = y_x;
  out.d = y_u;
  return out;
}

StateSpace broadcast(const StateSpace& reduced, const Partition& partition) {
  if (reduced.inputs() != partition.k() || reduced.outputs() != partition.k()) {
    throw Error(ErrorCode::InvalidArgument, "reduced system must have k inputs and outputs");
  }
  const Matrix p = partition.indicator();
  return StateSpace{reduced.a, reduced.b * p.transpose(), p * reduced.c, p * reduced.d * p.transpose()};
}

StateSpace full_closed_loop(const NetworkModel& model) {
  std::vector<StateSpace> nodes;
  nodes.reserve(model.nodes().size());
  for (const auto& g : model.nodes()) nodes.push_back(realize(g));
  return close_loop(nodes, realize(model.coupling()), model.laplacian());
}

StateSpace reduced_closed_loop(const ReducedModel& reduced) {
  std::vector<StateSpace> nodes;
  nodes.reserve(reduced.aggregates.size());
  for (const auto& g : reduced.aggregates) nodes.push_back(realize(g.to_rational()));
  return broadcast(close_loop(nodes, realize(reduced.coupling), reduced.l_k), reduced.partition);
}

SimResult step_response(const StateSpace& sys, Index input_node, double t_end, double dt) {
  sys.validate();
  if (!(dt > 0.0) || !(t_end >= dt)) throw Error(ErrorCode::InvalidArgument, "need dt > 0 and t_end >= dt");
  if (input_node < 0 || input_node >= sys.inputs()) {
    throw Error(ErrorCode::InvalidArgument, "input_node out of range");
  }
  const auto steps = static_cast<Index>(std::llround(t_end / dt));
  const Index m = sys.states();

  // With a constant input, one RK4 step on x' = A x + b is exactly
  // x+ = Phi x + Gamma b with the degree-4 Taylor polynomials below.
  const Matrix ha = dt * sys.a;
  const Matrix ha2 = ha * ha;
  const Matrix ha3 = ha2 * ha;
  const Matrix id = Matrix::Identity(m, m);
  const Matrix phi = id + ha + ha2 / 2.0 + ha3 / 6.0 + ha3 * ha / 24.0;
  const Vector gamma_b = dt * (id + ha / 2.0 + ha2 / 6.0 + ha3 / 24.0) * sys.b.col(input_node);

  SimResult out;
  out.input_spec = "unit step on input " + std::to_string(input_node) + " at t = 0";
  out.times.resize(static_cast<std::size_t>(steps) + 1);
  out.outputs.resize(steps + 1, sys.outputs());
  const Vector feed = sys.d.col(input_node);
  Vector x = Vector::Zero(m);
  Vector next(m);
  for (Index t = 0; t <= steps; ++t) {
    out.times[static_cast<std::size_t>(t)] = static_cast<double>(t) * dt;
    out.outputs.row(t) = (sys.c * x + feed).transpose();
    if (t == steps) break;
    next.noalias() = phi * x;
    x = next + gamma_b;
    if (m > 0 && !(x.cwiseAbs().maxCoeff() <= 1e12)) {
      throw Error(ErrorCode::Diverged, "state magnitude exceeded 1e12 at t = " + std::to_string((t + 1) * dt));
    }
  }
  return out;
}

double relative_l2(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  const double num = (a - b).norm();
  const double den = a.norm();
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

ResponseComparison compare_responses(const SimResult& full, const SimResult& reduced, const Partition& partition) {
  const Index n = partition.n();
  if (full.times.size() != reduced.times.size() || full.outputs.rows() != reduced.outputs.rows()) {
    throw Error(ErrorCode::GridMismatch, "time grids differ in length");
  }
  for (std::size_t i = 0; i < full.times.size(); ++i) {
    if (std::abs(full.times[i] - reduced.times[i]) > 1e-12 * (1.0 + std::abs(full.times[i]))) {
      throw Error(ErrorCode::GridMismatch, "time grids differ at sample " + std::to_string(i));
    }
  }
  if (full.outputs.cols() != n || reduced.outputs.cols() != n) {
    throw Error(ErrorCode::GridMismatch, "both results need one output column per node");
  }

  ResponseComparison out;
  out.node_errors.resize(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const double e = relative_l2(full.outputs.col(j), reduced.outputs.col(j));
    out.node_errors[static_cast<std::size_t>(j)] = e;
    out.max_node_error = std::max(out.max_node_error, e);
  }

  std::vector<Vector> aggregate;
  for (int g = 0; g < partition.k(); ++g) {
    const auto members = partition.members(g);
    Vector mean = Vector::Zero(full.outputs.rows());
    for (Index j : members) mean += full.outputs.col(j);
    mean /= static_cast<double>(members.size());
    GroupComparison gc;
    gc.group = g;
    for (Index j : members) {
      gc.max_member_error = std::max(gc.max_member_error, out.node_errors[static_cast<std::size_t>(j)]);
      gc.spread = std::max(gc.spread, relative_l2(full.outputs.col(j), mean));
    }
    out.groups.push_back(gc);
    aggregate.emplace_back(reduced.outputs.col(members.front()));
  }

  out.min_group_separation = partition.k() > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t a = 0; a < aggregate.size(); ++a) {
    for (std::size_t b = a + 1; b < aggregate.size(); ++b) {
      const double scale = std::max(aggregate[a].norm(), aggregate[b].norm());
      const double sep = scale == 0.0 ? 0.0 : (aggregate[a] - aggregate[b]).norm() / scale;
      out.min_group_separation = std::min(out.min_group_separation, sep);
    }
  }
  return out;
}

}  // namespace netred

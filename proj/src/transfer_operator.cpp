#include "lyap/transfer_operator.hpp"

#include <cmath>
#include <limits>

#include "lyap/errors.hpp"
#include "lyap/projective.hpp"

namespace lyap {

UniformGrid operatorGrid(double k, double margin, double spacing) {
  return UniformGrid::bySpacing(-k - margin, k + margin, spacing);
}

TransferOperator::TransferOperator(const UniformGrid& grid, double k, const DisorderModel& model)
    : grid_(grid), k_(k) {
  if (!(k > 0.0)) throw DomainError("k must be positive");
  if (!model.hasDensity()) throw DomainError("model has no density");
  const double reach = k + 8.0 * model.stddev();
  const double slack = 1e-9 * (1.0 + reach);
  if (grid.xLo > -reach + slack || grid.xHi < reach - slack) {
    throw DomainError("grid does not cover support");
  }

  const Eigen::Index n = grid.size();
  const Eigen::VectorXd x = grid.nodes();
  const Eigen::VectorXd w = grid.trapezoidWeights();
  Eigen::VectorXd hy(n), colScale(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    hy(j) = hk(x(j), k);
    colScale(j) = w(j) * hkDerivative(x(j), k);
  }

  kernel_.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) kernel_(i, j) = colScale(j) * model.pdf(x(i) - hy(j));
  }

  const double hLo = hk(grid.xLo, k);
  const double hHi = hk(grid.xHi, k);
  source_.resize(n);
  leftClosure_.resize(n);
  rightClosure_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    source_(i) = model.tail(k + x(i));
    // \int_{-k}^{h_k(xLo)} zeta(x - u) du and \int_{h_k(xHi)}^{k} zeta(x - u) du
    leftClosure_(i) = model.cdf(x(i) + k) - model.cdf(x(i) - hLo);
    rightClosure_(i) = model.cdf(x(i) - hHi) - model.cdf(x(i) - k);
  }
}

void TransferOperator::checkGrid(const GridTail& g) const {
  if (g.grid.n != grid_.n || g.grid.xLo != grid_.xLo || g.grid.xHi != grid_.xHi) {
    throw DomainError("tail grid does not match operator grid");
  }
}

GridTail TransferOperator::apply(const GridTail& g) const {
  checkGrid(g);
  GridTail out;
  out.grid = grid_;
  out.leftLimit = g.leftLimit;
  out.rightLimit = g.rightLimit;
  out.values = kernel_ * g.values;
  out.values += g.leftLimit * (source_ + leftClosure_) + g.rightLimit * rightClosure_;
  return out;
}

GridTail TransferOperator::applyHomogeneous(const GridTail& g) const {
  checkGrid(g);
  if (g.leftLimit != 0.0 || g.rightLimit != 0.0) throw DomainError("nonzero limits");
  GridTail out;
  out.grid = grid_;
  out.leftLimit = 0.0;
  out.rightLimit = 0.0;
  out.values = kernel_ * g.values;
  return out;
}

GridTail applyT(const GridTail& g, double k, const DisorderModel& model) {
  return TransferOperator(g.grid, k, model).apply(g);
}

GridTail applyT0(const GridTail& g, double k, const DisorderModel& model) {
  if (g.leftLimit != 0.0 || g.rightLimit != 0.0) throw DomainError("nonzero limits");
  return TransferOperator(g.grid, k, model).applyHomogeneous(g);
}

InvariantTail solveInvariant(double k, const DisorderModel& model, const InvariantOptions& opts) {
  const TransferOperator op(operatorGrid(k, opts.margin, opts.spacing), k, model);
  return solveInvariant(op, opts);
}

InvariantTail solveInvariant(const TransferOperator& op, const InvariantOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("tol must be positive");
  const double k = op.k();
  const std::size_t maxIter =
      opts.maxIter > 0 ? opts.maxIter : std::max<std::size_t>(200, static_cast<std::size_t>(50.0 * k * k));

  GridTail g = GridTail::pointMass(op.grid(), 0.0);
  if (opts.method == FixedPointMethod::Direct) {
    const Eigen::Index n = op.grid().size();
    Eigen::MatrixXd a = -op.kernel();
    a.diagonal().array() += 1.0;
    const Eigen::VectorXd rhs = op.source() + op.leftClosure();
    g.values = a.partialPivLu().solve(rhs);
    if (!g.values.allFinite()) throw NumericalError("no convergence in maxIter");
    (void)n;
  }

  InvariantTail out;
  bool damped = false;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it <= maxIter; ++it) {
    GridTail next = op.apply(g);
    const double residual = l1Distance(next, g);
    if (residual < opts.tol) {
      out.tail = std::move(g);
      out.iterations = it;
      out.residual = residual;
      return out;
    }
    if (residual > previous) damped = true;  // oscillation: switch to damping 1/2
    previous = residual;
    if (damped) {
      g.values = 0.5 * (g.values + next.values);
    } else {
      g = std::move(next);
    }
  }
  throw NumericalError("no convergence in maxIter");
}

LyapForms lyapForms(const GridTail& g, double k) {
  if (g.leftLimit != 1.0 || g.rightLimit != 0.0) throw DomainError("not a probability tail");
  const Eigen::VectorXd x = g.grid.nodes();
  const Eigen::VectorXd w = g.grid.trapezoidWeights();
  LyapForms f;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    f.fromTail += w(i) * g.values(i) * logistic(x(i) - k);
    f.fromCdf += w(i) * (1.0 - g.values(i)) * logistic(-x(i) - k);
  }
  // \int_{-inf}^{xLo} 1/(1+e^{k-x}) dx and \int_{xHi}^{inf} 1/(1+e^{k+x}) dx
  f.fromTail += softplus(g.grid.xLo - k);
  f.fromCdf += softplus(-g.grid.xHi - k);
  return f;
}

double lyapFunctional(const GridTail& g, double k, double formTol) {
  const LyapForms f = lyapForms(g, k);
  if (std::abs(f.fromTail - f.fromCdf) > formTol) {
    throw NumericalError("form mismatch exceeds tolerance");
  }
  return f.fromTail;
}

double driftIntegral(const GridTail& g, double k) {
  const Eigen::VectorXd x = g.grid.nodes();
  const Eigen::VectorXd w = g.grid.trapezoidWeights();
  const Eigen::VectorXd dens = g.density();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += w(i) * hkDisplacement(x(i), k) * dens(i);
  return acc;
}

std::vector<double> homogeneousNorms(const TransferOperator& op, const GridTail& g, std::size_t terms) {
  std::vector<double> norms;
  norms.reserve(terms);
  GridTail cur = g;
  for (std::size_t n = 0; n < terms; ++n) {
    norms.push_back(l1Norm(cur));
    if (n + 1 < terms) cur = op.applyHomogeneous(cur);
  }
  return norms;
}

}  // namespace lyap

#include "lyap/grid_tail.hpp"

#include <cmath>

#include "lyap/errors.hpp"

namespace lyap {

UniformGrid UniformGrid::bySpacing(double lo, double hi, double spacing) {
  if (!(spacing > 0.0) || !(hi > lo)) throw DomainError("invalid grid specification");
  const auto steps = static_cast<std::size_t>(std::llround((hi - lo) / spacing));
  if (steps < 1) throw DomainError("invalid grid specification");
  UniformGrid g;
  g.xLo = lo;
  g.n = steps + 1;
  g.xHi = lo + spacing * static_cast<double>(steps);
  return g;
}

Eigen::VectorXd UniformGrid::nodes() const {
  return Eigen::VectorXd::LinSpaced(size(), xLo, xHi);
}

Eigen::VectorXd UniformGrid::trapezoidWeights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(size(), spacing());
  w(0) *= 0.5;
  w(size() - 1) *= 0.5;
  return w;
}

GridTail GridTail::pointMass(const UniformGrid& grid, double at) {
  GridTail g;
  g.grid = grid;
  g.values.resize(grid.size());
  const double h = grid.spacing();
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid.node(static_cast<std::size_t>(i));
    if (std::abs(x - at) < 1e-9 * h) {
      g.values(i) = 0.5;
    } else {
      g.values(i) = x < at ? 1.0 : 0.0;
    }
  }
  g.leftLimit = 1.0;
  g.rightLimit = 0.0;
  return g;
}

double GridTail::operator()(double x) const {
  if (x <= grid.xLo) return x < grid.xLo ? leftLimit : values(0);
  if (x >= grid.xHi) return x > grid.xHi ? rightLimit : values(grid.size() - 1);
  const double t = (x - grid.xLo) / grid.spacing();
  auto i = static_cast<Eigen::Index>(t);
  if (i >= grid.size() - 1) i = grid.size() - 2;
  const double w = t - static_cast<double>(i);
  return (1.0 - w) * values(i) + w * values(i + 1);
}

bool GridTail::isProbabilityTail(double tol) const {
  if (leftLimit != 1.0 || rightLimit != 0.0) return false;
  if (std::abs(values(0) - 1.0) > tol || std::abs(values(values.size() - 1)) > tol) return false;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < -tol || values(i) > 1.0 + tol) return false;
    if (i > 0 && values(i) > values(i - 1) + tol) return false;
  }
  return true;
}

Eigen::VectorXd GridTail::density() const {
  const Eigen::Index n = values.size();
  const double h = grid.spacing();
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) d(i) = -(values(i + 1) - values(i - 1)) / (2.0 * h);
  d(0) = -(values(1) - values(0)) / h;
  d(n - 1) = -(values(n - 1) - values(n - 2)) / h;
  return d;
}

double l1Norm(const GridTail& g) {
  return g.grid.trapezoidWeights().dot(g.values.cwiseAbs());
}

GridTail difference(const GridTail& a, const GridTail& b) {
  if (a.grid.n != b.grid.n || a.grid.xLo != b.grid.xLo || a.grid.xHi != b.grid.xHi) {
    throw DomainError("tails live on different grids");
  }
  GridTail d;
  d.grid = a.grid;
  d.values = a.values - b.values;
  d.leftLimit = a.leftLimit - b.leftLimit;
  d.rightLimit = a.rightLimit - b.rightLimit;
  return d;
}

double l1Distance(const GridTail& a, const GridTail& b) { return l1Norm(difference(a, b)); }

}  // namespace lyap

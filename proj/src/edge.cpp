#include "lyap/edge.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lyap/errors.hpp"
#include "lyap/matprod.hpp"
#include "lyap/parallel.hpp"
#include "lyap/projective.hpp"

namespace lyap {

const char* edgeSideName(EdgeSide s) { return s == EdgeSide::Left ? "left" : "right"; }

namespace {

// Least-squares weights: slope = slopeW . F and intercept = interceptW . F,
// using the nodes from `first` to the end of the grid.
struct AffineFitWeights {
  Eigen::VectorXd slopeW;
  Eigen::VectorXd interceptW;
  Eigen::Index first = 0;
};

AffineFitWeights affineFitWeights(const UniformGrid& grid, double fraction) {
  const Eigen::Index n = grid.size();
  const Eigen::Index m = std::max<Eigen::Index>(
      3, static_cast<Eigen::Index>(std::llround(fraction * static_cast<double>(n))));
  if (m > n) throw DomainError("fit window larger than grid");
  AffineFitWeights fw;
  fw.first = n - m;
  const Eigen::VectorXd x = grid.nodes().tail(m);
  const double xbar = x.mean();
  const double sxx = (x.array() - xbar).square().sum();
  fw.slopeW = Eigen::VectorXd::Zero(n);
  fw.interceptW = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double a = (x(i) - xbar) / sxx;
    fw.slopeW(fw.first + i) = a;
    fw.interceptW(fw.first + i) = 1.0 / static_cast<double>(m) - xbar * a;
  }
  return fw;
}

// Distance beyond which both tails of the law carry less than 1e-16.
double tailReach(const DisorderModel& law) {
  double w = 10.0;
  while (w < 400.0 && (law.cdf(-w) > 1e-16 || law.tail(w) > 1e-16)) w += 5.0;
  return w;
}

// Entries below this are dropped from the sparse operator; the kernel is
// at most h * max(zeta), so the relative perturbation is far below 1e-12.
constexpr double kDropTol = 1e-18;

using SparseMatrix = Eigen::SparseMatrix<double>;

// Discrete edge operator A = K + p slopeW^T + q interceptW^T, where K is the
// trapezoid kernel on the grid and (p, q) integrate the affine closure
// \int_{xHi}^{inf} (slope y + intercept) h'(y) zeta(x - h(y)) dy.
// `diagonalShift` is added on the diagonal.
SparseMatrix edgeMatrix(const DisorderModel& law, const UniformGrid& grid, double fitFraction,
                        double diagonalShift = 0.0) {
  const Eigen::Index n = grid.size();
  const double h = grid.spacing();
  const Eigen::VectorXd x = grid.nodes();
  const Eigen::VectorXd w = grid.trapezoidWeights();
  const double reach = tailReach(law);
  auto rowRange = [&](double centre) {
    const auto lo = static_cast<Eigen::Index>(std::floor((centre - reach - grid.xLo) / h));
    const auto hi = static_cast<Eigen::Index>(std::ceil((centre + reach - grid.xLo) / h));
    return std::pair{std::clamp<Eigen::Index>(lo, 0, n), std::clamp<Eigen::Index>(hi + 1, 0, n)};
  };

  std::vector<std::vector<Eigen::Triplet<double>>> cols(static_cast<std::size_t>(n));
  parallelFor(static_cast<std::size_t>(n), [&](std::size_t jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    const double scale = w(j) * edgeMapDerivative(x(j));
    const double hy = edgeMap(x(j));
    const auto [lo, hi] = rowRange(hy);
    for (Eigen::Index i = lo; i < hi; ++i) {
      const double v = scale * law.pdf(x(i) - hy);
      if (std::abs(v) > kDropTol) cols[jj].emplace_back(i, j, v);
    }
  });

  const auto ext = static_cast<Eigen::Index>(std::ceil(reach / h));
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
  for (Eigen::Index e = 0; e <= ext; ++e) {
    const double y = grid.xHi + h * static_cast<double>(e);
    const double we = (e == 0 || e == ext ? 0.5 : 1.0) * h * edgeMapDerivative(y);
    const double hy = edgeMap(y);
    const auto [lo, hi] = rowRange(hy);
    for (Eigen::Index i = lo; i < hi; ++i) {
      const double v = we * law.pdf(x(i) - hy);
      p(i) += v * y;
      q(i) += v;
    }
  }
  const AffineFitWeights fw = affineFitWeights(grid, fitFraction);

  std::vector<Eigen::Triplet<double>> trips;
  for (auto& c : cols) trips.insert(trips.end(), c.begin(), c.end());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(p(i)) <= kDropTol && std::abs(q(i)) <= kDropTol) continue;
    for (Eigen::Index j = fw.first; j < n; ++j) {
      trips.emplace_back(i, j, p(i) * fw.slopeW(j) + q(i) * fw.interceptW(j));
    }
  }
  if (diagonalShift != 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) trips.emplace_back(i, i, diagonalShift);
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());  // duplicates are summed
  a.makeCompressed();
  return a;
}

// Catmull-Rom interpolation of nodal values on a uniform grid.
double cubicAt(const UniformGrid& grid, const Eigen::VectorXd& v, double x) {
  const Eigen::Index n = v.size();
  const double t = (x - grid.xLo) / grid.spacing();
  auto i = static_cast<Eigen::Index>(std::floor(t));
  i = std::clamp<Eigen::Index>(i, 0, n - 2);
  const double s = t - static_cast<double>(i);
  const double p1 = v(i);
  const double p2 = v(i + 1);
  const double p0 = i > 0 ? v(i - 1) : 2.0 * p1 - p2;
  const double p3 = i + 2 < n ? v(i + 2) : 2.0 * p2 - p1;
  return p1 + 0.5 * s * (p2 - p0 + s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + s * (3.0 * (p1 - p2) + p3 - p0)));
}

double supDiff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

double EdgeMeasure::operator()(double x) const {
  if (x <= grid.xLo) return 0.0;
  if (x >= grid.xHi) return x + intercept;
  return cubicAt(grid, F, x);
}

Eigen::VectorXd EdgeMeasure::residual() const {
  return F - grid.nodes() - Eigen::VectorXd::Constant(grid.size(), intercept);
}

Eigen::VectorXd applyEdgeOperator(const DisorderModel& lawOfStep, const UniformGrid& grid,
                                  const Eigen::VectorXd& F, double fitFraction) {
  return edgeMatrix(lawOfStep, grid, fitFraction) * F;
}

EdgeMeasure solveEdge(const DisorderModel& model, EdgeSide side, const EdgeSolveOptions& opts) {
  if (!model.hasDensity()) throw DomainError("model has no density");
  if (opts.xLo > -20.0 || opts.xHi < 80.0) throw DomainError("edge grid must span [-20, 80]");
  if (!(opts.spacing > 0.0) || opts.spacing > 0.02 + 1e-12) throw DomainError("edge grid spacing must be <= 0.02");
  if (!(opts.tol > 0.0)) throw DomainError("tol must be positive");
  if (!(opts.x0 > opts.xLo && opts.x0 < opts.xHi)) throw DomainError("x0 outside edge grid");

  const DisorderModel law = side == EdgeSide::Left ? model : model.mirror();
  const UniformGrid grid = UniformGrid::bySpacing(opts.xLo, opts.xHi, opts.spacing);
  const Eigen::VectorXd x = grid.nodes();

  const SparseMatrix a = edgeMatrix(law, grid, opts.fitFraction);
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(edgeMatrix(law, grid, opts.fitFraction, -1.0));
  if (lu.info() != Eigen::Success) throw NumericalError("no convergence");

  auto normalizeAtX0 = [&](Eigen::VectorXd& v) {
    const double at = cubicAt(grid, v, opts.x0);
    if (!(std::abs(at) > 0.0) || !std::isfinite(at)) throw NumericalError("no convergence");
    v /= at;
  };

  EdgeMeasure out;
  out.grid = grid;
  out.side = side;
  out.x0 = opts.x0;

  Eigen::VectorXd f = x.cwiseMax(0.0);
  normalizeAtX0(f);
  bool converged = false;
  for (std::size_t it = 1; it <= opts.maxIter; ++it) {
    Eigen::VectorXd u = lu.solve(f);
    const double uAt = cubicAt(grid, u, opts.x0);
    out.eigenvalue = 1.0 + 1.0 / uAt;
    normalizeAtX0(u);
    const double change = supDiff(u, f);
    f = std::move(u);
    out.iterations = it;
    if (change < opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged || !f.allFinite()) throw NumericalError("no convergence");

  {
    Eigen::VectorXd once = a * f;
    normalizeAtX0(once);
    out.fixedPointResidual = supDiff(once, f);
  }

  const AffineFitWeights fw = affineFitWeights(grid, opts.fitFraction);
  out.slopeRaw = fw.slopeW.dot(f);
  if (!(out.slopeRaw > 0.0)) throw NumericalError("no convergence");
  f /= out.slopeRaw;
  out.intercept = fw.interceptW.dot(f);
  out.fixedPointResidual /= out.slopeRaw;
  out.fitWindow = {x(fw.first), grid.xHi};
  out.F = std::move(f);

  // Decay rate of the residual F(x) - x - c on x >= x0, over the range where
  // it sits above the noise floor.
  const Eigen::VectorXd r = out.residual();
  std::vector<double> xs, ys;
  Eigen::Index i = 0;
  while (i < grid.size() && x(i) < opts.x0) ++i;
  const Eigen::Index start = i;
  for (; i < fw.first; ++i) {
    const double ar = std::abs(r(i));
    if (ar < opts.noiseFloor) break;
    xs.push_back(x(i));
    ys.push_back(std::log(ar));
  }
  if (xs.size() < 10) {
    // Residual already at the noise floor next to x0: only a lower bound.
    out.rhoIsLowerBound = true;
    out.rhoWindow = {x(start), x(start)};
    const double dist = std::max(x(std::min(start + 10, grid.size() - 1)) - x(start), grid.spacing());
    out.rhoEstimate = std::log(std::max(1.0, 1.0 / opts.noiseFloor)) / dist;
    return out;
  }
  const PowerLawFit fit = linearFit(xs, ys);
  if (!(fit.slope < 0.0)) throw NumericalError("negative residual fit");
  out.rhoEstimate = -fit.slope;
  out.rhoWindow = {xs.front(), xs.back()};
  return out;
}

double edgeOccupationCheck(const EdgeMeasure& m, const DisorderModel& model, std::size_t steps,
                           std::uint64_t seed, double lo, double hi) {
  if (!(hi > lo)) throw DomainError("empty occupation window");
  const DisorderModel law = m.side == EdgeSide::Left ? model : model.mirror();
  EdgeOptions eo;
  eo.windowLo = lo;
  eo.windowHi = hi;
  eo.bins = static_cast<std::size_t>(std::llround((hi - lo) / 0.05));
  const EdgeSummary s = simulateY(law, steps, seed, 0.0, eo);

  const Eigen::VectorXd& c = s.occupation.counts;
  const double inWindow = c.sum();
  if (!(inWindow > 0.0)) return 1.0;
  const double fLo = m(lo);
  const double fSpan = m(hi) - fLo;
  double cum = 0.0;
  double worst = 0.0;
  for (Eigen::Index b = 0; b < c.size(); ++b) {
    cum += c(b);
    const double xr = s.occupation.binLeft(static_cast<std::size_t>(b)) + s.occupation.binWidth();
    worst = std::max(worst, std::abs(cum / inWindow - (m(xr) - fLo) / fSpan));
  }
  return worst;
}

double edgeKappaIntegral(const EdgeMeasure& m) {
  const Eigen::VectorXd x = m.grid.nodes();
  const Eigen::VectorXd w = m.grid.trapezoidWeights();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += w(i) * m.F(i) * logistic(-x(i));
  // beyond the grid F = y + c and 1/(1+e^y) ~ e^{-y}
  const double b = m.grid.xHi;
  acc += std::exp(-b) * (b + 1.0 + m.intercept);
  return acc;
}

double edgeSoftplusIntegral(const EdgeMeasure& m) {
  const Eigen::VectorXd x = m.grid.nodes();
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    // F linear on the cell; Simpson for the integrand
    const double f = (softplus(-x(i)) + 4.0 * softplus(-0.5 * (x(i) + x(i + 1))) + softplus(-x(i + 1))) / 6.0;
    acc += f * (m.F(i + 1) - m.F(i));
  }
  acc += m.F(0) * softplus(-x(0));
  acc += std::exp(-m.grid.xHi);  // \int_{xHi}^{inf} log(1 + e^{-y}) dy
  return acc;
}

SymmetryIdentity symmetryIdentityCheck(const EdgeMeasure& left, const EdgeMeasure& right) {
  return {edgeSoftplusIntegral(left), edgeSoftplusIntegral(right)};
}

}  // namespace lyap

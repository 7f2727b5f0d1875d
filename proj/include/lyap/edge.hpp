#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "lyap/disorder.hpp"
#include "lyap/grid_tail.hpp"

namespace lyap {

enum class EdgeSide { Left, Right };

const char* edgeSideName(EdgeSide s);

/// Invariant measure of the edge chain Y_{n+1} = z_{n+1} + h(Y_n), through
/// its distribution function F(x) = nu((-inf, x]). The measure has infinite
/// mass; F grows linearly, and it is normalized here so that F(x) = x + c + o(1).
///
/// The right edge is the same object computed for the law of -z.
struct EdgeMeasure {
  UniformGrid grid;
  Eigen::VectorXd F;
  EdgeSide side = EdgeSide::Left;
  double slopeRaw = 1.0;   // fitted slope with F(x0) = 1, before rescaling
  double intercept = 0.0;  // c after rescaling to slope 1
  double rhoEstimate = 0.0;
  bool rhoIsLowerBound = false;
  std::pair<double, double> fitWindow;  // affine least-squares window
  std::pair<double, double> rhoWindow;  // window of the log-linear residual fit
  double x0 = 1.0;
  std::size_t iterations = 0;
  double eigenvalue = 1.0;          // discrete operator eigenvalue next to 1
  double fixedPointResidual = 0.0;  // sup |one more normalized iteration - F|

  /// Cubic interpolation on the grid; 0 to the left, x + c to the right.
  double operator()(double x) const;
  /// F(x) - x - c at the grid nodes.
  Eigen::VectorXd residual() const;
};

struct EdgeSolveOptions {
  double xLo = -20.0;
  double xHi = 80.0;
  double spacing = 0.02;
  double tol = 1e-10;          // sup norm between successive iterates
  std::size_t maxIter = 100;
  double x0 = 1.0;             // normalization point during the iteration
  double fitFraction = 0.25;   // top part of the grid used for the affine fit
  double noiseFloor = 1e-9;    // residuals below this are treated as noise
};

/// Solves F(x) = \int F(y) h'(y) zeta(x - h(y)) dy (the characterizing
/// equation after an integration by parts) on the grid. Beyond xHi the
/// unknown is replaced by the affine least-squares fit over the top of the
/// grid, so the discrete problem is a fixed linear operator A; its
/// eigenvector next to 1 is found by inverse iteration.
///
/// Throws DomainError for grids shorter than [-20, 80] or coarser than 0.02,
/// NumericalError("no convergence") and NumericalError("negative residual fit").
EdgeMeasure solveEdge(const DisorderModel& model, EdgeSide side, const EdgeSolveOptions& opts = {});

/// One application of the discrete edge operator to values on the grid.
Eigen::VectorXd applyEdgeOperator(const DisorderModel& lawOfStep, const UniformGrid& grid,
                                  const Eigen::VectorXd& F, double fitFraction = 0.25);

/// Sup distance, on [lo, hi], between the occupation distribution of a
/// simulated Y path (started at 0) and (F - F(lo)) / (F(hi) - F(lo)).
double edgeOccupationCheck(const EdgeMeasure& m, const DisorderModel& model, std::size_t steps,
                           std::uint64_t seed, double lo = -5.0, double hi = 20.0);

/// \int F(y) / (1 + e^y) dy.
double edgeKappaIntegral(const EdgeMeasure& m);

/// \int log(1 + e^{-y}) dF(y) with F linear between nodes and dF = dx beyond the grid.
double edgeSoftplusIntegral(const EdgeMeasure& m);

struct SymmetryIdentity {
  double lhs = 0.0;  // left edge
  double rhs = 0.0;  // right edge
};
SymmetryIdentity symmetryIdentityCheck(const EdgeMeasure& left, const EdgeMeasure& right);

}  // namespace lyap

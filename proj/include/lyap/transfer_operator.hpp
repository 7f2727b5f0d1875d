#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "lyap/disorder.hpp"
#include "lyap/grid_tail.hpp"

namespace lyap {

/// Default operator grid: [-k - margin, k + margin] with the given spacing.
UniformGrid operatorGrid(double k, double margin = 10.0, double spacing = 0.01);

/// One step of the chain X_{n+1} = z_{n+1} + h_k(X_n) acting on tails:
///
///   (T G)(x) = G(-inf) P(z > k + x) + \int G(y) h_k'(y) zeta(x - h_k(y)) dy.
///
/// The integral is a trapezoid sum over the grid nodes. Outside the grid G
/// is replaced by its limits, and those pieces are integrated exactly:
/// \int_{-inf}^{xLo} h_k' zeta(x - h_k) dy = F(x + k) - F(x - h_k(xLo)).
///
/// The dense kernel is assembled once, so repeated applications cost one
/// matrix-vector product each.
class TransferOperator {
 public:
  /// Throws DomainError("grid does not cover support") unless the grid
  /// spans (-k - 8 sd, k + 8 sd).
  TransferOperator(const UniformGrid& grid, double k, const DisorderModel& model);

  /// T G. The limits of G are carried over unchanged.
  GridTail apply(const GridTail& g) const;
  /// T0 G (homogeneous part). G must have zero limits.
  GridTail applyHomogeneous(const GridTail& g) const;

  const UniformGrid& grid() const { return grid_; }
  double k() const { return k_; }
  /// kernel()(i, j) = w_j h_k'(y_j) zeta(x_i - h_k(y_j))
  const Eigen::MatrixXd& kernel() const { return kernel_; }
  /// P(z > k + x_i)
  const Eigen::VectorXd& source() const { return source_; }
  const Eigen::VectorXd& leftClosure() const { return leftClosure_; }
  const Eigen::VectorXd& rightClosure() const { return rightClosure_; }

 private:
  void checkGrid(const GridTail& g) const;

  UniformGrid grid_;
  double k_;
  Eigen::MatrixXd kernel_;
  Eigen::VectorXd source_;
  Eigen::VectorXd leftClosure_;
  Eigen::VectorXd rightClosure_;
};

GridTail applyT(const GridTail& g, double k, const DisorderModel& model);
/// Throws DomainError("nonzero limits") unless both limits vanish.
GridTail applyT0(const GridTail& g, double k, const DisorderModel& model);

enum class FixedPointMethod {
  Iterate,  // plain iteration of T from the point mass at 0
  Direct,   // LU solve of (I - K) G = source + leftClosure, then iterate
};

struct InvariantOptions {
  double tol = 1e-8;          // L1 residual ||T G - G||_1
  std::size_t maxIter = 0;    // 0 means 50 k^2 (at least 200)
  double margin = 10.0;
  double spacing = 0.01;
  FixedPointMethod method = FixedPointMethod::Direct;
};

struct InvariantTail {
  GridTail tail;
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Invariant tail G_{nu_k}. Throws NumericalError("no convergence in maxIter").
InvariantTail solveInvariant(double k, const DisorderModel& model, const InvariantOptions& opts = {});
InvariantTail solveInvariant(const TransferOperator& op, const InvariantOptions& opts = {});

/// The two equivalent expressions of the Lyapunov functional:
///   fromTail = \int G(x) / (1 + e^{k - x}) dx
///   fromCdf  = \int (1 - G(x)) / (1 + e^{k + x}) dx
/// They coincide on the invariant tail.
struct LyapForms {
  double fromTail = 0.0;
  double fromCdf = 0.0;
};
LyapForms lyapForms(const GridTail& g, double k);

/// L_k[G] (first form). Throws NumericalError("form mismatch exceeds
/// tolerance") when the forms differ by more than formTol; pass infinity
/// to evaluate tails that are not invariant.
double lyapFunctional(const GridTail& g, double k, double formTol = 1e-6);

/// \int (x - h_k(x)) nu(dx) with the density taken from finite differences.
double driftIntegral(const GridTail& g, double k);

/// ||T0^n G||_1 for n = 0 .. terms-1.
std::vector<double> homogeneousNorms(const TransferOperator& op, const GridTail& g, std::size_t terms);

}  // namespace lyap

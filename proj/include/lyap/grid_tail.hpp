#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace lyap {

/// Uniform abscissae xLo, xLo + h, ..., xHi with h = (xHi - xLo) / (n - 1).
struct UniformGrid {
  double xLo = 0.0;
  double xHi = 1.0;
  std::size_t n = 2;

  /// Grid starting at lo with the given spacing; xHi is the last node <= hi
  /// (rounded to the nearest whole number of steps).
  static UniformGrid bySpacing(double lo, double hi, double spacing);

  double spacing() const { return (xHi - xLo) / static_cast<double>(n - 1); }
  double node(std::size_t i) const { return xLo + spacing() * static_cast<double>(i); }
  Eigen::VectorXd nodes() const;
  Eigen::VectorXd trapezoidWeights() const;
  Eigen::Index size() const { return static_cast<Eigen::Index>(n); }
};

/// G(x) = mu((x, infinity)) sampled on a uniform grid, with its limits at
/// -infinity and +infinity. Probability tails have limits 1 and 0;
/// differences of probability tails have limits 0 and 0.
struct GridTail {
  UniformGrid grid;
  Eigen::VectorXd values;
  double leftLimit = 1.0;
  double rightLimit = 0.0;

  /// Tail of the unit mass at `at`. A node sitting exactly on the atom gets
  /// the midpoint value 1/2.
  static GridTail pointMass(const UniformGrid& grid, double at = 0.0);

  /// Linear interpolation; the limits outside the grid.
  double operator()(double x) const;

  /// Monotone non-increasing, inside [0, 1], endpoint values within tol of
  /// the limits 1 and 0.
  bool isProbabilityTail(double tol = 1e-6) const;

  /// -dG/dx by central differences (one-sided at the ends).
  Eigen::VectorXd density() const;
};

/// Trapezoid L1 norm of the sampled values.
double l1Norm(const GridTail& g);
double l1Distance(const GridTail& a, const GridTail& b);

/// a - b on a shared grid, limits subtracted.
GridTail difference(const GridTail& a, const GridTail& b);

}  // namespace lyap

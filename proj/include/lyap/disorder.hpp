#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lyap/rng.hpp"

namespace lyap {

enum class Family { Gaussian, Laplace, Mixture, Table, Constant };

std::string familyName(Family f);

/// Law of z = log Z.
///
/// Built-in families have exponential tails and a Lipschitz (theta = 1)
/// density. Values are immutable after construction and safe to share
/// between threads. `Constant` is a degenerate law without density; it is
/// accepted by the simulators for validation runs only.
class DisorderModel {
 public:
  static DisorderModel gaussian(double mu, double sigma);
  static DisorderModel laplace(double mu, double scale);
  /// z = xi (a + b eta) + (1 - xi)(mu2 + sigma2 eta), xi ~ Bernoulli(p).
  static DisorderModel mixture(double p, double a, double b, double mu2, double sigma2);
  /// The asymmetric bimodal law used for the k = 10 density figure:
  /// p = 2/3, a = -1/2, b = 3/10, mu2 = 1, sigma2 = 1 (mean exactly 0).
  static DisorderModel figure2();
  /// Piecewise-linear density through (x[i], pdf[i]), renormalized to mass 1.
  static DisorderModel table(std::vector<double> x, std::vector<double> pdf);
  static DisorderModel constant(double z0);

  /// Same law translated by `shift` (adds to the current meanShift).
  DisorderModel shifted(double shift) const;
  /// Analytic centering: the returned model has mean exactly 0.
  DisorderModel centered() const;
  /// Law of -z: density x -> pdf(-x).
  DisorderModel mirror() const;

  Family family() const { return family_; }
  double meanShift() const { return shift_; }
  bool hasDensity() const { return family_ != Family::Constant; }
  /// delta of the exponential tail bound; +infinity when all moments exist.
  double tailRateDelta() const;
  double holderTheta() const { return 1.0; }

  double pdf(double x) const;
  double cdf(double x) const;
  double tail(double x) const;  // P(z > x)
  double mean() const;
  double variance() const;
  double stddev() const;
  /// E[exp(u z)]; throws DomainError("moment diverges") outside the band.
  double expMoment(double u) const;

  double draw(RngStream& rng) const;
  std::vector<double> sample(RngStream& rng, std::size_t n) const;

  /// Raw parameters in declaration order (for serialization and tests).
  const std::vector<double>& params() const { return params_; }
  const std::vector<double>& tableX() const { return tabX_; }
  const std::vector<double>& tablePdf() const { return tabPdf_; }

 private:
  DisorderModel() = default;

  // location-free helpers (the shift is applied by the public API)
  double rawPdf(double x) const;
  double rawCdf(double x) const;
  double rawTail(double x) const;
  double rawMean() const;
  double rawExpMoment(double u) const;

  Family family_ = Family::Gaussian;
  std::vector<double> params_;
  double shift_ = 0.0;
  std::vector<double> tabX_, tabPdf_, tabCdf_;
};

/// Nonzero root of E[Z^alpha] = 1; std::nullopt for a balanced model.
/// Bisection on a bracket grown geometrically from 1e-3, tolerance 1e-12.
std::optional<double> solveAlpha(const DisorderModel& model);

}  // namespace lyap

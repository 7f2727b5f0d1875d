#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lyap/disorder.hpp"

namespace lyap {

/// Lyapunov exponent estimate in nats per step.
struct LyapEstimate {
  double mean = 0.0;
  double stdErr = 0.0;  // sd of batch means / sqrt(batches)
  std::size_t steps = 0;
  std::size_t batches = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double epsilon = 0.0;
  double k = 0.0;  // -log(epsilon); +inf at epsilon = 0
};

/// M(eps, Z) = [[1, eps], [eps Z, Z]].
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> transferMatrix(Scalar epsilon, Scalar Z) {
  Eigen::Matrix<Scalar, 2, 2> m;
  m << Scalar(1), epsilon, epsilon * Z, Z;
  return m;
}

enum class VectorNorm { RowSum, MaxEntry };

/// Propagates a positive direction v <- M(eps, e^{z_j}) v, renormalizing after
/// every step and accumulating the log of the norm. Starts from v = (1/2, 1/2).
template <typename Scalar>
class ProductAccumulator {
 public:
  using Vec = Eigen::Matrix<Scalar, 2, 1>;

  explicit ProductAccumulator(Scalar epsilon, VectorNorm norm = VectorNorm::RowSum)
      : eps_(epsilon), norm_(norm) {
    v_ << Scalar(0.5), Scalar(0.5);
  }

  /// One step; returns the log-norm increment.
  Scalar step(Scalar Z) {
    Vec w = transferMatrix(eps_, Z) * v_;
    const Scalar s = norm_ == VectorNorm::RowSum ? w.sum() : w.maxCoeff();
    v_ = w / s;
    using std::log;
    const Scalar inc = log(s);
    logNorm_ += inc;
    return inc;
  }

  Scalar logNorm() const { return logNorm_; }
  const Vec& direction() const { return v_; }

 private:
  Scalar eps_;
  VectorNorm norm_;
  Vec v_;
  Scalar logNorm_ = Scalar(0);
};

/// log || M(eps, e^{z_n}) ... M(eps, e^{z_1}) v0 ||_1 with v0 = (1/2, 1/2).
double logNormOfProduct(double epsilon, std::span<const double> z);

struct MCOptions {
  double burnInFraction = 0.01;
  VectorNorm norm = VectorNorm::RowSum;
  std::uint64_t stream = 0;
};

/// Direct Monte Carlo estimate of the top Lyapunov exponent of products of
/// M(epsilon, Z_j). Negative epsilon is mapped to |epsilon|.
LyapEstimate lyapunovMC(double epsilon, const DisorderModel& model, std::size_t steps,
                        std::size_t batches, std::uint64_t seed, const MCOptions& opts = {});

/// One estimate per epsilon; point i runs on seed mixSeed(seed, i).
std::vector<LyapEstimate> epsilonSweep(const DisorderModel& model, std::span<const double> epsilons,
                                       std::size_t steps, std::size_t batches, std::uint64_t seed);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares of log(mean) against log(epsilon).
PowerLawFit powerLawFit(std::span<const LyapEstimate> sweep);
PowerLawFit powerLawFit(std::span<const double> epsilons, std::span<const double> values);

/// Ordinary least squares y = slope x + intercept, with r^2.
PowerLawFit linearFit(std::span<const double> x, std::span<const double> y);

}  // namespace lyap

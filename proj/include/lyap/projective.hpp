#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lyap/disorder.hpp"
#include "lyap/matprod.hpp"

namespace lyap {

// ---------------------------------------------------------------------------
// Projective maps.
//
// In log-slope coordinates (1, e^x) the matrix M(e^{-k}, e^z) acts as
// x -> z + h_k(x), with h_k(x) = log((e^{-k} + e^x) / (1 + e^{x-k})).
// Seen from the edge -k, the k -> infinity limit is y -> z + h(y) with
// h(y) = log(1 + e^y).
// ---------------------------------------------------------------------------

/// log(1 + e^x) without overflow.
template <typename Scalar>
Scalar softplus(Scalar x) {
  using std::exp;
  using std::log1p;
  return x > Scalar(0) ? x + log1p(exp(-x)) : log1p(exp(x));
}

/// Logistic function 1 / (1 + e^{-x}).
template <typename Scalar>
Scalar logistic(Scalar x) {
  using std::exp;
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-x));
  const Scalar e = exp(x);
  return e / (Scalar(1) + e);
}

/// h_k(x). Odd, increasing, with image (-k, k). Evaluated on |x| and
/// reflected, so oddness holds bit-for-bit; results are clamped strictly
/// inside (-k, k) when rounding would otherwise reach the boundary.
template <typename Scalar>
Scalar hk(Scalar x, Scalar k) {
  using std::abs;
  using std::exp;
  using std::log1p;
  const Scalar a = abs(x);
  Scalar v;
  if (a <= k) {
    v = a - log1p(exp(a - k)) + log1p(exp(-a - k));
  } else {
    v = k - log1p(exp(k - a)) + log1p(exp(-k - a));
  }
  const Scalar top = std::nextafter(k, Scalar(0));
  if (v > top) v = top;
  return x < Scalar(0) ? -v : v;
}

/// h_k'(x) = 2 sinh(k) e^x / ((1 + e^{x+k})(1 + e^{x-k})), computed in log
/// space. Even in x; h_k'(0) = tanh(k/2) and h_k'(+-k) = 1/2 - 1/(e^{2k}+1).
template <typename Scalar>
Scalar hkDerivative(Scalar x, Scalar k) {
  using std::abs;
  using std::exp;
  using std::log;
  using std::log1p;
  const Scalar a = abs(x);
  const Scalar logTwoSinh = k + log1p(-exp(-Scalar(2) * k));
  return exp(logTwoSinh + a - softplus(a + k) - softplus(a - k));
}

/// x - h_k(x) = log(1 + e^{x-k}) - log(1 + e^{-x-k}).
template <typename Scalar>
Scalar hkDisplacement(Scalar x, Scalar k) {
  return softplus(x - k) - softplus(-x - k);
}

/// Inverse of h_k on (-k, k). Closed form
///   x = u + log(-expm1(-u-k)) - log(-expm1(u-k)),
/// with a bisection fallback when |u| > k - 1e-6.
double hkInverse(double u, double k);

/// Edge map h(y) = y + log(1 + e^{-y}) = log(1 + e^y).
template <typename Scalar>
Scalar edgeMap(Scalar y) {
  return softplus(y);
}

/// h(y) - y = log(1 + e^{-y}), free of the cancellation in edgeMap(y) - y.
template <typename Scalar>
Scalar edgeMapExcess(Scalar y) {
  return softplus(-y);
}

/// h'(y), the logistic function.
template <typename Scalar>
Scalar edgeMapDerivative(Scalar y) {
  return logistic(y);
}

// ---------------------------------------------------------------------------
// Chain simulators
// ---------------------------------------------------------------------------

struct ChainConfig {
  double k = 5.0;
  DisorderModel model = DisorderModel::gaussian(0.0, 1.0);
  std::size_t burnIn = 100000;
  std::size_t steps = 1000000;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double x0 = 0.0;
  std::size_t batches = 32;
};

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  Eigen::VectorXd counts;  // raw visit counts per bin
  std::size_t total = 0;   // all recorded samples, including out-of-range
  std::size_t bins() const { return static_cast<std::size_t>(counts.size()); }
  double binWidth() const { return (hi - lo) / static_cast<double>(bins()); }
  double binLeft(std::size_t i) const { return lo + binWidth() * static_cast<double>(i); }
  /// Counts normalized by total samples and bin width.
  Eigen::VectorXd density() const;
  void add(double x);
};

struct ChainSummary {
  Histogram histogram;
  std::vector<double> path;  // post burn-in states, when requested
  std::size_t steps = 0;
  double minState = 0.0;
  double maxState = 0.0;
  double maxDraw = 0.0;
  /// time average of X_n - h_k(X_n) and its batch-mean standard error
  double driftMean = 0.0;
  double driftStdErr = 0.0;
};

struct ChainOptions {
  double histLo = 0.0;   // defaults to -k - 10
  double histHi = 0.0;   // defaults to  k + 10
  std::size_t histBins = 0;  // defaults to spacing 0.05
  bool keepPath = false;
};

/// X_{n+1} = z_{n+1} + h_k(X_n) after burn-in; deterministic per seed.
ChainSummary simulateX(const ChainConfig& cfg, const ChainOptions& opts = {});

/// Time average of log(1 + e^{-k-X_n}) (+ E[z], zero for balanced laws).
LyapEstimate ergodicLyapunov(const ChainConfig& cfg);

struct EdgeSummary {
  std::vector<double> runningMax;  // max of Y over the first checkpoints[i] steps
  std::vector<std::size_t> checkpoints;
  Histogram occupation;
  std::size_t steps = 0;
  std::size_t violations = 0;  // steps with Y_{n+1} < z_{n+1} (must stay 0)
  bool monotone = true;        // Y strictly increased at every step
  std::vector<double> path;
};

struct EdgeOptions {
  double windowLo = -5.0;
  double windowHi = 20.0;
  std::size_t bins = 500;
  std::vector<std::size_t> checkpoints;
  bool keepPath = false;
};

/// Y_{n+1} = z_{n+1} + h(Y_n).
EdgeSummary simulateY(const DisorderModel& model, std::size_t steps, std::uint64_t seed, double y0,
                      const EdgeOptions& opts = {});

struct ExitTimeEstimate {
  double meanTau = 0.0;
  double stdErr = 0.0;
  std::size_t replicas = 0;
  std::size_t cap = 0;
};

/// Monte Carlo mean of tau_k = min{n >= 0 : |X_n| >= k} from x0. Replica r
/// uses stream r of `seed`, so runs at different k share driving noise.
/// Throws NumericalError("no exit within cap") if a replica exceeds 1e4 k^2.
ExitTimeEstimate exitTime(double k, const DisorderModel& model, double x0, std::uint64_t seed,
                          std::size_t replicas);

}  // namespace lyap

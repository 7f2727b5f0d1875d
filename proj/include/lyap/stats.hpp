#pragma once

#include <cmath>
#include <span>

namespace lyap {

/// Sample standard deviation of batch means divided by sqrt(#batches).
inline double batchStdErr(std::span<const double> batchMeans) {
  const double n = static_cast<double>(batchMeans.size());
  if (n < 2.0) return 0.0;
  double s = 0.0;
  for (double b : batchMeans) s += b;
  const double m = s / n;
  double ss = 0.0;
  for (double b : batchMeans) ss += (b - m) * (b - m);
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

}  // namespace lyap

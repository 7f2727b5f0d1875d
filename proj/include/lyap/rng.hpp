#pragma once

#include <cstdint>
#include <random>

namespace lyap {

/// Deterministic random stream identified by a (seed, streamId) pair.
///
/// Distinct stream ids give statistically independent sequences; the same
/// pair always reproduces the same draws. A stream has a single owner.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t streamId);

  double uniform();      // in (0, 1), never exactly 0 or 1
  double normal();       // standard Gaussian
  bool bernoulli(double p);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t streamId() const { return streamId_; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t streamId_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to derive child seeds from (seed, index).
std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t index);

}  // namespace lyap

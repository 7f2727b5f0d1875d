#include "lyap/rng.hpp"

namespace lyap {

namespace {

std::mt19937_64 makeEngine(std::uint64_t seed, std::uint64_t streamId) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(streamId),
                    static_cast<std::uint32_t>(streamId >> 32), 0x6c79u};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t streamId)
    : seed_(seed), streamId_(streamId), engine_(makeEngine(seed, streamId)) {}

double RngStream::uniform() {
  // 53 random bits, shifted to the open interval (0, 1).
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return normal_(engine_); }

bool RngStream::bernoulli(double p) { return uniform() < p; }

std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace lyap

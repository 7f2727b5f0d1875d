#include "lyap/projective.hpp"

#include <algorithm>
#include <cmath>

#include "lyap/errors.hpp"
#include "lyap/parallel.hpp"
#include "lyap/rng.hpp"
#include "lyap/stats.hpp"

namespace lyap {

double hkInverse(double u, double k) {
  if (!(k > 0.0)) throw DomainError("k must be positive");
  if (!(std::abs(u) < k)) throw DomainError("u outside image (-k,k)");
  const double a = std::abs(u);
  double x;
  if (a <= k - 1e-6) {
    x = a + std::log(-std::expm1(-a - k)) - std::log(-std::expm1(a - k));
  } else {
    // closed form divides two near-zero quantities here
    double lo = 0.0;
    double hi = std::max(1.0, 2.0 * k);
    while (hk(hi, k) < a) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (hk(mid, k) < a ? lo : hi) = mid;
    }
    x = 0.5 * (lo + hi);
  }
  return u < 0.0 ? -x : x;
}

Eigen::VectorXd Histogram::density() const {
  if (total == 0) return Eigen::VectorXd::Zero(counts.size());
  return counts / (static_cast<double>(total) * binWidth());
}

void Histogram::add(double x) {
  ++total;
  if (!(x >= lo && x < hi)) return;
  auto i = static_cast<Eigen::Index>((x - lo) / binWidth());
  i = std::min<Eigen::Index>(i, counts.size() - 1);
  counts(i) += 1.0;
}

namespace {

Histogram makeHistogram(double lo, double hi, std::size_t bins) {
  if (!(hi > lo) || bins == 0) throw DomainError("invalid histogram window");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(bins));
  return h;
}

void validate(const ChainConfig& cfg) {
  if (!(cfg.k > 0.0)) throw DomainError("k must be positive");
  if (cfg.steps < 1) throw DomainError("steps must be >= 1");
  if (!std::isfinite(cfg.x0)) throw DomainError("x0 must be finite");
}

}  // namespace

ChainSummary simulateX(const ChainConfig& cfg, const ChainOptions& opts) {
  validate(cfg);
  const double k = cfg.k;
  const double lo = opts.histHi > opts.histLo ? opts.histLo : -k - 10.0;
  const double hi = opts.histHi > opts.histLo ? opts.histHi : k + 10.0;
  const std::size_t bins =
      opts.histBins > 0 ? opts.histBins : static_cast<std::size_t>(std::ceil((hi - lo) / 0.05));

  ChainSummary out;
  out.histogram = makeHistogram(lo, hi, bins);
  if (opts.keepPath) out.path.reserve(cfg.steps);

  RngStream rng(cfg.seed, cfg.stream);
  double x = cfg.x0;
  for (std::size_t i = 0; i < cfg.burnIn; ++i) x = cfg.model.draw(rng) + hk(x, k);

  const std::size_t batches = std::max<std::size_t>(2, std::min(cfg.batches, cfg.steps));
  std::vector<double> batchMeans;
  double total = 0.0;
  double batchSum = 0.0;
  std::size_t batchLen = 0;
  const std::size_t perBatch = std::max<std::size_t>(1, cfg.steps / batches);
  out.minState = out.maxState = x;
  out.maxDraw = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < cfg.steps; ++n) {
    const double d = hkDisplacement(x, k);
    total += d;
    batchSum += d;
    if (++batchLen == perBatch && batchMeans.size() + 1 < batches) {
      batchMeans.push_back(batchSum / static_cast<double>(batchLen));
      batchSum = 0.0;
      batchLen = 0;
    }
    const double z = cfg.model.draw(rng);
    out.maxDraw = std::max(out.maxDraw, z);
    x = z + hk(x, k);
    out.histogram.add(x);
    out.minState = std::min(out.minState, x);
    out.maxState = std::max(out.maxState, x);
    if (opts.keepPath) out.path.push_back(x);
  }
  if (batchLen > 0) batchMeans.push_back(batchSum / static_cast<double>(batchLen));
  out.steps = cfg.steps;
  out.driftMean = total / static_cast<double>(cfg.steps);
  out.driftStdErr = batchStdErr(batchMeans);
  return out;
}

LyapEstimate ergodicLyapunov(const ChainConfig& cfg) {
  validate(cfg);
  const double k = cfg.k;
  RngStream rng(cfg.seed, cfg.stream);
  double x = cfg.x0;
  for (std::size_t i = 0; i < cfg.burnIn; ++i) x = cfg.model.draw(rng) + hk(x, k);

  const std::size_t batches = std::max<std::size_t>(2, std::min(cfg.batches, cfg.steps));
  const std::size_t base = cfg.steps / batches;
  const std::size_t extra = cfg.steps % batches;
  std::vector<double> batchMeans(batches);
  double total = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      sum += softplus(-k - x);
      x = cfg.model.draw(rng) + hk(x, k);
    }
    batchMeans[b] = len > 0 ? sum / static_cast<double>(len) : 0.0;
    total += sum;
  }
  // (2,2)-entry form of the Furstenberg formula; its z-term averages to E[z]
  const double drift = cfg.model.mean();

  LyapEstimate est;
  est.mean = total / static_cast<double>(cfg.steps) + drift;
  est.stdErr = batchStdErr(batchMeans);
  est.steps = cfg.steps;
  est.batches = batches;
  est.seed = cfg.seed;
  est.stream = cfg.stream;
  est.k = k;
  est.epsilon = std::exp(-k);
  return est;
}

EdgeSummary simulateY(const DisorderModel& model, std::size_t steps, std::uint64_t seed, double y0,
                      const EdgeOptions& opts) {
  if (steps < 1) throw DomainError("steps must be >= 1");
  EdgeSummary out;
  out.occupation = makeHistogram(opts.windowLo, opts.windowHi, opts.bins);
  out.checkpoints = opts.checkpoints;
  std::sort(out.checkpoints.begin(), out.checkpoints.end());
  out.runningMax.reserve(out.checkpoints.size());
  if (opts.keepPath) out.path.reserve(steps);

  RngStream rng(seed, 0);
  double y = y0;
  double runMax = -std::numeric_limits<double>::infinity();
  std::size_t nextCheck = 0;
  for (std::size_t n = 1; n <= steps; ++n) {
    const double z = model.draw(rng);
    const double next = z + edgeMap(y);
    if (next < z) ++out.violations;
    if (!(next > y)) out.monotone = false;
    y = next;
    runMax = std::max(runMax, y);
    out.occupation.add(y);
    if (opts.keepPath) out.path.push_back(y);
    while (nextCheck < out.checkpoints.size() && out.checkpoints[nextCheck] == n) {
      out.runningMax.push_back(runMax);
      ++nextCheck;
    }
  }
  while (nextCheck++ < out.checkpoints.size()) out.runningMax.push_back(runMax);
  out.steps = steps;
  return out;
}

ExitTimeEstimate exitTime(double k, const DisorderModel& model, double x0, std::uint64_t seed,
                          std::size_t replicas) {
  if (!(k > 0.0)) throw DomainError("k must be positive");
  if (replicas < 2) throw DomainError("replicas must be >= 2");
  const auto cap = static_cast<std::size_t>(1e4 * k * k);

  std::vector<double> taus(replicas);
  parallelFor(replicas, [&](std::size_t r) {
    RngStream rng(seed, r);
    double x = x0;
    std::size_t n = 0;
    while (std::abs(x) < k) {
      if (++n > cap) throw NumericalError("no exit within cap");
      x = model.draw(rng) + hk(x, k);
    }
    taus[r] = static_cast<double>(n);
  });

  double sum = 0.0;
  for (double t : taus) sum += t;
  const double mean = sum / static_cast<double>(replicas);
  double ss = 0.0;
  for (double t : taus) ss += (t - mean) * (t - mean);

  ExitTimeEstimate est;
  est.meanTau = mean;
  est.stdErr = std::sqrt(ss / static_cast<double>(replicas - 1) / static_cast<double>(replicas));
  est.replicas = replicas;
  est.cap = cap;
  return est;
}

}  // namespace lyap

#include "lyap/matprod.hpp"

#include <cmath>
#include <limits>

#include "lyap/errors.hpp"
#include "lyap/parallel.hpp"
#include "lyap/rng.hpp"
#include "lyap/stats.hpp"

namespace lyap {

double logNormOfProduct(double epsilon, std::span<const double> z) {
  ProductAccumulator<double> acc(std::abs(epsilon));
  for (double zj : z) acc.step(std::exp(zj));
  return acc.logNorm();
}

LyapEstimate lyapunovMC(double epsilon, const DisorderModel& model, std::size_t steps,
                        std::size_t batches, std::uint64_t seed, const MCOptions& opts) {
  if (!(std::abs(epsilon) < 1.0)) throw DomainError("epsilon out of range");
  if (batches < 2 || steps < batches) throw DomainError("need steps >= batches >= 2");
  const double eps = std::abs(epsilon);

  RngStream rng(seed, opts.stream);
  ProductAccumulator<double> acc(eps, opts.norm);

  auto nextZ = [&] {
    const double Z = std::exp(model.draw(rng));
    if (!(Z > 0.0) || !std::isfinite(Z)) throw NumericalError("nonpositive Z draw");
    return Z;
  };

  const auto burnIn = static_cast<std::size_t>(opts.burnInFraction * static_cast<double>(steps));
  for (std::size_t i = 0; i < burnIn; ++i) acc.step(nextZ());

  std::vector<double> batchMeans(batches);
  double total = 0.0;
  const std::size_t base = steps / batches;
  const std::size_t extra = steps % batches;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) sum += acc.step(nextZ());
    batchMeans[b] = sum / static_cast<double>(len);
    total += sum;
  }

  LyapEstimate est;
  est.mean = total / static_cast<double>(steps);
  est.stdErr = batchStdErr(batchMeans);
  est.steps = steps;
  est.batches = batches;
  est.seed = seed;
  est.stream = opts.stream;
  est.epsilon = eps;
  est.k = eps > 0.0 ? -std::log(eps) : std::numeric_limits<double>::infinity();
  if (!std::isfinite(est.mean)) throw NumericalError("non-finite Lyapunov estimate");
  return est;
}

std::vector<LyapEstimate> epsilonSweep(const DisorderModel& model, std::span<const double> epsilons,
                                       std::size_t steps, std::size_t batches, std::uint64_t seed) {
  for (double e : epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw DomainError("epsilon out of range");
  }
  std::vector<LyapEstimate> out(epsilons.size());
  parallelFor(epsilons.size(), [&](std::size_t i) {
    out[i] = lyapunovMC(epsilons[i], model, steps, batches, mixSeed(seed, i));
  });
  return out;
}

PowerLawFit linearFit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("linear fit needs matching inputs");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = x[static_cast<std::size_t>(i)];
    design(i, 1) = 1.0;
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd resid = rhs - design * coef;
  const double ssRes = resid.squaredNorm();
  const double ssTot = (rhs.array() - rhs.mean()).matrix().squaredNorm();
  PowerLawFit fit;
  fit.slope = coef(0);
  fit.intercept = coef(1);
  fit.r2 = ssTot > 0.0 ? 1.0 - ssRes / ssTot : 1.0;
  return fit;
}

PowerLawFit powerLawFit(std::span<const double> epsilons, std::span<const double> values) {
  if (epsilons.size() != values.size() || epsilons.size() < 3) {
    throw DomainError("power-law fit needs at least 3 points");
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw DomainError("nonpositive estimate in sweep");
    if (!(epsilons[i] > 0.0)) throw DomainError("epsilon out of range");
    lx.push_back(std::log(epsilons[i]));
    ly.push_back(std::log(values[i]));
  }
  return linearFit(lx, ly);
}

PowerLawFit powerLawFit(std::span<const LyapEstimate> sweep) {
  std::vector<double> eps, vals;
  for (const auto& e : sweep) {
    eps.push_back(e.epsilon);
    vals.push_back(e.mean);
  }
  return powerLawFit(eps, vals);
}

}  // namespace lyap

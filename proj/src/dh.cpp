#include "lyap/dh.hpp"

#include <cmath>
#include <limits>

#include "lyap/errors.hpp"
#include "lyap/parallel.hpp"
#include "lyap/projective.hpp"
#include "lyap/rng.hpp"
#include "lyap/transfer_operator.hpp"

namespace lyap {

namespace {

double edgeDensity(const EdgeMeasure& m, double x) {
  if (x < m.grid.xLo) return 0.0;
  if (x > m.grid.xHi) return 1.0;
  const double h = 0.5 * m.grid.spacing();
  return (m(x + h) - m(x - h)) / (2.0 * h);
}

}  // namespace

DHConstants dhConstants(const EdgeMeasure& left, const EdgeMeasure& right) {
  DHConstants c;
  c.kappa1Left = 0.5 * edgeKappaIntegral(left);
  c.kappa1Right = 0.5 * edgeKappaIntegral(right);
  c.kappa1 = 0.5 * (c.kappa1Left + c.kappa1Right);
  c.cLeft = left.intercept;
  c.cRight = right.intercept;
  c.kappa2 = 0.5 * (c.cLeft + c.cRight);
  c.rhoLeft = left.rhoEstimate;
  c.rhoRight = right.rhoEstimate;
  return c;
}

std::pair<double, double> DHApprox::branches(double x) const {
  return {1.0 - (*leftEdge)(x + k) / Ck, (*rightEdge)(k - x) / Ck};
}

std::pair<double, double> DHApprox::branchDensities(double x) const {
  return {edgeDensity(*leftEdge, x + k) / Ck, edgeDensity(*rightEdge, k - x) / Ck};
}

DHApprox buildDH(double k, const EdgeMeasure& left, const EdgeMeasure& right, double margin, double spacing) {
  if (!(k > 0.0)) throw DomainError("k must be positive");
  for (const EdgeMeasure* e : {&left, &right}) {
    if (k > e->grid.xHi - 10.0 || e->grid.xLo > -margin) throw DomainError("edge grid too short for k");
  }
  if (left.side != EdgeSide::Left || right.side != EdgeSide::Right) throw DomainError("edge sides swapped");

  DHApprox dh;
  dh.k = k;
  dh.leftEdge = &left;
  dh.rightEdge = &right;
  dh.constants = dhConstants(left, right);
  dh.Ck = left(k) + right(k);
  if (!(dh.Ck > 0.0)) throw NumericalError("nonpositive normalizer");

  dh.Gk.grid = UniformGrid::bySpacing(-k - margin, k + margin, spacing);
  dh.Gk.leftLimit = 1.0;
  dh.Gk.rightLimit = 0.0;
  dh.Gk.values.resize(dh.Gk.grid.size());
  for (Eigen::Index i = 0; i < dh.Gk.grid.size(); ++i) {
    const double x = dh.Gk.grid.node(static_cast<std::size_t>(i));
    dh.Gk.values(i) = x >= 0.0 ? right(k - x) / dh.Ck : 1.0 - left(x + k) / dh.Ck;
  }
  return dh;
}

double asymptoticLyap(const DHConstants& c, double k) {
  if (!(k + c.kappa2 > 0.0)) throw DomainError("k + kappa2 <= 0");
  return c.kappa1 / (k + c.kappa2);
}

double asymptoticLyap(const DHApprox& dh) { return asymptoticLyap(dh.constants, dh.k); }

double asymptoticLyapEps(const DHConstants& c, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon out of range");
  return asymptoticLyap(c, -std::log(epsilon));
}

double oneStepResidual(const DHApprox& dh, const DisorderModel& model) {
  const TransferOperator op(dh.Gk.grid, dh.k, model);
  return l1Distance(op.apply(dh.Gk), dh.Gk);
}

double weakDisorderFormula(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon out of range");
  const double d = -std::log(epsilon) - std::log(2.0) - kEulerGamma;
  if (!(d > 0.0)) throw DomainError("denominator nonpositive");
  return 1.0 / (4.0 * d);
}

std::vector<CompareRow> compareAll(std::span<const double> ks, const DisorderModel& model,
                                   const EdgeMeasure& left, const EdgeMeasure& right,
                                   const CompareOptions& opts) {
  std::vector<CompareRow> rows(ks.size());
  parallelFor(ks.size(), [&](std::size_t i) {
    const double k = ks[i];
    const std::uint64_t seed = mixSeed(opts.seed, i);
    CompareRow& row = rows[i];
    row.k = k;
    row.mc = lyapunovMC(std::exp(-k), model, opts.mcSteps, opts.mcBatches, seed);

    ChainConfig cfg;
    cfg.k = k;
    cfg.model = model;
    cfg.burnIn = opts.chainBurnIn;
    cfg.steps = opts.chainSteps;
    cfg.seed = seed;
    cfg.stream = 1;
    cfg.batches = opts.mcBatches;
    row.ergodic = ergodicLyapunov(cfg);

    InvariantOptions io;
    io.spacing = opts.operatorSpacing;
    const InvariantTail inv = solveInvariant(k, model, io);
    row.operatorL = lyapFunctional(inv.tail, k);

    const DHApprox dh = buildDH(k, left, right, 10.0, opts.operatorSpacing);
    row.dh = asymptoticLyap(dh);
    row.residual = oneStepResidual(dh, model);
  });
  return rows;
}

}  // namespace lyap

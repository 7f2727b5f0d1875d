#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lyap/disorder.hpp"
#include "lyap/edge.hpp"
#include "lyap/grid_tail.hpp"
#include "lyap/matprod.hpp"

namespace lyap {

/// Constants of L(k) ~ kappa1 / (k + kappa2), from the two edge measures.
struct DHConstants {
  double kappa1 = 0.0;       // mean of the two forms below
  double kappa1Left = 0.0;   // 1/2 \int F_left(y) / (1 + e^y) dy
  double kappa1Right = 0.0;  // 1/2 \int F_right(y) / (1 + e^y) dy
  double kappa2 = 0.0;       // (c_left + c_right) / 2
  double cLeft = 0.0;
  double cRight = 0.0;
  double rhoLeft = 0.0;
  double rhoRight = 0.0;
};

DHConstants dhConstants(const EdgeMeasure& left, const EdgeMeasure& right);

/// Glued approximation of the invariant probability at a given k:
///   G_k(x) = F_right(k - x) / C_k        for x >= 0,
///   G_k(x) = 1 - F_left(x + k) / C_k     for x <= 0,
/// with C_k = F_left(k) + F_right(k) so that both branches meet at 0.
///
/// The edge measures are referenced, not copied; they must outlive the value.
struct DHApprox {
  double k = 0.0;
  double Ck = 0.0;
  GridTail Gk;
  DHConstants constants;
  const EdgeMeasure* leftEdge = nullptr;
  const EdgeMeasure* rightEdge = nullptr;

  /// Both branches at x, before choosing by sign: (1 - F_left(x+k)/C_k, F_right(k-x)/C_k).
  std::pair<double, double> branches(double x) const;
  /// Densities of the left and right branches, each prolonged over all x.
  std::pair<double, double> branchDensities(double x) const;
};

/// Throws DomainError("edge grid too short for k") unless k <= xHi - 10 and
/// the edge grids reach below -margin.
DHApprox buildDH(double k, const EdgeMeasure& left, const EdgeMeasure& right, double margin = 10.0,
                 double spacing = 0.01);

/// kappa1 / (k + kappa2). Throws DomainError("k + kappa2 <= 0").
double asymptoticLyap(const DHConstants& c, double k);
double asymptoticLyap(const DHApprox& dh);
double asymptoticLyapEps(const DHConstants& c, double epsilon);

/// || T G_k - G_k ||_1 on the grid of G_k.
double oneStepResidual(const DHApprox& dh, const DisorderModel& model);

inline constexpr double kEulerGamma = 0.57721566490153286;

/// 1 / (4 (log(1/eps) - log 2 - gamma)). Throws DomainError("denominator nonpositive").
double weakDisorderFormula(double epsilon);

struct CompareOptions {
  std::size_t mcSteps = 10'000'000;
  std::size_t mcBatches = 32;
  std::size_t chainSteps = 10'000'000;
  std::size_t chainBurnIn = 100'000;
  std::uint64_t seed = 0;
  double operatorSpacing = 0.01;
};

struct CompareRow {
  double k = 0.0;
  LyapEstimate mc;
  LyapEstimate ergodic;
  double operatorL = 0.0;
  double dh = 0.0;
  double residual = 0.0;
};

/// Matrix Monte Carlo, ergodic chain, operator functional, DH prediction and
/// one-step residual for every k. Entry i uses seed mixSeed(seed, i).
std::vector<CompareRow> compareAll(std::span<const double> ks, const DisorderModel& model,
                                   const EdgeMeasure& left, const EdgeMeasure& right,
                                   const CompareOptions& opts = {});

}  // namespace lyap

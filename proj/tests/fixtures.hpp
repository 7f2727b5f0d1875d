#pragma once

#include "lyap/disorder.hpp"
#include "lyap/edge.hpp"

// Edge solves take a few seconds each; test cases share them.
struct EdgePair {
  lyap::EdgeMeasure left;
  lyap::EdgeMeasure right;
};

inline const EdgePair& gaussianEdges() {
  static const EdgePair p = [] {
    const auto m = lyap::DisorderModel::gaussian(0.0, 1.0);
    return EdgePair{lyap::solveEdge(m, lyap::EdgeSide::Left), lyap::solveEdge(m, lyap::EdgeSide::Right)};
  }();
  return p;
}

inline const EdgePair& figure2Edges() {
  static const EdgePair p = [] {
    const auto m = lyap::DisorderModel::figure2();
    return EdgePair{lyap::solveEdge(m, lyap::EdgeSide::Left), lyap::solveEdge(m, lyap::EdgeSide::Right)};
  }();
  return p;
}

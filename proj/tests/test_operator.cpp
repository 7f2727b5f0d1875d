#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "lyap/errors.hpp"
#include "lyap/projective.hpp"
#include "lyap/transfer_operator.hpp"

using namespace lyap;

namespace {

// Piecewise-linear density through (xs, ps), evaluated independently of the
// library (long double, unnormalized input renormalized here).
struct TableLaw {
  std::vector<long double> x, p;
  long double mass = 0;
  TableLaw(std::vector<long double> xs, std::vector<long double> ps) : x(std::move(xs)), p(std::move(ps)) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i) mass += 0.5L * (p[i] + p[i + 1]) * (x[i + 1] - x[i]);
  }
  long double pdf(long double t) const {
    if (t < x.front() || t > x.back()) return 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      if (t <= x[i + 1]) {
        const long double s = (t - x[i]) / (x[i + 1] - x[i]);
        return ((1 - s) * p[i] + s * p[i + 1]) / mass;
      }
    }
    return 0;
  }
  long double cdf(long double t) const {
    if (t <= x.front()) return 0;
    long double acc = 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const long double b = std::min(t, x[i + 1]);
      const long double s = (b - x[i]) / (x[i + 1] - x[i]);
      const long double pb = (1 - s) * p[i] + s * p[i + 1];
      acc += 0.5L * (p[i] + pb) * (b - x[i]);
      if (t <= x[i + 1]) break;
    }
    return acc / mass;
  }
};

long double naiveHk(long double y, long double k) {
  return std::log((std::exp(-k) + std::exp(y)) / (1 + std::exp(y - k)));
}
long double naiveHkPrime(long double y, long double k) {
  return 2 * std::sinh(k) * std::exp(y) / ((1 + std::exp(y + k)) * (1 + std::exp(y - k)));
}

GridTail randomTail(const UniformGrid& grid, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GridTail g;
  g.grid = grid;
  g.values.resize(grid.size());
  const double centre = -2.0 + 4.0 * u(gen);
  const double width = 0.3 + 2.0 * u(gen);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    g.values(i) = 1.0 / (1.0 + std::exp((grid.node(static_cast<std::size_t>(i)) - centre) / width));
  }
  g.values(0) = 1.0;
  g.values(grid.size() - 1) = 0.0;
  return g;
}

}  // namespace

TEST_SUITE("operator") {
  TEST_CASE("small-instance oracle: brute-force double sum") {
    const std::vector<double> xs{-0.9, -0.3, 0.3, 0.9};
    const std::vector<double> ps{0.2, 1.0, 0.6, 0.1};
    const TableLaw law({xs.begin(), xs.end()}, {ps.begin(), ps.end()});
    const auto model = DisorderModel::table(xs, ps);
    const double k = 2.0;
    UniformGrid grid;
    grid.xLo = -6.0;
    grid.xHi = 6.0;
    grid.n = 50;

    std::mt19937_64 gen(12);
    for (int trial = 0; trial < 3; ++trial) {
      GridTail g = randomTail(grid, gen);
      if (trial == 2) {  // a difference tail with both limits zero
        const GridTail other = randomTail(grid, gen);
        g = difference(g, other);
      }
      const GridTail tg = applyT(g, k, model);
      const long double h = (grid.xHi - grid.xLo) / (grid.n - 1.0L);
      const long double hLo = naiveHk(grid.xLo, k), hHi = naiveHk(grid.xHi, k);
      for (std::size_t i = 0; i < grid.n; ++i) {
        const long double x = grid.xLo + h * i;
        long double sum = 0;
        for (std::size_t j = 0; j < grid.n; ++j) {
          const long double y = grid.xLo + h * j;
          const long double w = (j == 0 || j + 1 == grid.n) ? h / 2 : h;
          sum += w * g.values(static_cast<Eigen::Index>(j)) * naiveHkPrime(y, k) * law.pdf(x - naiveHk(y, k));
        }
        sum += g.leftLimit * (1 - law.cdf(k + x));
        sum += g.leftLimit * (law.cdf(x + k) - law.cdf(x - hLo));
        sum += g.rightLimit * (law.cdf(x - hHi) - law.cdf(x - k));
        CHECK(std::abs(tg.values(static_cast<Eigen::Index>(i)) - static_cast<double>(sum)) < 1e-10);
      }
    }
  }

  TEST_CASE("one step from the origin gives the law of z") {
    const auto model = DisorderModel::gaussian(0.0, 1.0);
    const double k = 5.0;
    const GridTail g = GridTail::pointMass(operatorGrid(k, 10.0, 0.01), 0.0);
    const GridTail tg = applyT(g, k, model);
    for (Eigen::Index i = 0; i < tg.grid.size(); i += 7) {
      CHECK(std::abs(tg.values(i) - model.tail(tg.grid.node(static_cast<std::size_t>(i)))) < 1e-4);
    }
  }

  TEST_CASE("T maps probability tails to probability tails and is monotone") {
    const auto model = DisorderModel::figure2();
    const double k = 3.0;
    const TransferOperator op(operatorGrid(k, 10.0, 0.02), k, model);
    std::mt19937_64 gen(4);
    for (int t = 0; t < 10; ++t) {
      const GridTail a = randomTail(op.grid(), gen);
      GridTail b = randomTail(op.grid(), gen);
      const GridTail ta = op.apply(a);
      CHECK(ta.leftLimit == 1.0);
      CHECK(ta.rightLimit == 0.0);
      CHECK(ta.isProbabilityTail(1e-6));
      // b <- max(a, b) is pointwise above a
      b.values = b.values.cwiseMax(a.values);
      const GridTail tb = op.apply(b);
      CHECK((tb.values - ta.values).minCoeff() >= -1e-14);
    }
  }

  TEST_CASE("coverage precondition") {
    const auto model = DisorderModel::gaussian(0.0, 2.0);
    const UniformGrid narrow = UniformGrid::bySpacing(-12.0, 12.0, 0.05);
    CHECK_THROWS_WITH_AS(TransferOperator(narrow, 5.0, model), "grid does not cover support", DomainError);
    CHECK_NOTHROW(TransferOperator(UniformGrid::bySpacing(-22.0, 22.0, 0.05), 5.0, model));
  }

  TEST_CASE("T0") {
    const auto model = DisorderModel::gaussian(0.0, 1.0);
    const double k = 4.0;
    const TransferOperator op(operatorGrid(k, 10.0, 0.02), k, model);
    GridTail zero;
    zero.grid = op.grid();
    zero.values = Eigen::VectorXd::Zero(op.grid().size());
    zero.leftLimit = zero.rightLimit = 0.0;
    CHECK(op.applyHomogeneous(zero).values.cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_WITH_AS(applyT0(GridTail::pointMass(op.grid()), k, model), "nonzero limits", DomainError);

    std::mt19937_64 gen(8);
    for (int t = 0; t < 20; ++t) {
      const GridTail d = difference(randomTail(op.grid(), gen), randomTail(op.grid(), gen));
      CHECK(l1Norm(op.applyHomogeneous(d)) <= l1Norm(d) * (1.0 + 1e-12));
    }
  }

  TEST_CASE("T0 series at k = 6 with a calibrated polylog constant") {
    const auto model = DisorderModel::gaussian(0.0, 1.0);
    const double k = 6.0;
    const TransferOperator op(operatorGrid(k, 10.0, 0.05), k, model);
    const GridTail d = difference(GridTail::pointMass(op.grid(), 0.0), GridTail::pointMass(op.grid(), 1.0));
    const auto norms = homogeneousNorms(op, d, 4000);
    double sum = 0.0;
    for (double v : norms) sum += v;
    CHECK(norms.back() < 1e-6 * norms.front());
    const double ratio = sum / (k * k * norms.front());
    const double calibratedC = std::log(ratio) / std::log(std::log(k));
    MESSAGE("sum of ||T0^n G||_1 / (k^2 ||G||_1) = " << ratio << ", calibrated C = " << calibratedC);
    CHECK(std::isfinite(calibratedC));
    CHECK(sum <= k * k * std::pow(std::log(k), calibratedC) * norms.front() * (1.0 + 1e-12));
  }

  TEST_CASE("solveInvariant") {
    const auto model = DisorderModel::gaussian(0.0, 1.0);
    const double k = 5.0;
    InvariantOptions io;
    const InvariantTail inv = solveInvariant(k, model, io);
    CHECK(inv.tail.isProbabilityTail(1e-6));
    CHECK(inv.residual < io.tol);
    CHECK(l1Distance(applyT(inv.tail, k, model), inv.tail) < io.tol);
    CHECK(std::abs(driftIntegral(inv.tail, k)) < 1e-4);

    const LyapForms forms = lyapForms(inv.tail, k);
    CHECK(std::abs(forms.fromTail - forms.fromCdf) < 1e-6);
    CHECK(lyapFunctional(inv.tail, k) == forms.fromTail);

    ChainConfig cfg;
    cfg.k = k;
    cfg.steps = 10'000'000;
    cfg.seed = 21;
    const auto erg = ergodicLyapunov(cfg);
    CHECK(std::abs(forms.fromTail - erg.mean) <= 3.0 * erg.stdErr + 1e-3);
  }

  TEST_CASE("empirical chain CDF matches the solved tail at k = 5") {
    const auto model = DisorderModel::gaussian(0.0, 1.0);
    const double k = 5.0;
    const InvariantTail inv = solveInvariant(k, model);
    ChainConfig cfg;
    cfg.k = k;
    cfg.steps = 1'000'000;
    cfg.seed = 0;
    ChainOptions co;
    co.keepPath = true;
    std::vector<double> path = simulateX(cfg, co).path;
    std::sort(path.begin(), path.end());
    const double n = static_cast<double>(path.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const double f = 1.0 - inv.tail(path[i]);
      ks = std::max({ks, std::abs(f - static_cast<double>(i + 1) / n), std::abs(f - static_cast<double>(i) / n)});
    }
    CHECK(ks < 0.01);
  }

  TEST_CASE("plain iteration reaches the direct solution") {
    const auto model = DisorderModel::laplace(0.0, 0.5);
    const double k = 2.0;
    InvariantOptions direct, iterate;
    direct.spacing = iterate.spacing = 0.02;
    iterate.method = FixedPointMethod::Iterate;
    const auto a = solveInvariant(k, model, direct);
    const auto b = solveInvariant(k, model, iterate);
    CHECK(b.iterations > 0);
    CHECK(l1Distance(a.tail, b.tail) < 1e-7);
    iterate.maxIter = 3;
    CHECK_THROWS_WITH_AS(solveInvariant(k, model, iterate), "no convergence in maxIter", NumericalError);
  }

  TEST_CASE("Lyapunov functional is 1-Lipschitz in L1") {
    const double k = 4.0;
    const UniformGrid grid = operatorGrid(k, 10.0, 0.02);
    std::mt19937_64 gen(31);
    for (int t = 0; t < 30; ++t) {
      const GridTail a = randomTail(grid, gen);
      const GridTail b = randomTail(grid, gen);
      const double inf = std::numeric_limits<double>::infinity();
      CHECK(std::abs(lyapFunctional(a, k, inf) - lyapFunctional(b, k, inf)) <= l1Distance(a, b) + 1e-12);
    }
  }

  TEST_CASE("form mismatch is reported for tails that are not invariant") {
    const double k = 4.0;
    const GridTail g = GridTail::pointMass(operatorGrid(k, 10.0, 0.02), 1.5);
    CHECK_THROWS_WITH_AS(lyapFunctional(g, k), "form mismatch exceeds tolerance", NumericalError);
  }
}

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lyap/disorder.hpp"
#include "lyap/errors.hpp"
#include "lyap/rng.hpp"

using namespace lyap;

namespace {

std::vector<DisorderModel> builtins() {
  return {DisorderModel::gaussian(0.0, 1.0),
          DisorderModel::gaussian(-0.25, 1.3),
          DisorderModel::laplace(0.0, 0.7),
          DisorderModel::laplace(0.4, 1.2),
          DisorderModel::figure2(),
          DisorderModel::mixture(0.3, 1.0, 0.5, -0.2, 2.0),
          DisorderModel::table({-2.0, -0.5, 0.0, 1.0, 3.0}, {0.0, 0.8, 1.0, 0.4, 0.0})};
}

// Trapezoid over +-40 standard deviations (Laplace tails at 12 sd still hold
// about 4e-8 of mass), with a node on the Laplace kink.
double totalMass(const DisorderModel& m) {
  const double c = m.mean();
  const double half = 40.0 * m.stddev();
  const double h = 2e-4;
  const auto n = static_cast<long>(std::ceil(half / h));
  double acc = 0.0;
  for (long i = -n; i < n; ++i) {
    const double a = c + h * static_cast<double>(i);
    acc += 0.5 * h * (m.pdf(a) + m.pdf(a + h));
  }
  return acc;
}

}  // namespace

TEST_SUITE("disorder") {
  TEST_CASE("sampling is reproducible per (seed, stream)") {
    const auto m = DisorderModel::gaussian(0.0, 1.0);
    RngStream a(42, 0), b(42, 0), c(42, 1);
    const auto xa = m.sample(a, 3);
    const auto xb = m.sample(b, 3);
    const auto xc = m.sample(c, 3);
    CHECK(xa.size() == 3);
    CHECK(xa == xb);
    CHECK(xa != xc);
  }

  TEST_CASE("degenerate sigma is rejected") {
    CHECK_THROWS_WITH_AS(DisorderModel::gaussian(5.0, 0.0), "degenerate sigma", DomainError);
  }

  TEST_CASE("centered Laplace sample mean obeys the law of large numbers") {
    const auto m = DisorderModel::laplace(0.8, 1.5).centered();
    RngStream rng(7, 0);
    const std::size_t n = 1'000'000;
    double s = 0.0;
    for (double z : m.sample(rng, n)) s += z;
    const double mean = s / static_cast<double>(n);
    CHECK(std::abs(mean) < 4.0 * m.stddev() / std::sqrt(static_cast<double>(n)));
  }

  TEST_CASE("sampled variance matches the analytic value") {
    for (const auto& m : builtins()) {
      RngStream rng(11, 3);
      const std::size_t n = 400'000;
      double s = 0.0, ss = 0.0;
      for (double z : m.sample(rng, n)) {
        s += z;
        ss += z * z;
      }
      const double mean = s / static_cast<double>(n);
      const double var = ss / static_cast<double>(n) - mean * mean;
      CHECK(std::abs(mean - m.mean()) < 5.0 * m.stddev() / std::sqrt(static_cast<double>(n)));
      CHECK(var == doctest::Approx(m.variance()).epsilon(0.02));
    }
  }

  TEST_CASE("expMoment closed forms and band") {
    const double mu = 0.3, sigma = 0.8;
    const auto g = DisorderModel::gaussian(mu, sigma);
    for (double u : {-2.0, -0.5, 0.7, 3.0}) {
      CHECK(g.expMoment(u) == doctest::Approx(std::exp(u * mu + 0.5 * u * u * sigma * sigma)).epsilon(1e-13));
    }
    for (const auto& m : builtins()) CHECK(m.centered().expMoment(0.0) == doctest::Approx(1.0).epsilon(1e-12));

    const double b = 0.5;
    const auto l = DisorderModel::laplace(0.0, b);
    CHECK(l.expMoment(1.0) == doctest::Approx(1.0 / (1.0 - b * b)).epsilon(1e-13));
    CHECK_THROWS_WITH_AS(l.expMoment(1.0 / b), "moment diverges", DomainError);
    CHECK_THROWS_WITH_AS(l.expMoment(-2.5), "moment diverges", DomainError);
  }

  TEST_CASE("expMoment is midpoint convex") {
    std::mt19937_64 gen(5);
    for (const auto& m : builtins()) {
      const double band = std::min(m.tailRateDelta(), 3.0) * 0.95;
      std::uniform_real_distribution<double> u(-band, band);
      for (int t = 0; t < 100; ++t) {
        double a = u(gen), c = u(gen);
        if (a > c) std::swap(a, c);
        const double mid = 0.5 * (a + c);
        CHECK(m.expMoment(mid) <= 0.5 * (m.expMoment(a) + m.expMoment(c)) * (1.0 + 1e-12));
      }
    }
  }

  TEST_CASE("solveAlpha") {
    // alpha = -2 mu / sigma^2 for Gaussian laws
    const double alphaMinus = 0.5;
    const double alphaPlus = -0.5;
    const auto a1 = solveAlpha(DisorderModel::gaussian(-0.25, 1.0));
    REQUIRE(a1.has_value());
    CHECK(*a1 == doctest::Approx(alphaMinus).epsilon(1e-10));
    CHECK_FALSE(solveAlpha(DisorderModel::gaussian(0.0, 1.0)).has_value());
    const auto a2 = solveAlpha(DisorderModel::gaussian(0.25, 1.0));
    REQUIRE(a2.has_value());
    CHECK(*a2 == doctest::Approx(alphaPlus).epsilon(1e-10));

    for (const auto& m : {DisorderModel::laplace(-0.3, 0.6), DisorderModel::figure2().shifted(0.2),
                          DisorderModel::table({-2.0, 0.0, 1.0}, {0.0, 1.0, 0.0}).shifted(-0.1)}) {
      const auto a = solveAlpha(m);
      REQUIRE(a.has_value());
      CHECK(std::abs(m.expMoment(*a) - 1.0) < 1e-10);
      CHECK((*a > 0.0) == (m.mean() < 0.0));
    }
  }

  TEST_CASE("solveAlpha finds roots close to the edge of the moment band") {
    // Laplace mean -3, scale 0.5: the root sits just below the band edge 2,
    // where E[e^{uz}] = e^{-3u} / (1 - u^2/4) blows up.
    const auto m = DisorderModel::laplace(-3.0, 0.5);
    const auto a = solveAlpha(m);
    REQUIRE(a.has_value());
    CHECK(*a > 1.9);
    CHECK(*a < 2.0);
    CHECK(std::abs(m.expMoment(*a) - 1.0) < 1e-10);
  }

  TEST_CASE("mirror") {
    const auto g = DisorderModel::gaussian(0.4, 1.7).mirror();
    CHECK(g.params()[0] == -0.4);
    CHECK(g.params()[1] == 1.7);
    const auto l = DisorderModel::laplace(0.0, 0.8);
    for (double x = -5.0; x <= 5.0; x += 0.37) CHECK(l.mirror().pdf(x) == l.pdf(x));
    const auto f = DisorderModel::figure2();
    for (int i = 0; i < 100; ++i) {
      const double x = -6.0 + 0.12 * i;
      CHECK(f.mirror().pdf(x) == doctest::Approx(f.pdf(-x)).epsilon(1e-14));
    }
    for (const auto& m : builtins()) {
      const auto mm = m.mirror().mirror();
      for (double x = -4.0; x <= 4.0; x += 0.5) CHECK(mm.pdf(x) == doctest::Approx(m.pdf(x)).epsilon(1e-14));
      CHECK(m.mirror().mean() == doctest::Approx(-m.mean()).epsilon(1e-12));
    }
  }

  TEST_CASE("densities integrate to one and split cdf + tail exactly") {
    for (const auto& m : builtins()) {
      CHECK(std::abs(totalMass(m) - 1.0) < 1e-8);
      for (double x = -8.0; x <= 8.0; x += 0.31) CHECK(std::abs(m.cdf(x) + m.tail(x) - 1.0) < 1e-12);
    }
  }

  TEST_CASE("centering is exact") {
    for (const auto& m : builtins()) CHECK(std::abs(m.centered().mean()) < 1e-10);
    CHECK(std::abs(DisorderModel::figure2().mean()) < 1e-15);
  }

  TEST_CASE("exponential tail bound at the grid extremes") {
    const auto l = DisorderModel::laplace(0.0, 0.7);
    const double d = 0.9 * l.tailRateDelta();
    const double c = l.pdf(0.0);
    for (double x : {-12.0 * l.stddev(), 12.0 * l.stddev()}) CHECK(l.pdf(x) <= c * std::exp(-d * std::abs(x)));
    const auto g = DisorderModel::gaussian(0.0, 1.0);
    CHECK(g.pdf(12.0) <= g.pdf(0.0) * std::exp(-12.0));
  }

  TEST_CASE("table density is renormalized and interpolated linearly") {
    const auto t = DisorderModel::table({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    CHECK(t.pdf(1.0) == doctest::Approx(1.0));
    CHECK(t.pdf(0.5) == doctest::Approx(0.5));
    CHECK(t.cdf(1.0) == doctest::Approx(0.5));
    CHECK(t.pdf(-0.1) == 0.0);
    CHECK(t.tailRateDelta() == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(DisorderModel::table({0.0, 0.0}, {1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(DisorderModel::table({0.0, 1.0}, {1.0, -1.0}), DomainError);
  }

  TEST_CASE("constant model has no density") {
    const auto c = DisorderModel::constant(0.0);
    CHECK_FALSE(c.hasDensity());
    CHECK_THROWS_WITH_AS(c.pdf(0.0), "model has no density", DomainError);
    RngStream rng(1, 0);
    CHECK(c.draw(rng) == 0.0);
  }
}

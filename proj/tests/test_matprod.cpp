#include <doctest.h>

#include <cmath>
#include <vector>

#include "lyap/errors.hpp"
#include "lyap/matprod.hpp"
#include "lyap/rng.hpp"

using namespace lyap;

namespace {

// log || M_n ... M_1 v0 ||_1 by multiplying the full 2x2 product in long
// double, rescaling the product (not the vector) whenever it gets large.
long double oracleLogNorm(double eps, const std::vector<double>& z) {
  long double p00 = 1, p01 = 0, p10 = 0, p11 = 1, scale = 0;
  for (double zj : z) {
    const long double Z = std::exp(static_cast<long double>(zj));
    const long double e = eps;
    const long double q00 = p00 + e * p10, q01 = p01 + e * p11;
    const long double q10 = e * Z * p00 + Z * p10, q11 = e * Z * p01 + Z * p11;
    p00 = q00, p01 = q01, p10 = q10, p11 = q11;
    const long double m = std::max(std::max(std::fabs(p00), std::fabs(p01)), std::max(std::fabs(p10), std::fabs(p11)));
    p00 /= m, p01 /= m, p10 /= m, p11 /= m;
    scale += std::log(m);
  }
  return scale + std::log(0.5L * (p00 + p01) + 0.5L * (p10 + p11));
}

}  // namespace

TEST_SUITE("matprod") {
  TEST_CASE("eigenvalue anchor: Z = 1") {
    const double expected = std::log(1.5);
    const auto e = lyapunovMC(0.5, DisorderModel::constant(0.0), 200'000, 32, 0);
    CHECK(std::abs(e.mean - expected) <= std::max(3.0 * e.stdErr, 1e-12));
    CHECK(e.steps == 200'000);
    CHECK(e.batches == 32);
  }

  TEST_CASE("diagonal anchors at epsilon = 0") {
    const auto balanced = lyapunovMC(0.0, DisorderModel::gaussian(0.0, 1.0), 1'000'000, 32, 1);
    CHECK(std::abs(balanced.mean) <= 3.0 * balanced.stdErr);
    CHECK(std::isinf(balanced.k));
    const auto drift = lyapunovMC(0.0, DisorderModel::gaussian(0.3, 1.0), 1'000'000, 32, 2);
    CHECK(std::abs(drift.mean - 0.3) <= 3.0 * drift.stdErr);
  }

  TEST_CASE("renormalized accumulation matches the extended-precision product") {
    RngStream rng(9, 0);
    const auto model = DisorderModel::gaussian(0.0, 2.0);
    for (double eps : {0.0, 1e-6, 0.05, 0.5, 0.99}) {
      for (std::size_t n : {1u, 7u, 30u}) {
        const auto z = model.sample(rng, n);
        const double got = logNormOfProduct(eps, z);
        CHECK(std::abs(got - static_cast<double>(oracleLogNorm(eps, z))) < 1e-10);
      }
    }
  }

  TEST_CASE("epsilon symmetry is exact") {
    const auto m = DisorderModel::gaussian(0.0, 1.0);
    const auto a = lyapunovMC(0.1, m, 100'000, 10, 3);
    const auto b = lyapunovMC(-0.1, m, 100'000, 10, 3);
    CHECK(a.mean == b.mean);
    CHECK(a.stdErr == b.stdErr);
  }

  TEST_CASE("estimate does not depend on the norm") {
    const auto m = DisorderModel::gaussian(0.0, 1.0);
    MCOptions rowSum, maxEntry;
    maxEntry.norm = VectorNorm::MaxEntry;
    const auto a = lyapunovMC(std::exp(-3.0), m, 2'000'000, 32, 4, rowSum);
    const auto b = lyapunovMC(std::exp(-3.0), m, 2'000'000, 32, 4, maxEntry);
    CHECK(std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.stdErr, b.stdErr));
  }

  TEST_CASE("stderr is the batch-mean standard error") {
    const auto e = lyapunovMC(0.2, DisorderModel::laplace(0.0, 1.0), 64'000, 16, 5);
    CHECK(e.stdErr > 0.0);
    CHECK(std::isfinite(e.mean));
  }

  TEST_CASE("errors") {
    const auto m = DisorderModel::gaussian(0.0, 1.0);
    CHECK_THROWS_WITH_AS(lyapunovMC(1.0, m, 100, 10, 0), "epsilon out of range", DomainError);
    CHECK_THROWS_WITH_AS(lyapunovMC(-1.5, m, 100, 10, 0), "epsilon out of range", DomainError);
    CHECK_THROWS_AS(lyapunovMC(0.5, m, 100, 1, 0), DomainError);
    CHECK_THROWS_AS(lyapunovMC(0.5, m, 5, 10, 0), DomainError);
  }

  TEST_CASE("epsilonSweep") {
    const auto m = DisorderModel::gaussian(0.0, 1.0);
    const std::vector<double> eps{std::exp(-2.0), std::exp(-4.0)};
    const auto a = epsilonSweep(m, eps, 2'000'000, 32, 17);
    REQUIRE(a.size() == 2);
    CHECK(a[0].seed != a[1].seed);
    CHECK(a[0].epsilon == eps[0]);
    CHECK(a[0].mean - a[1].mean > 3.0 * std::hypot(a[0].stdErr, a[1].stdErr));
    const auto b = epsilonSweep(m, eps, 2'000'000, 32, 17);
    CHECK(a[0].mean == b[0].mean);
    CHECK(a[1].mean == b[1].mean);
    const std::vector<double> bad{0.5, 1.0};
    CHECK_THROWS_WITH_AS(epsilonSweep(m, bad, 100, 10, 0), "epsilon out of range", DomainError);
  }

  TEST_CASE("powerLawFit") {
    const std::vector<double> eps{0.1, 0.01, 0.001, 1e-4};
    CHECK_THROWS_AS(powerLawFit(std::span<const double>(eps).first(2), std::span<const double>(eps).first(2)),
                    DomainError);
    const auto exact = powerLawFit(eps, eps);
    CHECK(exact.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact.r2 == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<double> bad{0.1, -0.2, 0.3, 0.4};
    CHECK_THROWS_WITH_AS(powerLawFit(eps, bad), "nonpositive estimate in sweep", DomainError);
  }

  TEST_CASE("unbalanced sweep follows the 2 alpha power law") {
    const double twoAlpha = 1.0;  // alpha = -2 mu / sigma^2 = 0.5
    const auto m = DisorderModel::gaussian(-0.25, 1.0);
    std::vector<double> eps;
    for (int j = 5; j <= 8; ++j) eps.push_back(std::exp(-static_cast<double>(j)));
    const auto sweep = epsilonSweep(m, eps, 20'000'000, 32, 0);
    const auto fit = powerLawFit(sweep);
    CHECK(std::abs(fit.slope - twoAlpha) < 0.15 * twoAlpha);
  }

  TEST_CASE("balanced sweep is not a power law") {
    const auto m = DisorderModel::gaussian(0.0, 1.0);
    std::vector<double> eps;
    for (int j = 3; j <= 9; j += 2) eps.push_back(std::exp(-static_cast<double>(j)));
    const auto sweep = epsilonSweep(m, eps, 4'000'000, 32, 0);
    const auto fit = powerLawFit(sweep);
    MESSAGE("balanced log-log slope " << fit.slope << ", r2 " << fit.r2);
    CHECK(std::abs(fit.slope) < 0.5);
  }
}

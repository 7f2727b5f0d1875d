#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lyap/errors.hpp"
#include "lyap/model_io.hpp"

using namespace lyap;
using nlohmann::json;

TEST_SUITE("model_io") {
  TEST_CASE("families round-trip") {
    const std::vector<DisorderModel> models{
        DisorderModel::gaussian(0.1, 1.2), DisorderModel::laplace(-0.2, 0.7), DisorderModel::figure2(),
        DisorderModel::table({-1.0, 0.0, 2.0}, {0.0, 1.0, 0.0}), DisorderModel::constant(0.3),
        DisorderModel::gaussian(0.0, 1.0).shifted(-0.25)};
    for (const auto& m : models) {
      const auto back = modelFromJson(modelToJson(m));
      CHECK(back.family() == m.family());
      CHECK(back.mean() == doctest::Approx(m.mean()).epsilon(1e-14));
      if (m.hasDensity()) {
        for (double x = -3.0; x <= 3.0; x += 0.25) CHECK(back.pdf(x) == doctest::Approx(m.pdf(x)).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("documents") {
    const auto g = modelFromJson(json::parse(R"({"family": "gaussian", "mu": 0.0, "sigma": 1.0})"));
    CHECK(g.family() == Family::Gaussian);
    const auto c = modelFromJson(json::parse(R"({"family": "laplace", "mu": 0.7, "scale": 1.0, "center": true})"));
    CHECK(std::abs(c.mean()) < 1e-15);
    const auto s = modelFromJson(json::parse(R"({"family": "gaussian", "mu": 0.0, "sigma": 1.0, "shift": -0.25})"));
    CHECK(s.mean() == doctest::Approx(-0.25));
    const auto t = modelFromJson(json::parse(R"({"family": "table", "x": [0, 1, 2], "pdf": [0, 3, 0]})"));
    CHECK(t.pdf(1.0) == doctest::Approx(1.0));
  }

  TEST_CASE("validation names the offending field") {
    CHECK_THROWS_WITH_AS(modelFromJson(json::parse(R"({"family": "gaussian", "mu": 0, "sigma": 1, "nu": 2})")),
                         "unknown key: nu", DomainError);
    CHECK_THROWS_WITH_AS(modelFromJson(json::parse(R"({"family": "gaussian", "mu": 0})")), "missing field: sigma",
                         DomainError);
    CHECK_THROWS_WITH_AS(modelFromJson(json::parse(R"({"family": "cauchy"})")), "unknown family: cauchy", DomainError);
    CHECK_THROWS_WITH_AS(modelFromJson(json::parse(R"({"family": "gaussian", "mu": "0", "sigma": 1})")),
                         "field must be a number: mu", DomainError);
    CHECK_THROWS_WITH_AS(modelFromJson(json::parse(R"({"family": "gaussian", "mu": 0, "sigma": 0})")),
                         "degenerate sigma", DomainError);
  }

  TEST_CASE("files") {
    CHECK_THROWS_WITH_AS(loadModel("/nonexistent/model.json"), "modelPath not found: /nonexistent/model.json",
                         DomainError);
    const auto path = std::filesystem::temp_directory_path() / "lyap_model_io_test.json";
    {
      std::ofstream f(path);
      f << R"({"family": "figure2"})";
    }
    CHECK(loadModel(path.string()).family() == Family::Mixture);
    {
      std::ofstream f(path);
      f << "{ not json";
    }
    CHECK_THROWS_AS(loadModel(path.string()), DomainError);
    std::filesystem::remove(path);
  }
}

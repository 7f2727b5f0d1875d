#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace lyapcli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kNumericalFailure = 1;
inline constexpr int kValidationError = 2;

struct Common {
  std::string modelPath;  // empty: built-in default model of the command
  std::string out;        // empty: standard output
  std::string manifest;   // empty: <out>.manifest.json, or lyap-<command>.manifest.json
  std::uint64_t seed = 0;
};

struct McArgs {
  Common common;
  std::vector<double> eps;
  std::size_t steps = 1'000'000;
  std::size_t batches = 32;
  std::string norm = "rowsum";
};

struct ChainArgs {
  Common common;
  double k = 5.0;
  std::size_t steps = 1'000'000;
  std::size_t burnIn = 100'000;
  double x0 = 0.0;
  std::string histOut;
};

struct OperatorArgs {
  Common common;
  double k = 5.0;
  double tol = 1e-8;
  double spacing = 0.01;
  double margin = 10.0;
  std::size_t maxIter = 0;
  std::string method = "direct";
};

struct EdgeArgs {
  Common common;
  std::string side = "left";
  double spacing = 0.02;
  double x0 = 1.0;
  std::string jsonOut;
};

struct DhArgs {
  Common common;
  std::vector<double> ks{6.0, 9.0, 12.0};
};

struct DhConstantsArgs {
  Common common;
  std::string jsonOut;
};

struct WdArgs {
  Common common;
  double eps = 0.0;
  double k = 0.0;
};

struct CompareArgs {
  Common common;
  std::vector<double> ks{6.0, 9.0, 12.0};
  std::size_t mcSteps = 10'000'000;
  std::size_t chainSteps = 10'000'000;
  std::size_t batches = 32;
};

struct Fig2Args {
  Common common;
  double k = 10.0;
  double xMin = -12.0;
  double xMax = 12.0;
};

/// Each command writes its artifacts, prints a short summary on stdout and
/// returns the list of files it wrote. Errors propagate as exceptions.
std::vector<std::string> runMc(const McArgs& a, std::ostream& os);
std::vector<std::string> runChain(const ChainArgs& a, std::ostream& os);
std::vector<std::string> runOperator(const OperatorArgs& a, std::ostream& os);
std::vector<std::string> runEdge(const EdgeArgs& a, std::ostream& os);
std::vector<std::string> runDh(const DhArgs& a, std::ostream& os);
std::vector<std::string> runDhConstants(const DhConstantsArgs& a, std::ostream& os);
std::vector<std::string> runWd(const WdArgs& a, std::ostream& os);
std::vector<std::string> runCompare(const CompareArgs& a, std::ostream& os);
std::vector<std::string> runFig2(const Fig2Args& a, std::ostream& os);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);

/// {"command", "version", "seed", "configHash", "config", "outputs"}; the
/// hash is taken over config.dump().
nlohmann::json makeManifest(const std::string& command, std::uint64_t seed, const nlohmann::json& config,
                            const std::vector<std::string>& outputs);

}  // namespace lyapcli

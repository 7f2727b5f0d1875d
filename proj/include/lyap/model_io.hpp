#pragma once

#include <string>

#include <json.hpp>

#include "lyap/disorder.hpp"

namespace lyap {

/// Model documents:
///   {"family": "gaussian", "mu": 0, "sigma": 1}
///   {"family": "laplace", "mu": 0, "scale": 1}
///   {"family": "mixture", "p": .., "a": .., "b": .., "mu2": .., "sigma2": ..}
///   {"family": "figure2"}
///   {"family": "table", "x": [..], "pdf": [..]}
///   {"family": "constant", "z0": 0}
/// Optional for every family: "shift" (number) and "center" (bool, applied
/// before the shift). Unknown keys are rejected with DomainError naming them.
DisorderModel modelFromJson(const nlohmann::json& doc);
nlohmann::json modelToJson(const DisorderModel& model);

/// Throws DomainError("modelPath not found: <path>") for a missing file.
DisorderModel loadModel(const std::string& path);

}  // namespace lyap

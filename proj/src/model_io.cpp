#include "lyap/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "lyap/errors.hpp"

namespace lyap {

using nlohmann::json;

namespace {

double number(const json& doc, const char* key) {
  if (!doc.contains(key)) throw DomainError(std::string("missing field: ") + key);
  const json& v = doc.at(key);
  if (!v.is_number()) throw DomainError(std::string("field must be a number: ") + key);
  return v.get<double>();
}

std::vector<double> numberArray(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) throw DomainError(std::string("field must be an array: ") + key);
  std::vector<double> out;
  for (const json& v : doc.at(key)) {
    if (!v.is_number()) throw DomainError(std::string("field must hold numbers: ") + key);
    out.push_back(v.get<double>());
  }
  return out;
}

void rejectUnknown(const json& doc, std::set<std::string> allowed) {
  allowed.insert({"family", "shift", "center"});
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw DomainError("unknown key: " + key);
  }
}

}  // namespace

DisorderModel modelFromJson(const json& doc) {
  if (!doc.is_object()) throw DomainError("model document must be an object");
  if (!doc.contains("family") || !doc.at("family").is_string()) throw DomainError("missing field: family");
  const std::string fam = doc.at("family").get<std::string>();

  DisorderModel m = DisorderModel::constant(0.0);
  if (fam == "gaussian") {
    rejectUnknown(doc, {"mu", "sigma"});
    m = DisorderModel::gaussian(number(doc, "mu"), number(doc, "sigma"));
  } else if (fam == "laplace") {
    rejectUnknown(doc, {"mu", "scale"});
    m = DisorderModel::laplace(number(doc, "mu"), number(doc, "scale"));
  } else if (fam == "mixture") {
    rejectUnknown(doc, {"p", "a", "b", "mu2", "sigma2"});
    m = DisorderModel::mixture(number(doc, "p"), number(doc, "a"), number(doc, "b"), number(doc, "mu2"),
                               number(doc, "sigma2"));
  } else if (fam == "figure2") {
    rejectUnknown(doc, {});
    m = DisorderModel::figure2();
  } else if (fam == "table") {
    rejectUnknown(doc, {"x", "pdf"});
    m = DisorderModel::table(numberArray(doc, "x"), numberArray(doc, "pdf"));
  } else if (fam == "constant") {
    rejectUnknown(doc, {"z0"});
    m = DisorderModel::constant(number(doc, "z0"));
  } else {
    throw DomainError("unknown family: " + fam);
  }

  if (doc.contains("center")) {
    if (!doc.at("center").is_boolean()) throw DomainError("field must be a boolean: center");
    if (doc.at("center").get<bool>()) m = m.centered();
  }
  if (doc.contains("shift")) m = m.shifted(number(doc, "shift"));
  return m;
}

json modelToJson(const DisorderModel& model) {
  json doc;
  const auto& p = model.params();
  switch (model.family()) {
    case Family::Gaussian:
      doc = {{"family", "gaussian"}, {"mu", p[0]}, {"sigma", p[1]}};
      break;
    case Family::Laplace:
      doc = {{"family", "laplace"}, {"mu", p[0]}, {"scale", p[1]}};
      break;
    case Family::Mixture:
      doc = {{"family", "mixture"}, {"p", p[0]}, {"a", p[1]}, {"b", p[2]}, {"mu2", p[3]}, {"sigma2", p[4]}};
      break;
    case Family::Table:
      doc = {{"family", "table"}, {"x", model.tableX()}, {"pdf", model.tablePdf()}};
      break;
    case Family::Constant:
      doc = {{"family", "constant"}, {"z0", p[0]}};
      break;
  }
  if (model.meanShift() != 0.0) doc["shift"] = model.meanShift();
  return doc;
}

DisorderModel loadModel(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw DomainError("modelPath not found: " + path);
  std::ifstream in(path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DomainError(std::string("modelPath is not valid JSON: ") + e.what());
  }
  return modelFromJson(doc);
}

}  // namespace lyap

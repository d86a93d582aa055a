#include "simplexgeo/report.hpp"

namespace simplexgeo {

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::passed: return "passed";
    case CheckStatus::failed: return "failed";
    case CheckStatus::precondition_failed: return "precondition_failed";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "failed";
}

namespace {

nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json numbers(const std::vector<double>& v) {
  auto arr = nlohmann::ordered_json::array();
  for (double x : v) arr.push_back(number(x));
  return arr;
}

}  // namespace

nlohmann::ordered_json to_json(const CheckReport& report) {
  nlohmann::ordered_json j;
  j["name"] = report.name;
  j["passed"] = report.passed;
  j["status"] = std::string(to_string(report.status));
  j["max_deviation"] = number(report.max_deviation);
  j["tolerance"] = number(report.tolerance);
  j["trials"] = report.trials;
  if (report.witness) {
    nlohmann::ordered_json w;
    w["point"] = numbers(report.witness->point);
    auto tangents = nlohmann::ordered_json::array();
    for (const auto& t : report.witness->tangents) tangents.push_back(numbers(t));
    w["tangents"] = tangents;
    w["values"] = numbers(report.witness->values);
    w["description"] = report.witness->description;
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["notes"] = report.notes;
  return j;
}

}  // namespace simplexgeo

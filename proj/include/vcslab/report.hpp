#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace vcs {

using Json = nlohmann::ordered_json;

struct CaseResidual {
  std::string label;
  double residual = 0.0;
  double tolerance = 0.0;
};

struct VerificationReport {
  std::string class_id;
  std::string check;
  std::vector<CaseResidual> cases;
  // "pass", "fail" or "undefined"
  std::string verdict = "pass";
  Json metadata = Json::object();

  void add(std::string label, double residual, double tol);
  // verdict = pass iff every residual <= tolerance (NaN counts as failure)
  void finalize();
  void mark_undefined(const std::string& reason);
  double max_residual() const;
  bool passed() const { return verdict == "pass"; }
  Json to_json(bool with_cases = true) const;
};

// Serializes with a fixed float format (17 significant digits) so reports are byte-stable.
std::string dump_json(const Json& j, int indent = 2);
std::string format_double(double v);

}  // namespace vcs

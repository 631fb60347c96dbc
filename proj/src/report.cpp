#include "vcslab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace vcs {

void VerificationReport::add(std::string label, double residual, double tol) {
  cases.push_back({std::move(label), residual, tol});
}

void VerificationReport::finalize() {
  if (verdict == "undefined") return;
  bool ok = true;
  for (const auto& c : cases) ok &= (c.residual <= c.tolerance);
  verdict = ok ? "pass" : "fail";
}

void VerificationReport::mark_undefined(const std::string& reason) {
  verdict = "undefined";
  metadata["undefined_reason"] = reason;
}

double VerificationReport::max_residual() const {
  double m = 0.0;
  for (const auto& c : cases) {
    if (std::isnan(c.residual)) return c.residual;
    m = std::max(m, c.residual);
  }
  return m;
}

Json VerificationReport::to_json(bool with_cases) const {
  Json j;
  j["class"] = class_id;
  j["check"] = check;
  j["verdict"] = verdict;
  j["max_residual"] = max_residual();
  j["cases_count"] = cases.size();
  size_t failing = 0;
  for (const auto& c : cases) failing += !(c.residual <= c.tolerance);
  j["failing_cases"] = failing;
  j["metadata"] = metadata;
  if (with_cases) {
    Json arr = Json::array();
    for (const auto& c : cases) arr.push_back({{"case", c.label}, {"residual", c.residual}, {"tolerance", c.tolerance}});
    j["cases"] = arr;
  }
  return j;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // keep it a JSON float literal
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace {

void dump_rec(const Json& j, int indent, int level, std::string& out) {
  const int w = std::max(indent, 0);  // negative indent: compact
  const std::string pad(static_cast<size_t>(w * (level + 1)), ' ');
  const std::string pad_close(static_cast<size_t>(w * level), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        out += pad;
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_rec(it.value(), indent, level + 1, out);
        if (k + 1 < j.size()) out += ",";
        out += nl;
      }
      out += pad_close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      for (size_t k = 0; k < j.size(); ++k) {
        out += pad;
        dump_rec(j[k], indent, level + 1, out);
        if (k + 1 < j.size()) out += ",";
        out += nl;
      }
      out += pad_close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  out += "\n";
  return out;
}

}  // namespace vcs

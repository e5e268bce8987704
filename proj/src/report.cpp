#include "mw/report.hpp"

#include <cmath>
#include <cstdio>

#include "mw/error.hpp"

namespace mw {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool compare(double v, const std::string& op, double t) {
  if (std::isnan(v)) return false;
  if (op == "<") return v < t;
  if (op == "<=") return v <= t;
  if (op == ">") return v > t;
  if (op == ">=") return v >= t;
  if (op == "==") return v == t;
  if (op == "!=") return v != t;
  throw ArgumentError("unknown comparison '" + op + "'");
}

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

RunReport::RunReport(std::string command, std::string scenario, std::string input_digest)
    : command_(std::move(command)), scenario_(std::move(scenario)), digest_(std::move(input_digest)) {}

void RunReport::add(Check c) {
  if (find(c.name)) throw ValidationError("duplicate check '" + c.name + "' in report");
  checks_.push_back(std::move(c));
}

void RunReport::add(const std::string& name, double value, const std::string& comparison, double tolerance,
                    json detail) {
  add(Check{name, number(value), tolerance, comparison, compare(value, comparison, tolerance), std::move(detail)});
}

void RunReport::add_flag(const std::string& name, bool ok, json detail) {
  add(Check{name, ok, 1.0, "==", ok, std::move(detail)});
}

const Check* RunReport::find(const std::string& name) const {
  for (const Check& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

bool RunReport::passed() const {
  for (const Check& c : checks_)
    if (!c.pass) return false;
  return true;
}

json RunReport::to_json() const {
  json j;
  j["schema"] = 1;
  j["tool"] = "mw";
  j["version"] = MW_VERSION_STRING;
  j["command"] = command_;
  j["scenario"] = scenario_;
  j["input_digest"] = "fnv1a:" + digest_;
  json checks = json::array();
  for (const Check& c : checks_) {
    json e;
    e["name"] = c.name;
    e["value"] = c.value;
    e["comparison"] = c.comparison;
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    if (!c.detail.is_null()) e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["passed"] = passed();
  if (!data_.empty()) j["data"] = data_;
  if (has_timing_) j["timing"] = {{"seconds", timing_}};
  return j;
}

}  // namespace mw

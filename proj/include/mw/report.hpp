#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace mw {

using json = nlohmann::ordered_json;

/// One comparison in a run report.
struct Check {
  std::string name;
  json value;              ///< measured value(s)
  double tolerance = 0.0;
  std::string comparison;  ///< "<", "<=", ">=", "==", ...
  bool pass = false;
  json detail;             ///< optional extra data
};

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

class RunReport {
 public:
  RunReport(std::string command, std::string scenario, std::string input_digest);

  /// Duplicate check names are rejected.
  void add(Check c);
  void add(const std::string& name, double value, const std::string& comparison, double tolerance,
           json detail = nullptr);
  /// Records a boolean outcome.
  void add_flag(const std::string& name, bool ok, json detail = nullptr);

  void set_data(const std::string& key, json value) { data_[key] = std::move(value); }
  void set_timing(double seconds) { timing_ = seconds; has_timing_ = true; }

  bool passed() const;
  const std::vector<Check>& checks() const { return checks_; }
  const Check* find(const std::string& name) const;
  json to_json() const;
  std::string dump(int indent = 2) const { return to_json().dump(indent); }

 private:
  std::string command_, scenario_, digest_;
  std::vector<Check> checks_;
  json data_ = json::object();
  double timing_ = 0.0;
  bool has_timing_ = false;
};

/// Compares value against tolerance with one of < <= > >= == !=.
bool compare(double value, const std::string& comparison, double tolerance);

/// JSON-safe number: non-finite values become strings.
json number(double v);

}  // namespace mw

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mw/analytic.hpp"
#include "mw/domain.hpp"
#include "mw/report.hpp"

namespace mw {

/// key = value lines; '#' starts a comment.  Unknown keys are rejected.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);
  static const std::vector<std::string>& known_keys();

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  void set(const std::string& key, std::string value);
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct Settings {
  double tol = 1e-10;
  int grid = 64;
  double rmax = 8.0;
  int n_rho = 64;
  int n_theta = 128;
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "obj";
  std::optional<std::array<int, 3>> projection;
  bool scan = true;
  int scan_resolution = 256;
  double scan_eps = 1e-3;
  double scan_rmax = 4.0;
  double perturbation = 0.1;
  bool timing = true;
  bool inject_sign_error = false;

  /// Canonical text of every setting that affects results.
  std::string canonical() const;
};

Settings settings_from_config(const Config& c, Settings base = {});

struct Scenario {
  std::string name;
  Domain domain = Domain::punctured_plane();
  OneForm theta = standard_theta();
  std::shared_ptr<const NullMap> f;
  std::optional<Expr> gauss;
  cplx basepoint = 1.0;
  RVec base_value;
  std::optional<std::function<double(double)>> radial_bound;
  std::string bound_label;
  std::optional<bool> expect_embedded;
  std::optional<double> expected_curvature;

  int dim() const { return f->dim(); }
  std::string canonical() const;
  json describe() const;
};

const std::vector<std::string>& gallery_names();
/// meeks-r3 or mobius-r4.  The negative control replaces f_2 by i f_1, the
/// result of flipping the sign of the g f_3 term of the lift.
Scenario gallery(const std::string& name, bool inject_sign_error = false);
/// Gallery entry named by `example`, or custom data from components or
/// gauss/height.
Scenario scenario_from_config(const Config& c, bool inject_sign_error = false);

RunReport cmd_gallery(const Scenario& s, const Settings& st);
RunReport cmd_verify(const Scenario& s, const Settings& st);
RunReport cmd_periods(const Scenario& s, const Settings& st);
/// Closure log lines (one JSON object per iteration) go to `log` if given.
RunReport cmd_close(const Scenario& s, const Settings& st, std::ostream* log = nullptr);
RunReport cmd_mesh(const Scenario& s, const Settings& st);
RunReport cmd_curvature(const Scenario& s, const Settings& st);

/// <name>-<n_rho>x<n_theta>.<format>
std::string default_mesh_path(const Scenario& s, const Settings& st);

}  // namespace mw

// mw: command-line front end over the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mw/mw.h"

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kError = 3 };

struct Options {
  std::string example;
  std::string config;
  std::string output;
  std::string log;
  std::string format;
  std::string resolution;
  std::string projection;
  double tol = 0, rmax = 0, eps = 0;
  int grid = 0;
  long long seed = -1;
  bool no_timing = false;
  bool inject = false;
  bool no_scan = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

int fail(const char* what) {
  std::cerr << "mw: " << what << ": " << mw_last_error() << "\n";
  return kError;
}

mw_scenario* load(const Options& o, bool mesh_output, int& code) {
  std::vector<std::pair<std::string, std::string>> kv;
  if (!o.example.empty()) kv.emplace_back("example", o.example);
  if (o.tol > 0) kv.emplace_back("tol", fmt(o.tol));
  if (o.grid > 0) kv.emplace_back("grid", std::to_string(o.grid));
  if (o.rmax > 0) kv.emplace_back("rmax", fmt(o.rmax));
  if (!o.resolution.empty()) kv.emplace_back("resolution", o.resolution);
  if (o.seed >= 0) kv.emplace_back("seed", std::to_string(o.seed));
  if (mesh_output && !o.output.empty()) kv.emplace_back("output", o.output);
  if (!o.format.empty()) kv.emplace_back("format", o.format);
  if (!o.projection.empty()) kv.emplace_back("projection", o.projection);
  if (o.eps > 0) kv.emplace_back("scan_eps", fmt(o.eps));
  if (o.no_scan) kv.emplace_back("scan", "false");
  if (o.no_timing) kv.emplace_back("timing", "false");
  if (o.inject) kv.emplace_back("inject_sign_error", "true");

  std::string text;
  if (!o.config.empty()) {
    try {
      text = read_file(o.config);
    } catch (const std::exception& e) {
      std::cerr << "mw: " << e.what() << "\n";
      code = kUsage;
      return nullptr;
    }
  } else if (o.example.empty()) {
    std::cerr << "mw: give an example name or --config\n";
    code = kUsage;
    return nullptr;
  }
  std::vector<const char*> keys, values;
  for (const auto& [k, v] : kv) {
    keys.push_back(k.c_str());
    values.push_back(v.c_str());
  }
  mw_scenario* s = nullptr;
  const mw_status st = mw_scenario_from_config(text.c_str(), keys.data(), values.data(), kv.size(), &s);
  if (st != MW_OK) {
    std::cerr << "mw: " << mw_last_error() << "\n";
    code = (st == MW_E_CONFIG || st == MW_E_PARSE || st == MW_E_ARGUMENT) ? kUsage : kError;
    return nullptr;
  }
  return s;
}

int emit(mw_report* r, const std::string& output) {
  const char* json = mw_report_json(r, 2);
  if (output.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    out << json << "\n";
    if (!out) {
      std::cerr << "mw: cannot write report to " << output << "\n";
      mw_report_free(r);
      return kError;
    }
  }
  const int code = mw_report_passed(r) ? kPass : kFail;
  mw_report_free(r);
  return code;
}

void log_line(const char* line, void* user) {
  auto* out = static_cast<std::ostream*>(user);
  *out << line << "\n";
  out->flush();
}

void add_common(CLI::App* sub, Options& o, bool positional = true) {
  if (positional) sub->add_option("example", o.example, "Gallery example (meeks-r3, mobius-r4)");
  sub->add_option("--config", o.config, "key = value configuration file");
  sub->add_option("--tol", o.tol, "Quadrature tolerance");
  sub->add_option("--grid", o.grid, "Verification grid size (even)");
  sub->add_option("--seed", o.seed, "Seed for randomized checks");
  sub->add_option("--output", o.output, "Write the JSON report (mesh: the mesh file) here");
  sub->add_flag("--no-timing", o.no_timing, "Omit wall-clock timing from the report");
  sub->add_flag("--inject-sign-error", o.inject, "Negative control: corrupt f2");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Involution-invariant minimal surfaces via the Weierstrass representation"};
  app.set_version_flag("--version", std::string(mw_version()));
  app.require_subcommand(1);
  Options o;

  auto* gallery = app.add_subcommand("gallery", "List gallery examples or describe one");
  gallery->add_option("example", o.example, "Example name");
  gallery->add_flag("--no-timing", o.no_timing, "Accepted for symmetry; gallery reports carry no timing");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  add_common(verify, o);
  verify->add_option("--eps", o.eps, "Double-point match radius");
  verify->add_flag("--no-scan", o.no_scan, "Skip the double-point scan");

  auto* periods = app.add_subcommand("periods", "Period and flux table");
  add_common(periods, o);

  auto* close = app.add_subcommand("close-periods", "Perturb, then close the periods with a spray");
  add_common(close, o);
  close->add_option("--log", o.log, "Closure log file (JSON lines; default stderr)");

  auto* mesh = app.add_subcommand("mesh", "Export the quotient mesh");
  add_common(mesh, o);
  mesh->add_option("--resolution", o.resolution, "NRHOxNTHETA, default 64x128");
  mesh->add_option("--rmax", o.rmax, "Outer radius of the fundamental domain");
  mesh->add_option("--format", o.format, "obj or ply")->check(CLI::IsMember({"obj", "ply"}));
  mesh->add_option("--projection", o.projection, "Three 0-based coordinates, e.g. 1,2,3");

  auto* curvature = app.add_subcommand("curvature", "Total curvature of the fundamental domain");
  add_common(curvature, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  if (gallery->parsed()) {
    if (o.example.empty()) {
      for (size_t k = 0; const char* n = mw_gallery_name(k); ++k) std::cout << n << "\n";
      return kPass;
    }
    mw_scenario* s = nullptr;
    if (mw_scenario_from_gallery(o.example.c_str(), &s) != MW_OK) {
      std::cerr << "mw: " << mw_last_error() << "\n";
      return kUsage;
    }
    mw_report* r = nullptr;
    const mw_status st = mw_gallery_describe(s, &r);
    mw_scenario_free(s);
    if (st != MW_OK) return fail("gallery");
    return emit(r, "");
  }

  const bool is_mesh = mesh->parsed();
  int code = kPass;
  mw_scenario* s = load(o, is_mesh, code);
  if (!s) return code;

  mw_report* r = nullptr;
  mw_status st = MW_OK;
  const char* what = "";
  if (verify->parsed()) {
    what = "verify";
    st = mw_verify(s, &r);
  } else if (periods->parsed()) {
    what = "periods";
    st = mw_periods(s, &r);
  } else if (close->parsed()) {
    what = "close-periods";
    std::ofstream file;
    std::ostream* sink = &std::cerr;
    if (!o.log.empty()) {
      file.open(o.log, std::ios::trunc);
      if (!file) {
        std::cerr << "mw: cannot open log " << o.log << "\n";
        mw_scenario_free(s);
        return kError;
      }
      sink = &file;
    }
    st = mw_close_periods(s, log_line, sink, &r);
  } else if (is_mesh) {
    what = "mesh";
    st = mw_mesh_export(s, &r);
  } else if (curvature->parsed()) {
    what = "curvature";
    st = mw_curvature(s, &r);
  }
  mw_scenario_free(s);
  if (st != MW_OK) return fail(what);
  return emit(r, is_mesh ? "" : o.output);
}

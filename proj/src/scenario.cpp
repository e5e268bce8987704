#include "mw/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "mw/error.hpp"
#include "mw/immersion.hpp"
#include "mw/mesh.hpp"
#include "mw/periods.hpp"
#include "mw/sprays.hpp"

namespace mw {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + v + "'");
}

cplx constant_of(const std::string& key, const std::string& text) {
  Expr e;
  try {
    e = parse_expr(text);
  } catch (const ParseError& err) {
    throw ConfigError("'" + key + "': " + err.what());
  }
  if (!e.is_constant()) throw ConfigError("'" + key + "' must be a constant, got '" + text + "'");
  return e(1.0);
}

Expr expr_of(const std::string& key, const std::string& text) {
  try {
    return parse_expr(text);
  } catch (const ParseError& err) {
    throw ConfigError("'" + key + "': " + err.what());
  }
}

json cplx_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

json rvec_json(const RVec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(number(v[k]));
  return a;
}

json cvec_json(const CVec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(cplx_json(v[k]));
  return a;
}

std::string digest(const std::string& command, const Scenario& s, const Settings& st) {
  return fnv1a_hex(command + "\n" + s.canonical() + "\n" + st.canonical());
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish(RunReport& r, const Settings& st, const Stopwatch& w) {
  if (st.timing) r.set_timing(w.seconds());
}

Expr form_expr(const Expr& fj, const OneForm& theta) { return fj * theta.coefficient; }

}  // namespace

// ---------------------------------------------------------------- config

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys = {
      "example",   "name",       "components", "gauss",        "height",          "theta",
      "domain",    "basepoint",  "base_value", "tol",          "grid",            "rmax",
      "resolution", "seed",      "output",     "format",       "projection",      "scan",
      "scan_resolution", "scan_eps", "scan_rmax", "perturbation", "timing",      "inject_sign_error"};
  return keys;
}

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (c.has(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    c.set(key, trim(line.substr(eq + 1)));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const std::string& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

void Config::set(const std::string& key, std::string value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    std::string list;
    for (const auto& k : keys) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("unknown key '" + key + "' (known: " + list + ")");
  }
  values_[key] = std::move(value);
}

std::string Settings::canonical() const {
  std::ostringstream os;
  os << std::setprecision(17) << "tol=" << tol << ";grid=" << grid << ";rmax=" << rmax << ";resolution=" << n_rho
     << "x" << n_theta << ";seed=" << seed << ";format=" << format << ";scan=" << scan
     << ";scan_resolution=" << scan_resolution << ";scan_eps=" << scan_eps << ";scan_rmax=" << scan_rmax
     << ";perturbation=" << perturbation << ";inject_sign_error=" << inject_sign_error;
  if (projection) os << ";projection=" << (*projection)[0] << "," << (*projection)[1] << "," << (*projection)[2];
  return os.str();
}

Settings settings_from_config(const Config& c, Settings s) {
  for (const auto& [key, v] : c.values()) {
    if (key == "tol") {
      s.tol = to_double(key, v);
      if (!(s.tol > 0)) throw ConfigError("'tol' must be positive");
    } else if (key == "grid") {
      s.grid = static_cast<int>(to_int(key, v));
      if (s.grid < 4 || s.grid % 2) throw ConfigError("'grid' must be an even integer >= 4");
    } else if (key == "rmax") {
      s.rmax = to_double(key, v);
      if (!(s.rmax > 1)) throw ConfigError("'rmax' must exceed 1");
    } else if (key == "resolution") {
      const auto x = v.find('x');
      if (x == std::string::npos) throw ConfigError("'resolution' expects NRHOxNTHETA, got '" + v + "'");
      s.n_rho = static_cast<int>(to_int(key, trim(v.substr(0, x))));
      s.n_theta = static_cast<int>(to_int(key, trim(v.substr(x + 1))));
      if (s.n_rho < 8 || s.n_theta < 8 || s.n_theta % 2)
        throw ConfigError("'resolution' must be at least 8x8 with an even angular count");
    } else if (key == "seed") {
      s.seed = static_cast<std::uint64_t>(to_int(key, v));
    } else if (key == "output") {
      s.output = v;
    } else if (key == "format") {
      if (v != "obj" && v != "ply") throw ConfigError("'format' must be obj or ply");
      s.format = v;
    } else if (key == "projection") {
      const auto parts = split(v, ',');
      if (parts.size() != 3) throw ConfigError("'projection' expects three coordinate indices");
      std::array<int, 3> p{};
      for (int k = 0; k < 3; ++k) p[k] = static_cast<int>(to_int(key, parts[k]));
      s.projection = p;
    } else if (key == "scan") {
      s.scan = to_bool(key, v);
    } else if (key == "scan_resolution") {
      s.scan_resolution = static_cast<int>(to_int(key, v));
      if (s.scan_resolution < 8) throw ConfigError("'scan_resolution' must be at least 8");
    } else if (key == "scan_eps") {
      s.scan_eps = to_double(key, v);
    } else if (key == "scan_rmax") {
      s.scan_rmax = to_double(key, v);
      if (!(s.scan_rmax > 1)) throw ConfigError("'scan_rmax' must exceed 1");
    } else if (key == "perturbation") {
      s.perturbation = to_double(key, v);
    } else if (key == "timing") {
      s.timing = to_bool(key, v);
    } else if (key == "inject_sign_error") {
      s.inject_sign_error = to_bool(key, v);
    }
  }
  return s;
}

// ---------------------------------------------------------------- scenarios

std::string Scenario::canonical() const {
  std::ostringstream os;
  os << std::setprecision(17) << "name=" << name << ";domain=" << domain.describe() << ";theta="
     << theta.coefficient.str() << ";basepoint=" << basepoint.real() << "," << basepoint.imag() << ";f=";
  for (const Expr& e : f->components()) os << e.str() << "|";
  os << ";x0=";
  for (Eigen::Index k = 0; k < base_value.size(); ++k) os << base_value[k] << ",";
  return os.str();
}

json Scenario::describe() const {
  json j;
  j["name"] = name;
  j["dimension"] = dim();
  j["domain"] = domain.describe();
  j["theta"] = theta.coefficient.str();
  json comps = json::array();
  for (const Expr& e : f->components()) comps.push_back(e.str());
  j["components"] = comps;
  if (gauss) j["gauss"] = gauss->str();
  j["basepoint"] = cplx_json(basepoint);
  j["base_value"] = rvec_json(base_value);
  if (radial_bound) j["radial_bound"] = bound_label;
  if (expect_embedded) j["expect_embedded"] = *expect_embedded;
  if (expected_curvature) j["expected_total_curvature"] = *expected_curvature;
  return j;
}

const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names = {"meeks-r3", "mobius-r4"};
  return names;
}

namespace {

std::shared_ptr<const NullMap> with_sign_error(const NullMap& f, bool inject) {
  if (!inject) return std::make_shared<NullMap>(f);
  // Flipping the sign of g f3 inside f2 of the Weierstrass lift turns f2 into i f1.
  std::vector<Expr> c = f.components();
  c[1] = kI * c[0];
  return std::make_shared<NullMap>(std::move(c));
}

}  // namespace

Scenario gallery(const std::string& name, bool inject_sign_error) {
  Scenario s;
  s.name = name;
  if (name == "meeks-r3") {
    const Expr g = parse_expr("z^2*(z+1)/(z-1)");
    const Expr f3 = parse_expr("2*(z^2-1)/z");
    s.f = with_sign_error(weierstrass_lift(g, f3), inject_sign_error);
    s.gauss = g;
    s.basepoint = kI;
    s.base_value = RVec::Zero(3);
    s.expect_embedded = false;
    s.expected_curvature = -6.0 * kPi;
    return s;
  }
  if (name == "mobius-r4") {
    const NullMap f({parse_expr("(z^2-1)/z"), parse_expr("-i*(z^2+1)/z"), parse_expr("(z^4+1)/z^2"),
                     parse_expr("-i*(z^4-1)/z^2")});
    s.f = with_sign_error(f, inject_sign_error);
    s.basepoint = 1.0;
    s.base_value = RVec::Zero(4);
    s.base_value[3] = 1.0;
    s.radial_bound = [](double rho) { return std::abs(rho - 1.0 / rho); };
    s.bound_label = "|rho - 1/rho|";
    s.expect_embedded = true;
    return s;
  }
  std::string list;
  for (const auto& n : gallery_names()) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError("unknown example '" + name + "' (available: " + list + ")");
}

Scenario scenario_from_config(const Config& c, bool inject_sign_error) {
  if (c.has("example")) {
    for (const char* k : {"components", "gauss", "height"})
      if (c.has(k)) throw ConfigError(std::string("'example' cannot be combined with '") + k + "'");
    Scenario g = gallery(c.get("example"), inject_sign_error);
    if (c.has("name")) g.name = c.get("name");
    return g;
  }
  Scenario s;
  s.name = c.get_or("name", "custom");
  const std::string dom = c.get_or("domain", "punctured-plane");
  const cplx bp = c.has("basepoint") ? constant_of("basepoint", c.get("basepoint")) : cplx(1.0);
  if (dom == "punctured-plane") {
    s.domain = Domain::punctured_plane(bp);
  } else if (dom.rfind("annulus:", 0) == 0) {
    s.domain = Domain::annulus(to_double("domain", dom.substr(8)), bp);
  } else if (dom.rfind("pairs:", 0) == 0) {
    std::vector<cplx> q;
    for (const auto& part : split(dom.substr(6), ',')) q.push_back(constant_of("domain", part));
    s.domain = Domain::with_pairs(q, bp);
  } else {
    throw ConfigError("'domain' must be punctured-plane, annulus:R or pairs:Q1,Q2,...");
  }
  s.basepoint = bp;
  if (c.has("theta")) s.theta = OneForm{expr_of("theta", c.get("theta"))};

  if (c.has("components")) {
    if (c.has("gauss") || c.has("height")) throw ConfigError("give either 'components' or 'gauss' and 'height'");
    std::vector<Expr> comps;
    for (const auto& part : split(c.get("components"), ';')) comps.push_back(expr_of("components", part));
    if (comps.size() < 3) throw ConfigError("'components' needs at least three expressions separated by ';'");
    s.f = with_sign_error(NullMap(std::move(comps)), inject_sign_error);
    if (s.f->dim() == 3) {
      try {
        s.gauss = gauss_from_nullmap(*s.f);
      } catch (const ValidationError&) {
      }
    }
  } else if (c.has("gauss") && c.has("height")) {
    const Expr g = expr_of("gauss", c.get("gauss"));
    const Expr h = expr_of("height", c.get("height"));
    s.f = with_sign_error(weierstrass_lift(g, h), inject_sign_error);
    s.gauss = g;
  } else {
    throw ConfigError("config needs 'example', 'components', or both 'gauss' and 'height'");
  }

  if (c.has("base_value")) {
    const auto parts = split(c.get("base_value"), ',');
    if (static_cast<int>(parts.size()) != s.f->dim())
      throw ConfigError("'base_value' needs " + std::to_string(s.f->dim()) + " entries");
    s.base_value = RVec(s.f->dim());
    for (std::size_t k = 0; k < parts.size(); ++k) s.base_value[k] = to_double("base_value", parts[k]);
  } else {
    s.base_value = RVec::Zero(s.f->dim());
  }
  if (!s.domain.contains(s.basepoint)) throw ConfigError("'basepoint' lies outside the domain");
  return s;
}

// ---------------------------------------------------------------- commands

std::string default_mesh_path(const Scenario& s, const Settings& st) {
  return s.name + "-" + std::to_string(st.n_rho) + "x" + std::to_string(st.n_theta) + "." + st.format;
}

RunReport cmd_gallery(const Scenario& s, const Settings& st) {
  RunReport r("gallery", s.name, digest("gallery", s, st));
  r.set_data("scenario", s.describe());
  return r;
}

RunReport cmd_periods(const Scenario& s, const Settings& st) {
  Stopwatch w;
  RunReport r("periods", s.name, digest("periods", s, st));
  const IBasis basis = build_ibasis(s.domain);
  const PeriodVector p = period_map(*s.f, s.theta, basis, st.tol);
  json table = json::array();
  for (std::size_t j = 0; j < p.size(); ++j) {
    json row;
    row["curve"] = basis.plus[j].label();
    row["period"] = cvec_json(p.entries[j]);
    row["flux"] = rvec_json(p.entries[j].imag());
    row["error"] = number(p.errors[j]);
    table.push_back(std::move(row));
  }
  r.set_data("periods", std::move(table));
  r.add("period_max_abs", p.max_abs(), "<", 1e-9);
  r.add("period_real_max", p.max_real(), "<", 1e-9);
  r.add("flux_max", p.max_imag(), "<", 1e-9);
  finish(r, st, w);
  return r;
}

namespace {

void add_immersion_checks(RunReport& r, const Scenario& s, const Settings& st, const Grid& grid) {
  std::optional<ImmersionField> field;
  try {
    field.emplace(integrate_immersion(s.domain, s.f, s.theta, s.basepoint, s.base_value, st.tol));
  } catch (const Error& e) {
    r.add_flag("immersion_constructed", false, e.what());
  }
  if (!field) return;
  r.add_flag("immersion_constructed", true);
  const ImmersionField& x = *field;

  // Immersion-level invariance on the verification grid.
  std::vector<cplx> images(grid.points.size());
  std::transform(grid.points.begin(), grid.points.end(), images.begin(), involution);
  const std::vector<RVec> a = x.sample(grid.points), b = x.sample(images);
  double inv = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) inv = std::max(inv, (a[k] - b[k]).norm() / std::max(1.0, a[k].norm()));
  r.add("invariance_immersion", inv, "<", 1e-10);

  const Grid local = Grid::log_polar(8, 8, 0.25, 4.0).excluding(s.domain);
  const GeometricResiduals g = geometric_residuals(x, local.points);
  r.add("conformal_residual", g.conformal, "<", 1e-6);
  r.add("harmonic_residual", g.harmonic, "<", 1e-6);
  r.add("derivative_residual", g.derivative, "<", 1e-6);

  std::mt19937_64 rng(st.seed);
  std::uniform_real_distribution<double> lr(std::log(0.2), std::log(5.0)), ang(-kPi, kPi);
  double path = 0.0;
  for (int k = 0; k < 8; ++k) {
    cplx p;
    do p = std::polar(std::exp(lr(rng)), ang(rng));
    while (!s.domain.contains(p));
    const RVec u = x.eval_along(p, true), v = x.eval_along(p, false);
    path = std::max(path, (u - v).norm() / std::max(1.0, u.norm()));
  }
  r.add("path_independence", path, "<", 1e-8);

  if (s.radial_bound) {
    const Grid pg = Grid::log_polar(128, 64, 0.05, 20.0).excluding(s.domain);
    const ProperCertificate cert = properness_certificate(x, pg.points, s.radial_bound);
    r.add("properness_margin", cert.margin, ">=", -1e-9, json{{"bound", s.bound_label}});
  }

  if (s.expect_embedded && st.scan) {
    ScanOptions so;
    so.n_rho = so.n_theta = st.scan_resolution;
    so.eps = st.scan_eps;
    so.rho_max = st.scan_rmax;
    const std::vector<DoublePoint> dps = double_point_scan(x, so);
    json list = json::array();
    for (const DoublePoint& d : dps)
      list.push_back({{"p", cplx_json(d.p)}, {"q", cplx_json(d.q)}, {"distance", number(d.distance)}});
    const double count = static_cast<double>(dps.size());
    if (*s.expect_embedded)
      r.add("double_points", count, "==", 0.0, list);
    else
      r.add("double_points", count, ">=", 1.0, list);
  }
}

}  // namespace

RunReport cmd_verify(const Scenario& s, const Settings& st) {
  Stopwatch w;
  RunReport r("verify", s.name, digest("verify", s, st));
  const Grid grid = Grid::verification(s.domain, st.grid);
  const IBasis basis = build_ibasis(s.domain);

  r.add("null_residual", null_residual(*s.f, grid).relative, "<", 1e-10);
  r.add("invariance_map", invariance_residual(*s.f, grid).relative, "<", 1e-10);
  double form = form_invariance_residual(s.theta, grid).relative;
  for (const Expr& fj : s.f->components())
    form = std::max(form, form_invariance_residual(OneForm{form_expr(fj, s.theta)}, grid).relative);
  r.add("invariance_form", form, "<", 1e-10);
  if (s.dim() == 3 && s.gauss) r.add("gauss_symmetry", gauss_symmetry_residual(*s.gauss, grid).relative, "<", 1e-10);
  r.add("min_modulus", min_modulus(*s.f, grid), ">", 1e-8);

  const PeriodVector p = period_map(*s.f, s.theta, basis, st.tol);
  r.add("period_max_abs", p.max_abs(), "<", 1e-9);
  r.add("period_real_max", p.max_real(), "<", 1e-9);
  r.add("flux_max", p.max_imag(), "<", 1e-9);
  r.add("im_p1", p.entries.front().imag().cwiseAbs().maxCoeff(), "<", 1e-9);

  double sym = 0.0;
  const Coefficient th = form_coefficient(s.theta);
  const Coefficient ft = form_coefficient(*s.f, s.theta);
  for (const Curve& c : {Curve::circle(0.0, 1.0, "alpha0"), Curve::circle(0.0, 2.0, "radius-2")}) {
    sym = std::max(sym, symmetry_defect(th, 1, c, st.tol));
    sym = std::max(sym, symmetry_defect(ft, s.dim(), c, st.tol));
  }
  r.add("symmetry_defect", sym, "<", 1e-9);

  const NonflatReport nf = nonflat_check(*s.f, grid.points);
  r.add_flag("nonflat", nf.nonflat, json{{"sigma1", number(nf.first_singular_value)},
                                         {"sigma2", number(nf.second_singular_value)}});

  // Invariant components without zeros on the unit circle wind 0 around it.
  const Curve alpha0 = Curve::circle(0.0, 1.0, "alpha0");
  json windings = json::object();
  bool winding_ok = true;
  for (std::size_t j = 0; j < s.f->components().size(); ++j) {
    const Expr& fj = (*s.f)[j];
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k < 2048; ++k) {
      const double m = std::abs(fj.eval_fast(alpha0(k / 2048.0)));
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    if (!(lo > 1e-6 * hi)) continue;
    const int wn = winding_number(fj, alpha0);
    windings["f" + std::to_string(j + 1)] = wn;
    winding_ok = winding_ok && wn == 0;
  }
  r.add_flag("winding_alpha0", winding_ok, windings);

  if (p.max_real() < 1e-9) {
    add_immersion_checks(r, s, st, grid);
  } else {
    r.add_flag("immersion_constructed", false, "real periods do not vanish");
  }
  finish(r, st, w);
  return r;
}

RunReport cmd_close(const Scenario& s, const Settings& st, std::ostream* log) {
  Stopwatch w;
  RunReport r("close-periods", s.name, digest("close-periods", s, st));
  const IBasis basis = build_ibasis(s.domain);
  if (s.dim() < 3) throw ConfigError("period closing needs at least three components");

  // Perturbation: the (1,2)-rotation by perturbation * Pi_I(z), an invariant null map with broken periods.
  const Expr bump = symmetrize(Expr::z());
  const double eps = st.perturbation;
  const auto f = s.f;
  auto perturbed = std::make_shared<FunctionMap>(
      s.dim(), [f, bump, eps](cplx z) { return flow(0, 1, eps * bump.eval_fast(z), (*f)(z)); });

  std::vector<SprayFactor> factors;
  for (int j = 0; j < 3; ++j) {
    const int k = (j + 1) % s.dim();
    factors.push_back({j, k, laurent_mode(1, 0.0)});
    factors.push_back({j, k, laurent_mode(2, 0.0)});
  }
  const Spray spray(perturbed, factors);
  const PeriodVector before = period_map(*perturbed, s.theta, basis, 1e-12);
  r.add("perturbation_effective", before.max_real(), ">", 1e-6);

  const RVec target = RVec::Zero(stack_periods(before).size());
  ClosureOptions opts;
  opts.tol = 1e-8;
  json history = json::array();
  auto on_step = [&](const ClosureStep& c) {
    json line{{"iter", c.iter}, {"residual", number(c.residual)}, {"step", number(c.step)}};
    history.push_back(line);
    if (log) *log << line.dump() << "\n" << std::flush;
  };
  try {
    const ClosureResult res = close_periods(spray, s.theta, basis, target, opts, on_step);
    r.add("closure_residual", res.residual, "<", 1e-8);
    r.add("closure_iterations", static_cast<double>(res.log.size()), "<=", 20.0);
    r.set_data("parameters", rvec_json(res.parameters));

    const auto closed = spray.at(res.parameters);
    const Grid grid = Grid::verification(s.domain, st.grid);
    r.add("closed_null_residual", null_residual(*closed, grid).relative, "<", 1e-10);
    r.add("closed_invariance_map", invariance_residual(*closed, grid).relative, "<", 1e-10);
    const PeriodVector after = period_map(*closed, s.theta, basis, 1e-12);
    r.add("closed_period_real_max", after.max_real(), "<", 1e-8);
    try {
      const ImmersionField x = integrate_immersion(s.domain, closed, s.theta, s.basepoint, s.base_value, 1e-11);
      const Grid g = Grid::log_polar(16, 16, 0.2, 5.0).excluding(s.domain);
      const GeometricResiduals gr = geometric_residuals(x, g.points);
      r.add("closed_invariance_immersion", gr.invariance, "<", 1e-8);
      r.add("closed_conformal_residual", gr.conformal, "<", 1e-6);
      r.add("closed_harmonic_residual", gr.harmonic, "<", 1e-6);
    } catch (const Error& e) {
      r.add_flag("closed_immersion_constructed", false, e.what());
    }
  } catch (const IterationError& e) {
    r.add_flag("closure_converged", false, json{{"error", e.what()}, {"history", e.residual_history}});
  } catch (const DominationLostError& e) {
    r.add_flag("closure_converged", false, json{{"error", e.what()}, {"history", e.residual_history}});
  } catch (const PreconditionError& e) {
    r.add_flag("closure_converged", false, json{{"error", e.what()}});
  }
  r.set_data("log", std::move(history));
  finish(r, st, w);
  return r;
}

RunReport cmd_mesh(const Scenario& s, const Settings& st) {
  Stopwatch w;
  RunReport r("mesh", s.name, digest("mesh", s, st));
  const ImmersionField x = integrate_immersion(s.domain, s.f, s.theta, s.basepoint, s.base_value, st.tol);
  const FundamentalDomain region = fundamental_domain(s.domain, st.rmax);
  const auto projection = st.projection ? *st.projection : default_projection(s.dim());
  const QuotientMesh m = triangulate_and_weld(region, x, st.n_rho, st.n_theta, projection);
  const std::string path = st.output.empty() ? default_mesh_path(s, st) : st.output;
  if (st.format == "ply")
    export_ply(m, path);
  else
    export_obj(m, path);
  const MeshTopology top = analyze_topology(m);
  r.set_data("mesh", json{{"path", path},
                          {"format", st.format},
                          {"vertices", top.vertices},
                          {"edges", top.edges},
                          {"faces", top.faces},
                          {"projection", projection}});
  r.add("seam_discrepancy", m.seam_discrepancy, "<", 1e-8);
  r.add_flag("edge_manifold", top.edge_manifold);
  if (s.domain.punctures().empty()) r.add("euler_characteristic", top.euler, "==", 0.0);
  r.add_flag("non_orientable", !top.orientable, json{{"parity_conflicts", top.parity_conflicts}});
  finish(r, st, w);
  return r;
}

RunReport cmd_curvature(const Scenario& s, const Settings& st) {
  Stopwatch w;
  RunReport r("curvature", s.name, digest("curvature", s, st));
  if (!s.gauss) throw ConfigError("total curvature needs three-dimensional data with a Gauss map");
  const CurvatureReport c = total_curvature(*s.gauss, 1.0, st.tol);
  r.set_data("curvature", json{{"value", number(c.value)},
                               {"error", number(c.error)},
                               {"radii", c.radii},
                               {"truncated", c.truncated},
                               {"extrapolated", number(c.extrapolated)}});
  if (s.expected_curvature) {
    r.add("total_curvature_relative_error", std::abs(c.value - *s.expected_curvature) / std::abs(*s.expected_curvature),
          "<", 0.01, json{{"expected", *s.expected_curvature}});
  }
  r.add("richardson_consistency", std::abs(c.value - c.extrapolated) / std::max(1.0, std::abs(c.value)), "<", 0.01);
  finish(r, st, w);
  return r;
}

}  // namespace mw

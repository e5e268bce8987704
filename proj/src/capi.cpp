#include "mw/mw.h"

#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>

#include "mw/error.hpp"
#include "mw/immersion.hpp"
#include "mw/scenario.hpp"

struct mw_scenario {
  mw::Config config;
  mw::Scenario scenario;
  mw::Settings settings;
  std::mutex field_mutex;
  std::optional<mw::ImmersionField> field;
};

struct mw_report {
  mw::RunReport report;
  std::string text;
};

struct mw_expr {
  mw::Expr expr;
  std::string text;
};

namespace {

thread_local std::string last_error;

template <class Fn>
mw_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return MW_OK;
  } catch (const mw::Error& e) {
    last_error = e.what();
    return static_cast<mw_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MW_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MW_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw mw::ArgumentError(what);
}

mw::Config gallery_config(const char* name) {
  mw::Config c;
  c.set("example", name);
  return c;
}

std::unique_ptr<mw_scenario> build(mw::Config c) {
  auto s = std::make_unique<mw_scenario>();
  s->settings = mw::settings_from_config(c);
  s->scenario = mw::scenario_from_config(c, s->settings.inject_sign_error);
  s->config = std::move(c);
  return s;
}

template <class Cmd>
mw_status run(const mw_scenario* s, mw_report** out, Cmd&& cmd) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = new mw_report{cmd(s->scenario, s->settings), {}};
  });
}

}  // namespace

extern "C" {

const char* mw_version(void) { return MW_VERSION_STRING; }
const char* mw_last_error(void) { return last_error.c_str(); }

const char* mw_gallery_name(size_t index) {
  const auto& names = mw::gallery_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

mw_status mw_scenario_from_gallery(const char* name, mw_scenario** out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = build(gallery_config(name)).release();
  });
}

mw_status mw_scenario_from_config(const char* text, const char* const* keys, const char* const* values,
                                  size_t n_overrides, mw_scenario** out) {
  return guarded([&] {
    require(text && out, "null argument");
    require(n_overrides == 0 || (keys && values), "null override arrays");
    mw::Config c = mw::Config::parse(text);
    for (size_t k = 0; k < n_overrides; ++k) {
      require(keys[k] && values[k], "null override entry");
      c.set(keys[k], values[k]);
    }
    *out = build(std::move(c)).release();
  });
}

mw_status mw_scenario_set(mw_scenario* s, const char* key, const char* value) {
  return guarded([&] {
    require(s && key && value, "null argument");
    mw::Config c = s->config;
    c.set(key, value);
    auto fresh = build(std::move(c));
    std::lock_guard<std::mutex> lock(s->field_mutex);
    s->config = std::move(fresh->config);
    s->scenario = std::move(fresh->scenario);
    s->settings = fresh->settings;
    s->field.reset();
  });
}

void mw_scenario_free(mw_scenario* s) { delete s; }

int mw_scenario_dim(const mw_scenario* s) { return s ? s->scenario.dim() : 0; }
const char* mw_scenario_name(const mw_scenario* s) { return s ? s->scenario.name.c_str() : ""; }

mw_status mw_scenario_eval_map(const mw_scenario* s, double re, double im, double* out) {
  return guarded([&] {
    require(s && out, "null argument");
    if (!s->scenario.domain.contains(mw::cplx(re, im))) throw mw::DomainError("point outside the domain");
    const mw::CVec v = (*s->scenario.f)(mw::cplx(re, im));
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      out[2 * k] = v[k].real();
      out[2 * k + 1] = v[k].imag();
    }
  });
}

mw_status mw_scenario_eval_immersion(mw_scenario* s, double re, double im, double* out) {
  return guarded([&] {
    require(s && out, "null argument");
    std::lock_guard<std::mutex> lock(s->field_mutex);
    if (!s->field) {
      const mw::Scenario& sc = s->scenario;
      s->field.emplace(mw::integrate_immersion(sc.domain, sc.f, sc.theta, sc.basepoint, sc.base_value,
                                               s->settings.tol));
    }
    if (!s->scenario.domain.contains(mw::cplx(re, im))) throw mw::DomainError("point outside the domain");
    const mw::RVec x = (*s->field)(mw::cplx(re, im));
    for (Eigen::Index k = 0; k < x.size(); ++k) out[k] = x[k];
  });
}

mw_status mw_gallery_describe(const mw_scenario* s, mw_report** out) { return run(s, out, mw::cmd_gallery); }
mw_status mw_verify(const mw_scenario* s, mw_report** out) { return run(s, out, mw::cmd_verify); }
mw_status mw_periods(const mw_scenario* s, mw_report** out) { return run(s, out, mw::cmd_periods); }
mw_status mw_mesh_export(const mw_scenario* s, mw_report** out) { return run(s, out, mw::cmd_mesh); }
mw_status mw_curvature(const mw_scenario* s, mw_report** out) { return run(s, out, mw::cmd_curvature); }

mw_status mw_close_periods(const mw_scenario* s, mw_log_fn log, void* user, mw_report** out) {
  return run(s, out, [&](const mw::Scenario& sc, const mw::Settings& st) {
    if (!log) return mw::cmd_close(sc, st, nullptr);
    // Forward each completed line to the callback.
    struct LineBuf : std::stringbuf {
      mw_log_fn fn;
      void* user;
      int sync() override {
        std::string s = str();
        std::size_t pos;
        while ((pos = s.find('\n')) != std::string::npos) {
          fn(s.substr(0, pos).c_str(), user);
          s.erase(0, pos + 1);
        }
        str(s);
        return 0;
      }
    } buf;
    buf.fn = log;
    buf.user = user;
    std::ostream os(&buf);
    mw::RunReport r = mw::cmd_close(sc, st, &os);
    os.flush();
    return r;
  });
}

const char* mw_report_json(mw_report* r, int indent) {
  if (!r) return "";
  r->text = r->report.dump(indent);
  return r->text.c_str();
}

int mw_report_passed(const mw_report* r) { return r && r->report.passed() ? 1 : 0; }
size_t mw_report_check_count(const mw_report* r) { return r ? r->report.checks().size() : 0; }
void mw_report_free(mw_report* r) { delete r; }

mw_status mw_involution(double re, double im, double* out_re, double* out_im) {
  return guarded([&] {
    require(out_re && out_im, "null argument");
    const mw::cplx w = mw::involution(mw::cplx(re, im));
    *out_re = w.real();
    *out_im = w.imag();
  });
}

mw_status mw_expr_parse(const char* text, mw_expr** out) {
  return guarded([&] {
    require(text && out, "null argument");
    mw::Expr e = mw::parse_expr(text);
    *out = new mw_expr{e, e.str()};
  });
}

mw_status mw_expr_eval(const mw_expr* e, double re, double im, double* out_re, double* out_im) {
  return guarded([&] {
    require(e && out_re && out_im, "null argument");
    const mw::cplx v = e->expr(mw::cplx(re, im));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw mw::NumericError("expression is not finite here");
    *out_re = v.real();
    *out_im = v.imag();
  });
}

mw_status mw_expr_derivative(const mw_expr* e, mw_expr** out) {
  return guarded([&] {
    require(e && out, "null argument");
    const mw::Expr& d = e->expr.derivative();
    *out = new mw_expr{d, d.str()};
  });
}

const char* mw_expr_str(const mw_expr* e) { return e ? e->text.c_str() : ""; }
void mw_expr_free(mw_expr* e) { delete e; }

}  // extern "C"

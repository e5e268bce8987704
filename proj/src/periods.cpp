#include "mw/periods.hpp"

#include <algorithm>
#include <cmath>

#include "mw/error.hpp"

namespace mw {

Coefficient form_coefficient(const VectorMap& f, const OneForm& theta) {
  return [&f, theta](cplx z) -> CVec { return f(z) * theta(z); };
}

Coefficient form_coefficient(const OneForm& phi) {
  return [phi](cplx z) -> CVec {
    CVec v(1);
    v[0] = phi(z);
    return v;
  };
}

double PeriodVector::max_abs() const {
  double m = 0.0;
  for (const CVec& e : entries) m = std::max(m, e.cwiseAbs().maxCoeff());
  return m;
}

double PeriodVector::max_real() const {
  double m = 0.0;
  for (const CVec& e : entries) m = std::max(m, e.real().cwiseAbs().maxCoeff());
  return m;
}

double PeriodVector::max_imag() const {
  double m = 0.0;
  for (const CVec& e : entries) m = std::max(m, e.imag().cwiseAbs().maxCoeff());
  return m;
}

PeriodVector period_map(const Coefficient& c, int n, const IBasis& basis, double tol) {
  PeriodVector p;
  QuadOptions opts;
  opts.tol = tol;
  for (const Curve& delta : basis.plus) {
    QuadResult r = integrate(c, n, delta, opts);
    p.entries.push_back(r.value);
    p.errors.push_back(r.error);
    p.segments.push_back(r.segments);
  }
  return p;
}

PeriodVector period_map(const VectorMap& f, const OneForm& theta, const IBasis& basis, double tol) {
  return period_map(form_coefficient(f, theta), f.dim(), basis, tol);
}

std::vector<RVec> flux(const VectorMap& f, const OneForm& theta, const IBasis& basis, double tol) {
  std::vector<RVec> out;
  for (const CVec& e : period_map(f, theta, basis, tol).entries) out.push_back(e.imag());
  return out;
}

double symmetry_defect(const Coefficient& phi, int n, const Curve& gamma, double tol) {
  QuadOptions opts;
  opts.tol = tol;
  const CVec direct = integrate(phi, n, gamma, opts).value;
  const CVec image = integrate(phi, n, pushforward(gamma), opts).value;
  return (image - direct.conjugate()).norm();
}

namespace {

ExactnessReport judge(PeriodVector p, double tol) {
  ExactnessReport r;
  r.real_exact = p.max_real() < tol;
  r.exact = p.max_abs() < tol;
  r.witness = std::move(p);
  return r;
}

}  // namespace

ExactnessReport exactness_test(const VectorMap& f, const OneForm& theta, const IBasis& basis, double tol) {
  return judge(period_map(f, theta, basis, tol * 1e-2), tol);
}

ExactnessReport exactness_test(const OneForm& phi, const IBasis& basis, double tol) {
  return judge(period_map(form_coefficient(phi), 1, basis, tol * 1e-2), tol);
}

Path canonical_path(const Domain& d, cplx from, cplx to, bool radial_first) {
  const double r0 = std::abs(from), r1 = std::abs(to);
  if (r0 == 0.0 || r1 == 0.0) throw DomainError("canonical path endpoint at 0");
  const double a0 = std::arg(from);
  double sweep = std::remainder(std::arg(to) - a0, 2.0 * kPi);  // in [-pi, pi]
  auto build = [&](double sw) {
    Path p;
    if (radial_first) {
      if (r0 != r1) p.push_back(Curve::segment(from, std::polar(r1, a0), "radial"));
      if (sw != 0.0) p.push_back(Curve::arc(r1, a0, a0 + sw, "angular"));
    } else {
      if (sw != 0.0) p.push_back(Curve::arc(r0, a0, a0 + sw, "angular"));
      if (r0 != r1) p.push_back(Curve::segment(std::polar(r0, a0 + sw), to, "radial"));
    }
    return p;
  };
  auto clear = [&](const Path& p) {
    for (const Curve& c : p)
      for (int k = 0; k <= 256; ++k) {
        const cplx z = c(k / 256.0);
        for (cplx s : d.special_points())
          if (s != cplx(0.0) && std::abs(z - s) <= 2.0 * d.exclusion_radius(s)) return false;
      }
    return true;
  };
  Path p = build(sweep);
  if (clear(p)) return p;
  const double alt = sweep > 0 ? sweep - 2.0 * kPi : sweep + 2.0 * kPi;
  Path q = build(alt);
  if (clear(q)) return q;
  throw DomainError("no puncture-free canonical path between the requested points");
}

InvariantPrimitive::InvariantPrimitive(const Domain& d, OneForm phi, cplx p0, double a, double tol)
    : domain_(d), phi_(std::move(phi)), p0_(p0), tol_(tol) {
  QuadOptions opts;
  opts.tol = tol * 1e-2;
  const cplx j = integrate(form_coefficient(phi_), 1, canonical_path(domain_, p0_, involution(p0_)), opts).value[0];
  constant_ = a - 0.5 * kI * j.imag();
}

cplx InvariantPrimitive::operator()(cplx p) const {
  if (p == p0_) return constant_;
  QuadOptions opts;
  opts.tol = tol_ * 1e-2;
  return constant_ + integrate(form_coefficient(phi_), 1, canonical_path(domain_, p0_, p), opts).value[0];
}

InvariantPrimitive invariant_primitive(const Domain& d, const OneForm& phi, cplx p0, double a, double tol) {
  const ExactnessReport ex = exactness_test(phi, build_ibasis(d), tol);
  if (!ex.exact)
    throw PreconditionError("invariant primitive requested for a form with nonzero periods (max |P| = " +
                            std::to_string(ex.witness.max_abs()) + ")");
  return InvariantPrimitive(d, phi, p0, a, tol);
}

}  // namespace mw

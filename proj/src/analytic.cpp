#include "mw/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mw/error.hpp"

namespace mw {

NullMap::NullMap(std::vector<Expr> components) : components_(std::move(components)) {
  if (components_.size() < 3) throw ArgumentError("a null map needs at least 3 components");
  for (const Expr& e : components_) (void)e.rational();
}

CVec NullMap::operator()(cplx z) const {
  CVec v(dim());
  for (int j = 0; j < dim(); ++j) v[j] = components_[j].eval_fast(z);
  return v;
}

NullMap NullMap::scaled(cplx s) const {
  std::vector<Expr> c;
  for (const Expr& e : components_) c.push_back(Expr(s) * e);
  return NullMap(std::move(c));
}

OneForm standard_theta() { return OneForm{Expr(kI) / Expr::z()}; }

Grid Grid::log_polar(int n_radii, int n_angles, double rmin, double rmax) {
  if (n_radii < 1 || n_angles < 1 || !(rmin > 0.0) || !(rmax >= rmin)) throw ArgumentError("invalid grid shape");
  Grid g;
  g.points.reserve(static_cast<std::size_t>(n_radii) * n_angles);
  const double lr0 = std::log(rmin), lr1 = std::log(rmax);
  for (int i = 0; i < n_radii; ++i) {
    const double r = n_radii == 1 ? rmin : std::exp(lr0 + (lr1 - lr0) * i / (n_radii - 1));
    for (int k = 0; k < n_angles; ++k) g.points.push_back(std::polar(r, 2.0 * kPi * k / n_angles));
  }
  return g;
}

Grid Grid::verification(const Domain& d, int n) {
  double rmin = 0.05, rmax = 20.0;
  if (d.kind() == DomainKind::Annulus) {
    rmin = std::max(rmin, d.annulus_radius() * 1.05);
    rmax = 1.0 / rmin;
  }
  return log_polar(n, n, rmin, rmax).excluding(d);
}

Grid Grid::excluding(const Domain& d) const {
  Grid g;
  for (cplx z : points)
    if (d.contains(z)) g.points.push_back(z);
  return g;
}

Expr symmetrize(const Expr& f) { return Expr(0.5) * (f + f.bar_pullback()); }

Expr antisymmetrize(const Expr& f) { return Expr(0.5) * (f - f.bar_pullback()); }

namespace {

void require_grid(const Grid& g) {
  if (g.points.empty()) throw ArgumentError("empty evaluation grid");
}

double safe_ratio(double num, double scale) {
  return scale > 0.0 ? num / scale : (num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
}

}  // namespace

Residual invariance_residual(const Expr& f, const Grid& grid) {
  require_grid(grid);
  Residual r;
  for (cplx z : grid.points) {
    const cplx a = f.eval_fast(involution(z));
    const cplx b = std::conj(f.eval_fast(z));
    const double d = std::abs(a - b);
    r.absolute = std::max(r.absolute, d);
    r.relative = std::max(r.relative, safe_ratio(d, std::max(std::abs(a), std::abs(b))));
  }
  return r;
}

Residual invariance_residual(const VectorMap& f, const Grid& grid) {
  require_grid(grid);
  Residual r;
  for (cplx z : grid.points) {
    const CVec a = f(involution(z));
    const CVec b = f(z).conjugate();
    const double d = (a - b).norm();
    r.absolute = std::max(r.absolute, d);
    r.relative = std::max(r.relative, safe_ratio(d, std::max(a.norm(), b.norm())));
  }
  return r;
}

Residual form_invariance_residual(const OneForm& phi, const Grid& grid) {
  require_grid(grid);
  Residual r;
  for (cplx z : grid.points) {
    const cplx zb = std::conj(z);
    const cplx a = phi(involution(z)) / (zb * zb);
    const cplx b = std::conj(phi(z));
    const double d = std::abs(a - b);
    r.absolute = std::max(r.absolute, d);
    r.relative = std::max(r.relative, safe_ratio(d, std::max(std::abs(a), std::abs(b))));
  }
  return r;
}

Residual null_residual(const VectorMap& f, const Grid& grid) {
  require_grid(grid);
  Residual r;
  for (cplx z : grid.points) {
    const CVec v = f(z);
    const double d = std::abs(v.cwiseProduct(v).sum());
    r.absolute = std::max(r.absolute, d);
    r.relative = std::max(r.relative, safe_ratio(d, v.squaredNorm()));
  }
  return r;
}

Residual gauss_symmetry_residual(const Expr& g, const Grid& grid) {
  require_grid(grid);
  Residual r;
  for (cplx z : grid.points) {
    const cplx a = g.eval_fast(involution(z));
    const cplx b = -1.0 / std::conj(g.eval_fast(z));
    const double d = std::abs(a - b);
    r.absolute = std::max(r.absolute, d);
    r.relative = std::max(r.relative, safe_ratio(d, std::max(std::abs(a), std::abs(b))));
  }
  return r;
}

double min_modulus(const VectorMap& f, const Grid& grid) {
  require_grid(grid);
  double m = std::numeric_limits<double>::infinity();
  for (cplx z : grid.points) m = std::min(m, f(z).norm());
  return m;
}

Expr expr_from_rational(const Rational& r) {
  auto poly_expr = [](const Poly& p) {
    // Horner form keeps the tree shallow in the number of multiplications.
    Expr acc;
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * Expr::z() + Expr(*it);
    return acc;
  };
  if (r.is_zero()) return Expr(0.0);
  Expr e = poly_expr(r.num());
  if (r.den().degree() > 0) e = e / poly_expr(r.den());
  else e = e / Expr(r.den().c[0]);
  if (r.shift() != 0) e = e * Expr::z().pow(r.shift());
  return e;
}

NullMap weierstrass_lift(const Expr& g, const Expr& f3, const std::vector<cplx>& special_points) {
  const Rational& rg = g.rational();
  const Rational& rf = f3.rational();
  if (rg.is_zero()) throw ValidationError("Gauss map is identically zero");
  std::vector<cplx> points = special_points;
  if (points.empty()) {
    for (cplx p : rg.zeros()) points.push_back(p);
    for (cplx p : rg.poles()) points.push_back(p);
    for (cplx p : rf.zeros()) points.push_back(p);
    std::erase_if(points, [](cplx p) { return std::abs(p) < 1e-12; });
  }
  for (cplx p : points) {
    const int og = rg.order_at(p);
    const int of = rf.order_at(p);
    if (of != std::abs(og)) {
      std::ostringstream os;
      os << "order mismatch at z = " << p.real() << (p.imag() < 0 ? "" : "+") << p.imag()
         << "i: f3 has order " << of << ", g has order " << og;
      throw ValidationError(os.str());
    }
  }
  const Rational ginv = Rational::constant(1.0) / rg;
  const Rational half = Rational::constant(0.5);
  const Rational f1 = half * (ginv * rf - rg * rf);
  const Rational f2 = Rational::constant(0.5 * kI) * (ginv * rf + rg * rf);
  return NullMap({expr_from_rational(f1), expr_from_rational(f2), f3});
}

Expr gauss_from_nullmap(const NullMap& f) {
  if (f.dim() != 3) throw ArgumentError("Gauss map extraction needs n = 3");
  const Expr den = f[0] - Expr(kI) * f[1];
  if (den.rational().is_zero()) throw ValidationError("f1 - i f2 vanishes identically");
  return expr_from_rational((f[2] / den).rational());
}

}  // namespace mw

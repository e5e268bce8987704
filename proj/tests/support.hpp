#pragma once

#include <memory>
#include <random>
#include <vector>

#include "mw/analytic.hpp"
#include "mw/domain.hpp"
#include "mw/expr.hpp"

namespace mwtest {

using mw::cplx;
using mw::Expr;

inline Expr meeks_gauss() { return mw::parse_expr("z^2*(z+1)/(z-1)"); }
inline Expr meeks_height() { return mw::parse_expr("2*(z^2-1)/z"); }
inline mw::NullMap meeks_map() { return mw::weierstrass_lift(meeks_gauss(), meeks_height()); }

inline mw::NullMap mobius_map() {
  return mw::NullMap({mw::parse_expr("(z^2-1)/z"), mw::parse_expr("-i*(z^2+1)/z"), mw::parse_expr("(z^4+1)/z^2"),
                      mw::parse_expr("-i*(z^4-1)/z^2")});
}

/// Closed form of the R^4 immersion with X(1) = (0,0,0,1).
inline mw::RVec mobius_closed_form(cplx z) {
  const cplx i(0, 1);
  mw::RVec x(4);
  x << (i * (z + 1.0 / z)).real(), (z - 1.0 / z).real(), (0.5 * i * (z * z - 1.0 / (z * z))).real(),
      (0.5 * (z * z + 1.0 / (z * z))).real();
  return x;
}

/// Closed form of the Meeks immersion up to a constant: X = Re of the
/// Laurent primitive of f theta.
inline mw::RVec meeks_closed_form(cplx z) {
  const cplx i(0, 1);
  // f1 theta = i (z^-2 - 2 z^-3 + z^-4 - z^2 - 2 z - 1) dz, etc.
  const cplx p1 = i * (-1.0 / z + 1.0 / (z * z) - 1.0 / (3.0 * z * z * z) - z * z * z / 3.0 - z * z - z);
  const cplx p2 = i * i * (-1.0 / z + 1.0 / (z * z) - 1.0 / (3.0 * z * z * z) + z * z * z / 3.0 + z * z + z);
  const cplx p3 = i * 2.0 * (z + 1.0 / z);
  mw::RVec x(3);
  x << p1.real(), p2.real(), p3.real();
  return x;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline cplx random_point(std::mt19937_64& g, double rmin = 0.3, double rmax = 3.0) {
  std::uniform_real_distribution<double> lr(std::log(rmin), std::log(rmax)), a(-mw::kPi, mw::kPi);
  return std::polar(std::exp(lr(g)), a(g));
}

inline cplx random_coeff(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return cplx(u(g), u(g));
}

/// Random Laurent polynomial sum_{k=-d}^{d} c_k z^k.
inline Expr random_laurent(std::mt19937_64& g, int d) {
  Expr e;
  for (int k = -d; k <= d; ++k) e = e + Expr(random_coeff(g)) * Expr::z().pow(k);
  return e;
}

/// Random expression tree mixing every node type.
inline Expr random_tree(std::mt19937_64& g, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  switch (pick(g)) {
    case 0: return Expr(random_coeff(g));
    case 1: return Expr::z();
    case 2: return random_tree(g, depth - 1) + random_tree(g, depth - 1);
    case 3: return random_tree(g, depth - 1) - random_tree(g, depth - 1);
    case 4: return random_tree(g, depth - 1) * random_tree(g, depth - 1);
    case 5: return random_tree(g, depth - 1) / (Expr::z() - Expr(cplx(3.0, 1.0)) + random_coeff(g));
    case 6: return random_tree(g, depth - 1).pow(std::uniform_int_distribution<int>(-2, 3)(g));
    default: return random_tree(g, depth - 1).bar_pullback();
  }
}

/// (z - a)/(1 + conj(a) z): satisfies B(I z) = -1/conj(B(z)).
inline Expr blaschke(cplx a) { return (Expr::z() - Expr(a)) / (Expr(1.0) + Expr(std::conj(a)) * Expr::z()); }

/// (z - a)(1 + conj(a) z)/z: invariant, vanishing at a and I(a).
inline Expr invariant_pair(cplx a) {
  return (Expr::z() - Expr(a)) * (Expr(1.0) + Expr(std::conj(a)) * Expr::z()) / Expr::z();
}

/// Random rational f with zeros and poles away from the unit circle.
inline Expr random_rational_off_circle(std::mt19937_64& g) {
  std::uniform_real_distribution<double> r(1.3, 2.5), a(-mw::kPi, mw::kPi);
  std::uniform_int_distribution<int> flip(0, 1), count(1, 3);
  Expr f(random_coeff(g) + cplx(1.5, 0.0));
  const int nz = count(g), np = count(g) - 1;
  for (int k = 0; k < nz; ++k) {
    const double rho = flip(g) ? r(g) : 1.0 / r(g);
    f = f * (Expr::z() - Expr(std::polar(rho, a(g))));
  }
  for (int k = 0; k < np; ++k) {
    const double rho = flip(g) ? r(g) : 1.0 / r(g);
    f = f / (Expr::z() - Expr(std::polar(rho, a(g))));
  }
  return f;
}

inline std::vector<cplx> ring(double r, int n) {
  std::vector<cplx> pts;
  for (int k = 0; k < n; ++k) pts.push_back(std::polar(r, 2.0 * mw::kPi * (k + 0.5) / n));
  return pts;
}

}  // namespace mwtest

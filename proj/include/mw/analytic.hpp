#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mw/domain.hpp"
#include "mw/expr.hpp"
#include "mw/types.hpp"

namespace mw {

/// A holomorphic map from the domain into C^n.
class VectorMap {
 public:
  virtual ~VectorMap() = default;
  virtual int dim() const = 0;
  virtual CVec operator()(cplx z) const = 0;
};

/// Adapter for maps given as callables.
class FunctionMap final : public VectorMap {
 public:
  FunctionMap(int n, std::function<CVec(cplx)> fn) : n_(n), fn_(std::move(fn)) {}
  int dim() const override { return n_; }
  CVec operator()(cplx z) const override { return fn_(z); }

 private:
  int n_;
  std::function<CVec(cplx)> fn_;
};

/// n expression components meant to take values in the punctured null
/// quadric.  Evaluation goes through the canonical rational forms.
class NullMap final : public VectorMap {
 public:
  explicit NullMap(std::vector<Expr> components);

  int dim() const override { return static_cast<int>(components_.size()); }
  CVec operator()(cplx z) const override;
  const std::vector<Expr>& components() const { return components_; }
  const Expr& operator[](std::size_t j) const { return components_[j]; }
  NullMap scaled(cplx s) const;

 private:
  std::vector<Expr> components_;
};

/// phi = a(z) dz.
struct OneForm {
  Expr coefficient;
  cplx operator()(cplx z) const { return coefficient.eval_fast(z); }
};

/// theta = i dz / z, invariant and nowhere vanishing on C*.
OneForm standard_theta();

struct Residual {
  double absolute = 0.0;
  double relative = 0.0;
};

/// Evaluation points.  The log-polar constructor is closed under the
/// involution whenever rmin * rmax = 1 and the angle count is even.
struct Grid {
  std::vector<cplx> points;

  static Grid log_polar(int n_radii, int n_angles, double rmin, double rmax);
  /// Default verification grid: 64 radii in [0.05, 20] x 64 angles, with
  /// exclusion disks around the domain's special points removed.
  static Grid verification(const Domain& d, int n = 64);
  Grid excluding(const Domain& d) const;
};

/// Pi_I f = (f + conj(f o I)) / 2.
Expr symmetrize(const Expr& f);
/// Pi_Ibar f = (f - conj(f o I)) / 2.
Expr antisymmetrize(const Expr& f);

Residual invariance_residual(const Expr& f, const Grid& grid);
Residual invariance_residual(const VectorMap& f, const Grid& grid);
/// sup |a(I z) / conj(z)^2 - conj(a(z))|: the pullback condition I* phi = conj(phi).
Residual form_invariance_residual(const OneForm& phi, const Grid& grid);
/// sup |sum f_j^2|, relative to |f|^2 pointwise.
Residual null_residual(const VectorMap& f, const Grid& grid);
/// sup |g(I z) + 1 / conj(g(z))|.
Residual gauss_symmetry_residual(const Expr& g, const Grid& grid);
/// Smallest |f| over the grid; positive means no common zero was sampled.
double min_modulus(const VectorMap& f, const Grid& grid);

/// f = ((1/g - g)/2, i(1/g + g)/2, 1) f3, simplified so the zeros of f3 cancel
/// the poles and zeros of g.  The orders are validated at `special_points`
/// (default: every zero and pole of g and zero of f3 except 0).
NullMap weierstrass_lift(const Expr& g, const Expr& f3, const std::vector<cplx>& special_points = {});

/// g = f3 / (f1 - i f2) for n = 3 data.
Expr gauss_from_nullmap(const NullMap& f);

/// Rebuilds an expression from its canonical rational form (expanded
/// numerator and denominator).
Expr expr_from_rational(const Rational& r);

}  // namespace mw

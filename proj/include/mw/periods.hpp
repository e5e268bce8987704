#pragma once

#include <vector>

#include "mw/analytic.hpp"
#include "mw/domain.hpp"
#include "mw/quadrature.hpp"

namespace mw {

/// z -> f(z) a(z), the coefficient of f theta.
Coefficient form_coefficient(const VectorMap& f, const OneForm& theta);
/// Scalar form as a one-component coefficient.
Coefficient form_coefficient(const OneForm& phi);

/// Periods over B+: entry j is the integral of f theta over delta_j.
struct PeriodVector {
  std::vector<CVec> entries;
  std::vector<double> errors;
  std::vector<int> segments;  ///< quadrature segments accepted per curve

  std::size_t size() const { return entries.size(); }
  double max_abs() const;
  double max_real() const;
  double max_imag() const;
};

PeriodVector period_map(const Coefficient& c, int n, const IBasis& basis, double tol = 1e-10);
PeriodVector period_map(const VectorMap& f, const OneForm& theta, const IBasis& basis, double tol = 1e-10);

/// Im P_j(f) per basis curve.  With f theta = 2 dX this is the flux of X.
std::vector<RVec> flux(const VectorMap& f, const OneForm& theta, const IBasis& basis, double tol = 1e-10);

/// |int_{I_* gamma} phi - conj(int_gamma phi)| (vector norm).
double symmetry_defect(const Coefficient& phi, int n, const Curve& gamma, double tol = 1e-10);

struct ExactnessReport {
  bool real_exact = false;
  bool exact = false;
  PeriodVector witness;
};

ExactnessReport exactness_test(const VectorMap& f, const OneForm& theta, const IBasis& basis, double tol = 1e-10);
ExactnessReport exactness_test(const OneForm& phi, const IBasis& basis, double tol = 1e-10);

/// Radial leg to the target modulus, then the shorter arc (or the reverse
/// order with radial_first = false).  When the arc would pass a puncture the
/// complementary arc is taken.
Path canonical_path(const Domain& d, cplx from, cplx to, bool radial_first = true);

/// Invariant primitive of an exact invariant 1-form phi:
///   f(p) = a - (i/2) int_{p0}^{I(p0)} Im phi + int_{p0}^{p} phi.
class InvariantPrimitive {
 public:
  InvariantPrimitive(const Domain& d, OneForm phi, cplx p0, double a, double tol);
  cplx operator()(cplx p) const;
  cplx constant() const { return constant_; }

 private:
  Domain domain_;
  OneForm phi_;
  cplx p0_;
  cplx constant_;
  double tol_;
};

/// Checks exactness over build_ibasis(d) first; throws PreconditionError otherwise.
InvariantPrimitive invariant_primitive(const Domain& d, const OneForm& phi, cplx p0, double a, double tol = 1e-10);

}  // namespace mw

#pragma once

#include <string>
#include <vector>

#include "mw/types.hpp"

namespace mw {

/// Dense polynomial with ascending complex coefficients.
struct Poly {
  std::vector<cplx> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  cplx operator()(cplx z) const;
  /// Sum of |c_k| |z|^k, the scale against which a value at z is judged small.
  double magnitude(cplx z) const;
  void trim();
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(cplx s, const Poly& a);

/// All complex roots (with multiplicity) via companion-matrix eigenvalues.
std::vector<cplx> poly_roots(const Poly& p);

/// z^shift * num(z) / den(z) with num(0) != 0 and den(0) != 0 once canonical.
/// Common roots of num and den are cancelled, so removable singularities are
/// evaluated without forming 0/0.
class Rational {
 public:
  Rational() : den_{{cplx(1.0)}} {}
  static Rational constant(cplx c);
  static Rational variable();

  cplx operator()(cplx z) const;
  bool is_zero() const { return num_.is_zero(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  int shift() const { return shift_; }

  /// Roots of the denominator, plus 0 when shift < 0 (listed -shift times).
  std::vector<cplx> poles() const;
  /// Roots of the numerator, plus 0 when shift > 0.
  std::vector<cplx> zeros() const;
  /// Signed order at p: positive for zeros, negative for poles.
  int order_at(cplx p, double tol = 1e-6) const;

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational pow(int n) const;
  /// z -> conj(R(I(z))), itself rational in z.
  Rational bar_pullback() const;

 private:
  Rational(Poly num, Poly den, int shift);
  void canonicalize();

  Poly num_;
  Poly den_;
  int shift_ = 0;
};

}  // namespace mw

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mw/rational.hpp"
#include "mw/types.hpp"

namespace mw {

namespace detail {
struct Node;
}

/// Immutable expression tree for a meromorphic function of one complex
/// variable z.  Nodes: constants, z, + - * /, integer powers and the
/// bar-pullback z -> conj(f(I(z))).  Every expression is rational in z; the
/// canonical rational form is built on demand and used for fast evaluation.
class Expr {
 public:
  Expr();  // the zero function
  Expr(cplx c);  // NOLINT(google-explicit-constructor)
  Expr(double c) : Expr(cplx(c)) {}  // NOLINT(google-explicit-constructor)

  static Expr z();

  /// Evaluates the tree directly.
  cplx operator()(cplx z) const;
  /// Evaluates through the canonical rational form.
  cplx eval_fast(cplx z) const { return rational()(z); }

  /// Symbolic derivative d/dz, computed once and cached.
  const Expr& derivative() const;
  const Rational& rational() const;

  Expr pow(int n) const;
  /// z -> conj(f(-1/conj z)).
  Expr bar_pullback() const;

  std::vector<cplx> poles() const { return rational().poles(); }
  std::vector<cplx> zeros() const { return rational().zeros(); }
  bool is_constant() const;
  bool is_zero() const;
  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

 private:
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
  friend struct detail::Node;
};

/// Parses infix arithmetic over z (also `ζ` or `zeta`): + - * / ^ with integer
/// exponents, complex literals such as 2, 1.5e-3, 3i, i, implicit
/// multiplication (2z, z(z+1)) and bar(expr) for the bar-pullback.
/// Throws ParseError.
Expr parse_expr(const std::string& text);

}  // namespace mw

#include <doctest.h>

#include <algorithm>

#include "mw/error.hpp"
#include "mw/expr.hpp"
#include "support.hpp"

using namespace mw;

namespace {

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("polynomial roots") {
  // (z - 1)(z + 2)(z - i)
  const Poly p{{cplx(0, 2), cplx(-2, -1), cplx(1, -1), cplx(1)}};
  auto r = poly_roots(p);
  REQUIRE(r.size() == 3);
  for (cplx want : {cplx(1), cplx(-2), kI}) {
    const bool found = std::any_of(r.begin(), r.end(), [&](cplx x) { return std::abs(x - want) < 1e-12; });
    CHECK(found);
  }
}

TEST_CASE("rational canonical form cancels common factors") {
  const Expr e = parse_expr("(z^2-1)/(z-1)");
  CHECK(near(e.eval_fast(1.0), 2.0, 1e-12));
  CHECK(e.rational().den().degree() == 0);
  const Expr m = parse_expr("(z-1)^2/z^3 - z*(z+1)^2");
  CHECK(m.rational().shift() == -3);
  CHECK(m.poles().size() == 3);
  CHECK(m.rational().order_at(0.0) == -3);
  const Expr f3 = parse_expr("2*(z^2-1)/z");
  CHECK(f3.rational().order_at(1.0) == 1);
  CHECK(f3.rational().order_at(-1.0) == 1);
}

TEST_CASE("bar-pullback") {
  const Expr b = Expr::z().bar_pullback();
  auto g = mwtest::rng(3);
  for (int k = 0; k < 20; ++k) {
    const cplx z = mwtest::random_point(g);
    CHECK(near(b(z), -1.0 / z, 1e-14));
    CHECK(near(b.eval_fast(z), -1.0 / z, 1e-14));
  }
  const Expr f = parse_expr("(1+2i)*z^2 + 3/(z-2)");
  const Expr fb = f.bar_pullback();
  for (int k = 0; k < 20; ++k) {
    const cplx z = mwtest::random_point(g);
    CHECK(near(fb.eval_fast(z), std::conj(f(involution(z))), 1e-12));
  }
  CHECK(near(fb.bar_pullback().eval_fast(0.7), f(0.7), 1e-12));
}

TEST_CASE("parser accepts the documented grammar") {
  const cplx z(0.3, -1.2);
  CHECK(near(parse_expr("2z")(z), 2.0 * z, 1e-15));
  CHECK(near(parse_expr("z(z+1)")(z), z * (z + 1.0), 1e-15));
  CHECK(near(parse_expr("3i")(z), cplx(0, 3), 1e-15));
  CHECK(near(parse_expr("i")(z), kI, 1e-15));
  CHECK(near(parse_expr("(1+2i)*z^2")(z), cplx(1, 2) * z * z, 1e-15));
  CHECK(near(parse_expr("z^(-2)")(z), 1.0 / (z * z), 1e-15));
  CHECK(near(parse_expr("z^-2")(z), 1.0 / (z * z), 1e-15));
  CHECK(near(parse_expr("-z^2")(z), -(z * z), 1e-15));
  CHECK(near(parse_expr("1.5e-3 * zeta")(z), 1.5e-3 * z, 1e-15));
  CHECK(near(parse_expr("ζ + 1")(z), z + 1.0, 1e-15));
  CHECK(near(parse_expr("bar(z)")(z), -1.0 / z, 1e-15));
  CHECK(near(parse_expr("2^3")(z), 8.0, 1e-15));
  CHECK(near(parse_expr("1/2/z")(z), 0.5 / z, 1e-15));
  CHECK(near(parse_expr(" ( z - 1 ) * ( z + 1 ) ")(z), z * z - 1.0, 1e-15));
}

TEST_CASE("parser errors carry a position") {
  for (std::string bad : {"", "2+", "(z", "z^1.5", "foo", "z)", "z^", "bar z", "1..2", "z**2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_expr(bad), ParseError);
  }
  try {
    parse_expr("z + $");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
}

TEST_CASE("printed expressions parse back to the same function") {
  auto g = mwtest::rng(17);
  for (int k = 0; k < 40; ++k) {
    const Expr e = mwtest::random_tree(g, 3);
    const Expr back = parse_expr(e.str());
    for (int j = 0; j < 5; ++j) {
      const cplx z = mwtest::random_point(g, 0.5, 2.0);
      const cplx v = e(z);
      if (!std::isfinite(std::abs(v)) || std::abs(v) > 1e8) continue;
      CHECK(near(back(z), v, 1e-9));
    }
  }
}

TEST_CASE("tree and rational evaluation agree") {
  auto g = mwtest::rng(19);
  for (int k = 0; k < 60; ++k) {
    const Expr e = mwtest::random_tree(g, 3);
    for (int j = 0; j < 5; ++j) {
      const cplx z = mwtest::random_point(g, 0.5, 2.0);
      const cplx v = e(z);
      if (!std::isfinite(std::abs(v)) || std::abs(v) > 1e6) continue;
      CHECK(near(e.eval_fast(z), v, 1e-8));
    }
  }
}

TEST_CASE("symbolic derivative matches central differences") {
  auto g = mwtest::rng(23);
  int checked = 0;
  for (int k = 0; k < 30; ++k) {
    const Expr e = mwtest::random_tree(g, 3);
    const Expr& d = e.derivative();
    for (int j = 0; j < 200; ++j) {
      const cplx z = mwtest::random_point(g, 0.5, 2.0);
      bool clear = true;
      for (cplx p : e.poles()) clear = clear && std::abs(z - p) > 0.1;
      if (!clear) continue;
      const double h = 1e-5 * std::abs(z);
      const cplx fd = (e.eval_fast(z + h) - e.eval_fast(z - h)) / (2 * h);
      const cplx sym = d.eval_fast(z);
      if (std::abs(sym) < 1e-3) continue;
      CHECK(std::abs(fd - sym) <= 1e-6 * std::abs(sym));
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("derivative of known functions") {
  const Expr e = parse_expr("z^3 - 2/z + bar(z^2)");
  // bar(z^2) = 1/z^2, derivative -2/z^3.
  const cplx z(0.8, 0.6);
  CHECK(near(e.derivative()(z), 3.0 * z * z + 2.0 / (z * z) - 2.0 / (z * z * z), 1e-13));
  CHECK(Expr(cplx(2, 1)).derivative().is_zero());
  CHECK(Expr::z().derivative().is_constant());
}

TEST_CASE("constant folding") {
  CHECK(parse_expr("2*3+1").is_constant());
  CHECK(parse_expr("z - z").is_zero());
  CHECK(parse_expr("0*z").is_zero());
  CHECK_FALSE(parse_expr("z").is_constant());
}

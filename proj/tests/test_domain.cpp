#include <doctest.h>

#include <random>

#include "mw/domain.hpp"
#include "mw/error.hpp"
#include "support.hpp"

using namespace mw;

TEST_CASE("involution on sample points") {
  CHECK(std::abs(involution(1.0) - cplx(-1.0)) < 1e-15);
  CHECK(std::abs(involution(kI) - (-kI)) < 1e-15);
  CHECK(std::abs(involution(2.0) - cplx(-0.5)) < 1e-15);
  CHECK_THROWS_AS(involution(0.0), DomainError);
}

TEST_CASE("involution is a fixed-point-free antiholomorphic involution") {
  auto g = mwtest::rng(11);
  for (int k = 0; k < 100; ++k) {
    const cplx z = mwtest::random_point(g, 0.01, 100.0);
    const cplx w = involution(z);
    CHECK(std::abs(involution(w) - z) <= 1e-12 * std::abs(z));
    CHECK(std::abs(w - z) > 0.0);
    CHECK(std::abs(std::abs(w) * std::abs(z) - 1.0) < 1e-14);
    // Wirtinger derivative d/dz = (d/dx - i d/dy)/2 vanishes.
    const double h = 1e-6 * std::abs(z);
    const cplx dx = (involution(z + h) - involution(z - h)) / (2 * h);
    const cplx dy = (involution(z + kI * h) - involution(z - kI * h)) / (2 * h);
    CHECK(std::abs(0.5 * (dx - kI * dy)) < 1e-6 * std::abs(dx));
  }
}

TEST_CASE("curve construction checks closure") {
  CHECK_NOTHROW(Curve::circle(0.5, 2.0, "c"));
  CHECK_THROWS_AS(Curve([](double t) { return cplx(t, 0.0); }, [](double) { return cplx(1.0); }, "open", true),
                  ArgumentError);
  const Curve s = Curve::segment(1.0, kI);
  CHECK(std::abs(s(0.0) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(s(1.0) - kI) < 1e-15);
  CHECK_FALSE(s.closed());
  CHECK(s.reversed_orientation().orientation() == -1);
}

TEST_CASE("pushforward of circles") {
  const Curve a0 = Curve::circle(0.0, 1.0, "alpha0");
  const Curve img = pushforward(a0);
  for (int k = 0; k < 64; ++k) {
    const double t = k / 64.0;
    CHECK(std::abs(img(t) + std::polar(1.0, 2 * kPi * t)) < 1e-14);
  }
  CHECK(img.orientation() == a0.orientation());
  const Curve c2 = pushforward(Curve::circle(0.0, 2.0, "r2"));
  for (int k = 0; k < 32; ++k) CHECK(std::abs(std::abs(c2(k / 32.0)) - 0.5) < 1e-14);

  const cplx q(2.0, 1.0);
  const Curve small = pushforward(Curve::circle(q, 0.05, "small"));
  const cplx iq = involution(q);
  for (int k = 0; k < 32; ++k) CHECK(std::abs(small(k / 32.0) - iq) < 0.05);

  // Velocity matches finite differences of the point map.
  const double t = 0.3, h = 1e-6;
  const cplx fd = (small(t + h) - small(t - h)) / (2 * h);
  CHECK(std::abs(fd - small.velocity(t)) < 1e-6 * std::abs(fd));

  CHECK_THROWS_AS(pushforward(Curve::segment(-1.0, 1.0)), DomainError);
}

TEST_CASE("domain models") {
  const Domain p = Domain::punctured_plane();
  CHECK(p.kind() == DomainKind::PuncturedPlane);
  CHECK(p.contains(2.0));
  CHECK_FALSE(p.contains(0.0));
  CHECK(p.describe() == "punctured-plane");

  const Domain a = Domain::annulus(0.5);
  CHECK(a.contains(1.5));
  CHECK_FALSE(a.contains(2.5));
  CHECK_FALSE(a.contains(0.4));
  CHECK_THROWS_AS(Domain::annulus(1.5), ConfigError);

  const Domain q = Domain::with_pairs({cplx(-0.5)});
  REQUIRE(q.punctures().size() == 1);
  CHECK(std::abs(q.punctures()[0] - cplx(2.0)) < 1e-15);
  CHECK_FALSE(q.contains(2.0));
  CHECK_FALSE(q.contains(-0.5));
  CHECK(q.contains(1.5));
  CHECK(q.special_points().size() == 3);
  CHECK_THROWS_AS(Domain::with_pairs({cplx(1.0)}), ConfigError);
  CHECK_THROWS_AS(Domain::with_pairs({cplx(2.0)}, 2.0), ConfigError);
}

TEST_CASE("the involution maps the domain onto itself") {
  auto g = mwtest::rng(5);
  const Domain d = Domain::with_pairs({cplx(2.0, 1.0), cplx(-3.0)});
  for (int k = 0; k < 500; ++k) {
    const cplx z = mwtest::random_point(g, 0.1, 10.0);
    if (d.contains(z)) CHECK(d.contains(involution(z)));
  }
  const Domain a = Domain::annulus(0.3);
  for (int k = 0; k < 500; ++k) {
    const cplx z = mwtest::random_point(g, 0.3, 3.3);
    if (a.contains(z)) CHECK(a.contains(involution(z)));
  }
}

TEST_CASE("I-basis of the genus-zero models") {
  const IBasis p = build_ibasis(Domain::punctured_plane());
  REQUIRE(p.size() == 1);
  CHECK(std::abs(std::abs(p.plus[0](0.37)) - 1.0) < 1e-15);
  // alpha0 is setwise invariant.
  for (int k = 0; k < 16; ++k) CHECK(std::abs(std::abs(involution(p.plus[0](k / 16.0))) - 1.0) < 1e-15);

  CHECK(build_ibasis(Domain::annulus(0.5)).size() == 1);

  const IBasis q = build_ibasis(Domain::with_pairs({cplx(2.0)}));
  REQUIRE(q.size() == 2);
  REQUIRE(q.minus.size() == 2);
  double mean_re = 0.0;
  for (int k = 0; k < 64; ++k) mean_re += q.plus[1](k / 64.0).real() / 64.0;
  CHECK(mean_re == doctest::Approx(2.0).epsilon(1e-3));
  double mean_im = 0.0;
  mean_re = 0.0;
  for (int k = 0; k < 64; ++k) {
    mean_re += q.minus[1](k / 64.0).real() / 64.0;
    mean_im += q.minus[1](k / 64.0).imag() / 64.0;
  }
  CHECK(mean_re == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(std::abs(mean_im) < 0.05);
  CHECK(curve_distance(q.plus[1], q.minus[1]) > 10 * Domain::with_pairs({cplx(2.0)}).exclusion_radius(2.0));
  CHECK(curve_distance(q.plus[1], q.plus[0]) > 0.1);
}

TEST_CASE("I-basis rejects pairs hugging the unit circle") {
  CHECK_THROWS_AS(build_ibasis(Domain::with_pairs({cplx(1.004)})), ConfigError);
}

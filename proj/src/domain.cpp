#include "mw/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mw/error.hpp"

namespace mw {

cplx involution(cplx z) {
  if (z == cplx(0.0, 0.0)) throw DomainError("involution: 0 maps to the puncture at infinity");
  return -1.0 / std::conj(z);
}

Curve::Curve(Fn point, Fn velocity, std::string label, bool closed, int orientation)
    : point_(std::move(point)),
      velocity_(std::move(velocity)),
      label_(std::move(label)),
      closed_(closed),
      orientation_(orientation >= 0 ? 1 : -1) {
  if (closed_ && std::abs(point_(1.0) - point_(0.0)) > 1e-12 * std::max(1.0, std::abs(point_(0.0))))
    throw ArgumentError("curve '" + label_ + "' is declared closed but its endpoints differ");
}

Curve Curve::circle(cplx center, double radius, std::string label) {
  if (!(radius > 0.0)) throw ArgumentError("circle radius must be positive");
  auto p = [=](double t) { return center + radius * std::polar(1.0, 2.0 * kPi * t); };
  auto v = [=](double t) { return radius * 2.0 * kPi * kI * std::polar(1.0, 2.0 * kPi * t); };
  return Curve(p, v, std::move(label), true);
}

Curve Curve::segment(cplx from, cplx to, std::string label) {
  auto p = [=](double t) { return from + t * (to - from); };
  auto v = [=](double) { return to - from; };
  return Curve(p, v, std::move(label), false);
}

Curve Curve::arc(double radius, double phi0, double phi1, std::string label) {
  const double sweep = phi1 - phi0;
  auto p = [=](double t) { return std::polar(radius, phi0 + t * sweep); };
  auto v = [=](double t) { return kI * sweep * std::polar(radius, phi0 + t * sweep); };
  return Curve(p, v, std::move(label), false);
}

Curve Curve::reversed_orientation() const {
  Curve c = *this;
  c.orientation_ = -orientation_;
  return c;
}

Curve Curve::relabeled(std::string label) const {
  Curve c = *this;
  c.label_ = std::move(label);
  return c;
}

Curve pushforward(const Curve& c) {
  for (int k = 0; k <= 1024; ++k)
    if (std::abs(c(k / 1024.0)) < 1e-12) throw DomainError("pushforward: curve '" + c.label() + "' passes through 0");
  auto p = [c](double t) {
    const cplx z = c(t);
    if (z == cplx(0.0, 0.0)) throw DomainError("pushforward: curve '" + c.label() + "' passes through 0");
    return involution(z);
  };
  // d/dt(-1/conj(z)) = conj(z') / conj(z)^2
  auto v = [c](double t) {
    const cplx zb = std::conj(c(t));
    return std::conj(c.velocity(t)) / (zb * zb);
  };
  return Curve(p, v, "I*" + c.label(), c.closed(), c.orientation());
}

Domain Domain::punctured_plane(cplx basepoint, DomainOptions opts) {
  Domain d;
  d.kind_ = DomainKind::PuncturedPlane;
  d.basepoint_ = basepoint;
  d.opts_ = opts;
  d.validate();
  return d;
}

Domain Domain::annulus(double r, cplx basepoint, DomainOptions opts) {
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("annulus radius must satisfy 0 < r < 1");
  Domain d;
  d.kind_ = DomainKind::Annulus;
  d.annulus_r_ = r;
  d.basepoint_ = basepoint;
  d.opts_ = opts;
  d.validate();
  return d;
}

Domain Domain::with_pairs(const std::vector<cplx>& punctures, cplx basepoint, DomainOptions opts) {
  Domain d;
  d.kind_ = DomainKind::PuncturedPlaneWithPairs;
  d.basepoint_ = basepoint;
  d.opts_ = opts;
  for (cplx q : punctures) {
    if (q == cplx(0.0, 0.0)) throw ConfigError("puncture at 0 is implicit; give the partner pairs only");
    if (std::abs(std::abs(q) - 1.0) < opts.separation)
      throw ConfigError("puncture on the unit circle: its partner is too close to the invariant loop");
    d.punctures_.push_back(std::abs(q) > 1.0 ? q : involution(q));
  }
  d.validate();
  return d;
}

std::vector<cplx> Domain::special_points() const {
  std::vector<cplx> pts{cplx(0.0, 0.0)};
  for (cplx q : punctures_) {
    pts.push_back(q);
    pts.push_back(involution(q));
  }
  return pts;
}

double Domain::exclusion_radius(cplx q) const { return opts_.exclusion * std::max(1.0, std::abs(q)); }

double Domain::clearance(cplx z) const {
  double best = std::numeric_limits<double>::infinity();
  for (cplx s : special_points()) best = std::min(best, std::abs(z - s));
  return best;
}

bool Domain::contains(cplx z) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  for (cplx s : special_points())
    if (std::abs(z - s) <= exclusion_radius(s)) return false;
  if (kind_ == DomainKind::Annulus) {
    const double m = std::abs(z);
    if (m <= annulus_r_ || m >= 1.0 / annulus_r_) return false;
  }
  return true;
}

void Domain::validate() const {
  const auto pts = special_points();
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      if (std::abs(pts[a] - pts[b]) < opts_.separation)
        throw ConfigError("special points closer than the separation radius");
  if (basepoint_ == cplx(0.0, 0.0)) throw ConfigError("basepoint must not be 0");
  for (cplx s : pts)
    if (std::abs(basepoint_ - s) < opts_.separation)
      throw ConfigError("basepoint coincides with a puncture");
  if (!contains(basepoint_)) throw ConfigError("basepoint lies outside the domain");
}

std::string Domain::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DomainKind::PuncturedPlane: os << "punctured-plane"; break;
    case DomainKind::Annulus: os << "annulus:" << annulus_r_; break;
    case DomainKind::PuncturedPlaneWithPairs:
      os << "pairs:";
      for (std::size_t j = 0; j < punctures_.size(); ++j)
        os << (j ? "," : "") << punctures_[j].real() << (punctures_[j].imag() < 0 ? "" : "+")
           << punctures_[j].imag() << "i";
      break;
  }
  return os.str();
}

IBasis build_ibasis(const Domain& d) {
  IBasis b;
  // I acts antipodally on the unit circle, so alpha0 is setwise invariant.
  b.plus.push_back(Curve::circle(0.0, 1.0, "alpha0"));
  b.loop_radii.push_back(1.0);
  const auto special = d.special_points();
  for (std::size_t j = 0; j < d.punctures().size(); ++j) {
    const cplx q = d.punctures()[j];
    double nearest = std::numeric_limits<double>::infinity();
    for (cplx s : special)
      if (s != q) nearest = std::min(nearest, std::abs(q - s));
    const double radius = std::min(0.25 * nearest, 0.25 * std::abs(std::abs(q) - 1.0));
    if (radius < 10.0 * d.exclusion_radius(q))
      throw ConfigError("puncture pair " + std::to_string(j + 1) +
                        " is too close to the unit circle or to another pair for disjoint loops");
    b.plus.push_back(Curve::circle(q, radius, "gamma" + std::to_string(j + 1) + "+"));
    b.loop_radii.push_back(radius);
  }
  for (const Curve& c : b.plus) b.minus.push_back(pushforward(c));
  return b;
}

double curve_distance(const Curve& a, const Curve& b, int samples) {
  std::vector<cplx> pb(samples + 1);
  for (int k = 0; k <= samples; ++k) pb[k] = b(static_cast<double>(k) / samples);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= samples; ++k) {
    const cplx z = a(static_cast<double>(k) / samples);
    for (cplx w : pb) best = std::min(best, std::abs(z - w));
  }
  return best;
}

}  // namespace mw

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mw/types.hpp"

namespace mw {

/// The fixed-point-free antiholomorphic involution I(z) = -1/conj(z) of C*.
/// Throws DomainError for z = 0 (which I sends to the puncture at infinity).
cplx involution(cplx z);

/// A piecewise-smooth parametrized curve t in [0,1] -> C.  The orientation
/// flag multiplies every integral taken over the curve.
class Curve {
 public:
  using Fn = std::function<cplx(double)>;

  Curve(Fn point, Fn velocity, std::string label, bool closed, int orientation = 1);

  static Curve circle(cplx center, double radius, std::string label);
  static Curve segment(cplx from, cplx to, std::string label = "segment");
  /// Arc of the circle |z| = radius from angle phi0 to phi1 (any sign of sweep).
  static Curve arc(double radius, double phi0, double phi1, std::string label = "arc");

  cplx operator()(double t) const { return point_(t); }
  cplx velocity(double t) const { return velocity_(t); }
  const std::string& label() const { return label_; }
  bool closed() const { return closed_; }
  int orientation() const { return orientation_; }

  Curve reversed_orientation() const;
  Curve relabeled(std::string label) const;

 private:
  Fn point_;
  Fn velocity_;
  std::string label_;
  bool closed_;
  int orientation_;
};

/// A path assembled from smooth pieces traversed in order.
using Path = std::vector<Curve>;

/// t -> I(c(t)); orientation flag and closedness are preserved.
/// Throws DomainError if the curve meets 0.
Curve pushforward(const Curve& c);

enum class DomainKind { PuncturedPlane, Annulus, PuncturedPlaneWithPairs };

struct DomainOptions {
  double separation = 1e-3;  ///< minimum distance between special points
  double exclusion = 1e-3;   ///< exclusion radius per unit of local scale
};

/// Genus-zero domain models carrying the involution I(z) = -1/conj(z):
/// C*, the annulus r < |z| < 1/r, or C* minus symmetric puncture pairs.
class Domain {
 public:
  static Domain punctured_plane(cplx basepoint = 1.0, DomainOptions opts = {});
  static Domain annulus(double r, cplx basepoint = 1.0, DomainOptions opts = {});
  /// Punctures may be given in either representative; the one with |q| > 1 is stored.
  static Domain with_pairs(const std::vector<cplx>& punctures, cplx basepoint = 1.0,
                           DomainOptions opts = {});

  DomainKind kind() const { return kind_; }
  double annulus_radius() const { return annulus_r_; }
  /// Puncture representatives, all with |q| > 1.
  const std::vector<cplx>& punctures() const { return punctures_; }
  /// Every finite special point: 0, each q and I(q).
  std::vector<cplx> special_points() const;
  cplx basepoint() const { return basepoint_; }
  const DomainOptions& options() const { return opts_; }

  double exclusion_radius(cplx q) const;
  /// Distance from z to the nearest finite special point.
  double clearance(cplx z) const;
  /// True when z lies in the domain and outside every exclusion disk.
  bool contains(cplx z) const;
  std::string describe() const;

 private:
  Domain() = default;
  void validate() const;

  DomainKind kind_ = DomainKind::PuncturedPlane;
  double annulus_r_ = 0.0;
  std::vector<cplx> punctures_;
  cplx basepoint_ = 1.0;
  DomainOptions opts_;
};

/// Ordered homology generators: plus = {alpha0, gamma_1+, ...}, minus[j] = I_* plus[j].
struct IBasis {
  std::vector<Curve> plus;
  std::vector<Curve> minus;
  std::vector<double> loop_radii;  ///< radius of gamma_j+ (entry 0 is the unit circle)
  std::size_t size() const { return plus.size(); }
};

IBasis build_ibasis(const Domain& d);

/// Minimum distance between two curves, sampled at `samples` points each.
double curve_distance(const Curve& a, const Curve& b, int samples = 512);

}  // namespace mw

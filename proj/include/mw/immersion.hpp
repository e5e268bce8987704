#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "mw/analytic.hpp"
#include "mw/domain.hpp"
#include "mw/periods.hpp"

namespace mw {

/// A map from the domain into R^n.
class Surface {
 public:
  virtual ~Surface() = default;
  virtual int dim() const = 0;
  virtual RVec operator()(cplx p) const = 0;
  /// Values on the polar grid radii x angles, row-major by radius.
  virtual std::vector<RVec> sample_polar(const std::vector<double>& radii, const std::vector<double>& angles) const;
  std::vector<RVec> sample(const std::vector<cplx>& points) const;
  /// X(p) given X at a nearby anchor; the default ignores the anchor.
  virtual RVec eval_near(cplx anchor, const RVec& x_anchor, cplx p) const;
};

class FunctionSurface final : public Surface {
 public:
  FunctionSurface(int n, std::function<RVec(cplx)> fn) : n_(n), fn_(std::move(fn)) {}
  int dim() const override { return n_; }
  RVec operator()(cplx p) const override { return fn_(p); }

 private:
  int n_;
  std::function<RVec(cplx)> fn_;
};

/// X(p) = X0 + Re int_{p0}^{p} f theta along the canonical path, so that
/// f theta = 2 dX.  Requires real-exact f theta.
class ImmersionField final : public Surface {
 public:
  ImmersionField(Domain d, std::shared_ptr<const VectorMap> f, OneForm theta, cplx p0, RVec x0, double tol);

  int dim() const override { return f_->dim(); }
  RVec operator()(cplx p) const override { return eval_along(p, true); }
  RVec eval_along(cplx p, bool radial_first) const;
  /// X(p) from a known value at a nearby anchor, integrating along the segment.
  RVec eval_from(cplx anchor, const RVec& x_anchor, cplx p) const;
  RVec eval_near(cplx anchor, const RVec& x_anchor, cplx p) const override { return eval_from(anchor, x_anchor, p); }
  /// Incremental integration along rays and circles.
  std::vector<RVec> sample_polar(const std::vector<double>& radii, const std::vector<double>& angles) const override;

  /// f(z) a(z): the coefficient of 2 dX.
  CVec differential(cplx z) const { return (*f_)(z) * theta_(z); }
  const VectorMap& map() const { return *f_; }
  std::shared_ptr<const VectorMap> map_ptr() const { return f_; }
  const OneForm& theta() const { return theta_; }
  const Domain& domain() const { return domain_; }
  cplx basepoint() const { return p0_; }
  const RVec& base_value() const { return x0_; }
  double tol() const { return tol_; }

 private:
  RVec integrate_real_part(const Path& path) const;

  Domain domain_;
  std::shared_ptr<const VectorMap> f_;
  OneForm theta_;
  cplx p0_;
  RVec x0_;
  double tol_;
};

/// Certifies real exactness over build_ibasis(d) and builds the field.
/// Throws PreconditionError carrying the witness periods otherwise.
ImmersionField integrate_immersion(const Domain& d, std::shared_ptr<const VectorMap> f, const OneForm& theta, cplx p0,
                                   const RVec& x0, double tol = 1e-10);

struct GeometricResiduals {
  double conformal = 0.0;   ///< |Xx.Xy|/(|Xx||Xy|) + ||Xx|-|Xy||/max(|Xx|,|Xy|)
  double harmonic = 0.0;    ///< |5-point stencil| / (h (|Xx|+|Xy|))
  double invariance = 0.0;  ///< |X(I p) - X(p)| / max(1, |X(p)|)
  double derivative = 0.0;  ///< |(Xx - i Xy) - f a| / |f a|, NaN when no differential is given
};

/// Central differences with step h = h_rel |p|, shrunk near punctures.
GeometricResiduals geometric_residuals(const Surface& x, const std::function<CVec(cplx)>& differential,
                                       const Domain& d, const std::vector<cplx>& points, double h_rel = 1e-4);
GeometricResiduals geometric_residuals(const ImmersionField& x, const std::vector<cplx>& points, double h_rel = 1e-4);

/// lambda = |f| |a| / sqrt(2): the induced metric is lambda^2 |dz|^2.
std::function<double(cplx)> conformal_factor(std::shared_ptr<const VectorMap> f, const OneForm& theta);

double path_length(const std::function<double(cplx)>& lambda, const Curve& c, double tol = 1e-10);

/// Points center + s e^{i angle}; s runs from `start` outward (s -> infinity)
/// or inward (s -> 0).
struct Ray {
  cplx center = 0.0;
  double angle = 0.0;
  double start = 1.0;
  bool outward = true;
};

struct RayProbe {
  std::vector<double> endpoints;  ///< s values
  std::vector<double> lengths;    ///< lambda-length from start to each endpoint
  double exponent = 0.0;          ///< fitted d log L / d log s over the tail
  bool divergent = false;
};

struct CompletenessReport {
  std::vector<RayProbe> rays;
  bool complete = false;  ///< every probed ray diverges
};

CompletenessReport completeness_probe(const std::function<double(cplx)>& lambda, const std::vector<Ray>& rays,
                                      int doublings = 10);

struct CurvatureReport {
  double value = 0.0;                 ///< inner polar integral + mapped exterior
  double error = 0.0;
  std::vector<double> radii;          ///< truncation schedule
  std::vector<double> truncated;      ///< integral over inner_radius <= |z| <= R
  double extrapolated = 0.0;          ///< Richardson limit of the truncated values
};

/// -int int 4|g'|^2/(1+|g|^2)^2 dx dy over |z| >= inner_radius.  With
/// inner_radius = 1 this is the fundamental domain of I (half the double
/// cover); with 0 it is the whole plane.
CurvatureReport total_curvature(const Expr& g, double inner_radius = 1.0, double tol = 1e-10);

struct DoublePoint {
  cplx p;
  cplx q;
  double distance = 0.0;
};

struct ScanOptions {
  int n_rho = 256;
  int n_theta = 256;
  double rho_max = 4.0;
  double eps = 1e-3;
  int max_candidates = 48;
};

/// Pairs (p, q) of the fundamental domain 1 <= |z| <= rho_max with
/// |X(p) - X(q)| < eps and min(|p - q|, |p - I(q)|) > 10 grid spacings,
/// refined by coordinate descent.  Throws PreconditionError when the
/// sampled map is not an immersion (collapsed grid cells).
std::vector<DoublePoint> double_point_scan(const Surface& x, const ScanOptions& opts = {});

struct ProperCertificate {
  bool registered = false;
  bool holds = false;
  double margin = 0.0;  ///< min over the grid of |X(p)| - bound(|p|)
};

ProperCertificate properness_certificate(const Surface& x, const std::vector<cplx>& points,
                                         const std::optional<std::function<double(double)>>& bound,
                                         double tol = 1e-9);

}  // namespace mw

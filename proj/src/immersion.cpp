#include "mw/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mw/error.hpp"
#include "mw/parallel.hpp"

namespace mw {

std::vector<RVec> Surface::sample_polar(const std::vector<double>& radii, const std::vector<double>& angles) const {
  std::vector<RVec> out(radii.size() * angles.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < angles.size(); ++j) out[i * angles.size() + j] = (*this)(std::polar(radii[i], angles[j]));
  });
  return out;
}

std::vector<RVec> Surface::sample(const std::vector<cplx>& points) const {
  std::vector<RVec> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = (*this)(points[i]); });
  return out;
}

RVec Surface::eval_near(cplx, const RVec&, cplx p) const { return (*this)(p); }

ImmersionField::ImmersionField(Domain d, std::shared_ptr<const VectorMap> f, OneForm theta, cplx p0, RVec x0,
                               double tol)
    : domain_(std::move(d)), f_(std::move(f)), theta_(std::move(theta)), p0_(p0), x0_(std::move(x0)), tol_(tol) {
  if (!f_) throw ArgumentError("immersion needs a map");
  if (x0_.size() != f_->dim()) throw ArgumentError("base value dimension does not match the map");
  if (!domain_.contains(p0_)) throw DomainError("immersion basepoint outside the domain");
}

RVec ImmersionField::integrate_real_part(const Path& path) const {
  QuadOptions opts;
  opts.tol = tol_;
  const Coefficient c = [this](cplx z) -> CVec { return differential(z); };
  return integrate(c, dim(), path, opts).value.real();
}

RVec ImmersionField::eval_along(cplx p, bool radial_first) const {
  if (!domain_.contains(p)) throw DomainError("immersion evaluated outside the domain");
  if (p == p0_) return x0_;
  return x0_ + integrate_real_part(canonical_path(domain_, p0_, p, radial_first));
}

RVec ImmersionField::eval_from(cplx anchor, const RVec& x_anchor, cplx p) const {
  if (p == anchor) return x_anchor;
  return x_anchor + integrate_real_part({Curve::segment(anchor, p)});
}

std::vector<RVec> ImmersionField::sample_polar(const std::vector<double>& radii,
                                               const std::vector<double>& angles) const {
  const std::size_t nr = radii.size(), na = angles.size();
  std::vector<RVec> out(nr * na);
  if (nr == 0 || na == 0) return out;
  const bool punctured = !domain_.punctures().empty();
  auto near_puncture = [&](cplx z) {
    if (!punctured) return false;
    for (cplx s : domain_.special_points())
      if (s != cplx(0.0) && std::abs(z - s) < 4.0 * domain_.exclusion_radius(s) + 1e-3 * std::abs(s)) return true;
    return false;
  };
  auto nan_vec = [&] { return RVec(RVec::Constant(dim(), std::numeric_limits<double>::quiet_NaN())); };

  // Spine along the first angle.
  std::vector<RVec> spine(nr);
  spine[0] = (*this)(std::polar(radii[0], angles[0]));
  for (std::size_t i = 1; i < nr; ++i) {
    const cplx a = std::polar(radii[i - 1], angles[0]), b = std::polar(radii[i], angles[0]);
    spine[i] = near_puncture(0.5 * (a + b)) ? (*this)(b) : eval_from(a, spine[i - 1], b);
  }
  parallel_for(nr, [&](std::size_t i) {
    RVec x = spine[i];
    out[i * na] = x;
    for (std::size_t j = 1; j < na; ++j) {
      const cplx b = std::polar(radii[i], angles[j]);
      if (!domain_.contains(b)) {
        out[i * na + j] = nan_vec();
        continue;
      }
      if (near_puncture(std::polar(radii[i], 0.5 * (angles[j - 1] + angles[j]))) ||
          !std::isfinite(x[0])) {
        x = (*this)(b);
      } else {
        x = x + integrate_real_part({Curve::arc(radii[i], angles[j - 1], angles[j])});
      }
      out[i * na + j] = x;
    }
  });
  return out;
}

ImmersionField integrate_immersion(const Domain& d, std::shared_ptr<const VectorMap> f, const OneForm& theta, cplx p0,
                                   const RVec& x0, double tol) {
  if (!f) throw ArgumentError("immersion needs a map");
  const ExactnessReport ex = exactness_test(*f, theta, build_ibasis(d), std::max(tol * 10.0, 1e-9));
  if (!ex.real_exact) {
    std::ostringstream os;
    os << "real periods do not vanish:";
    for (const CVec& e : ex.witness.entries) {
      os << " [";
      for (Eigen::Index k = 0; k < e.size(); ++k) os << (k ? ", " : "") << e[k].real();
      os << "]";
    }
    throw PreconditionError(os.str());
  }
  return ImmersionField(d, std::move(f), theta, p0, x0, tol);
}

GeometricResiduals geometric_residuals(const Surface& x, const std::function<CVec(cplx)>& differential,
                                       const Domain& d, const std::vector<cplx>& points, double h_rel) {
  std::vector<GeometricResiduals> per(points.size());
  parallel_for(points.size(), [&](std::size_t idx) {
    const cplx p = points[idx];
    double h = h_rel * std::abs(p);
    const double clear = d.clearance(p);
    if (clear < 10.0 * h) h = clear / 10.0;
    if (h < 1e-12) throw NumericError("finite-difference step collapsed near a puncture");
    const RVec x0 = x(p);
    const RVec xe = x(p + h), xw = x(p - h), xn = x(p + kI * h), xs = x(p - kI * h);
    const RVec xx = (xe - xw) / (2.0 * h), xy = (xn - xs) / (2.0 * h);
    const double nx = xx.norm(), ny = xy.norm();
    GeometricResiduals& r = per[idx];
    const double big = std::max(nx, ny);
    r.conformal = big > 0 ? std::abs(xx.dot(xy)) / std::max(nx * ny, 1e-300) + std::abs(nx - ny) / big
                          : std::numeric_limits<double>::infinity();
    r.harmonic = (xe + xw + xn + xs - 4.0 * x0).norm() / std::max(h * (nx + ny), 1e-300);
    r.invariance = (x(involution(p)) - x0).norm() / std::max(1.0, x0.norm());
    if (differential) {
      const CVec target = differential(p);
      const CVec fd = xx.cast<cplx>() - kI * xy.cast<cplx>();
      r.derivative = (fd - target).norm() / std::max(target.norm(), 1e-300);
    } else {
      r.derivative = std::numeric_limits<double>::quiet_NaN();
    }
  });
  GeometricResiduals out;
  if (!differential) out.derivative = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : per) {
    out.conformal = std::max(out.conformal, r.conformal);
    out.harmonic = std::max(out.harmonic, r.harmonic);
    out.invariance = std::max(out.invariance, r.invariance);
    if (differential) out.derivative = std::max(out.derivative, r.derivative);
  }
  return out;
}

GeometricResiduals geometric_residuals(const ImmersionField& x, const std::vector<cplx>& points, double h_rel) {
  return geometric_residuals(x, [&x](cplx z) { return x.differential(z); }, x.domain(), points, h_rel);
}

std::function<double(cplx)> conformal_factor(std::shared_ptr<const VectorMap> f, const OneForm& theta) {
  return [f = std::move(f), theta](cplx z) { return f->operator()(z).norm() * std::abs(theta(z)) / std::sqrt(2.0); };
}

double path_length(const std::function<double(cplx)>& lambda, const Curve& c, double tol) {
  return integrate_real_adaptive([&](double t) { return lambda(c(t)) * std::abs(c.velocity(t)); }, 0.0, 1.0, tol);
}

CompletenessReport completeness_probe(const std::function<double(cplx)>& lambda, const std::vector<Ray>& rays,
                                      int doublings) {
  if (doublings < 4) throw ArgumentError("completeness probe needs at least 4 doublings");
  CompletenessReport report;
  report.complete = !rays.empty();
  for (const Ray& ray : rays) {
    RayProbe probe;
    const cplx dir = std::polar(1.0, ray.angle);
    auto speed = [&](double s) { return lambda(ray.center + s * dir); };
    double s_prev = ray.start, total = 0.0;
    for (int k = 1; k <= doublings; ++k) {
      const double s = ray.outward ? ray.start * std::ldexp(1.0, k) : ray.start * std::ldexp(1.0, -k);
      const double a = std::min(s_prev, s), b = std::max(s_prev, s);
      total += integrate_real_adaptive(speed, a, b, 1e-11);
      probe.endpoints.push_back(s);
      probe.lengths.push_back(total);
      s_prev = s;
    }
    // Least-squares slope of log L against log s over the second half.
    const std::size_t n = probe.lengths.size(), from = n / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t k = from; k < n; ++k) {
      const double lx = std::log(probe.endpoints[k]), ly = std::log(probe.lengths[k]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++cnt;
    }
    probe.exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    // Divergence: increments over successive doublings do not decay geometrically.
    const double inc_last = probe.lengths[n - 1] - probe.lengths[n - 2];
    const double inc_prev = probe.lengths[n - 2] - probe.lengths[n - 3];
    probe.divergent = inc_prev > 0 && inc_last / inc_prev > 0.75;
    report.complete = report.complete && probe.divergent;
    report.rays.push_back(std::move(probe));
  }
  return report;
}

CurvatureReport total_curvature(const Expr& g, double inner_radius, double tol) {
  const Expr& dg = g.derivative();
  const Rational& rg = g.rational();
  const Rational& rdg = dg.rational();
  auto density = [&](cplx z) {
    const double a = std::norm(rdg(z));
    const double b = 1.0 + std::norm(rg(z));
    const double v = 4.0 * a / (b * b);
    return std::isfinite(v) ? v : 0.0;
  };
  double err_acc = 0.0;
  auto ring = [&](double r) {
    double e = 0.0;
    const double v = integrate_real_adaptive([&](double t) { return density(std::polar(r, t)); }, 0.0, 2.0 * kPi,
                                             tol * 1e-2, &e);
    return v * r;
  };
  auto annulus = [&](double r0, double r1) {
    double e = 0.0;
    const double v = integrate_real_adaptive(ring, r0, r1, tol, &e);
    err_acc += e;
    return v;
  };
  constexpr double kSplit = 10.0;
  CurvatureReport rep;
  const double inner = annulus(inner_radius, kSplit);
  // Beyond the split radius substitute z = 1/w; the area element picks up |z|^4.
  auto ring_w = [&](double r) {
    if (r == 0.0) return 0.0;
    double e = 0.0;
    const double v = integrate_real_adaptive(
        [&](double t) {
          const cplx z = 1.0 / std::polar(r, t);
          return density(z) * std::norm(z) * std::norm(z);
        },
        0.0, 2.0 * kPi, tol * 1e-2, &e);
    return v * r;
  };
  double e_tail = 0.0;
  const double tail = integrate_real_adaptive(ring_w, 0.0, 1.0 / kSplit, tol, &e_tail);
  err_acc += e_tail;

  rep.radii = {10.0, 20.0, 40.0};
  double acc = inner;
  double prev_r = kSplit;
  for (double r : rep.radii) {
    if (r > prev_r) acc += annulus(prev_r, r);
    rep.truncated.push_back(-acc);
    prev_r = r;
  }
  const double d1 = rep.truncated[1] - rep.truncated[0], d2 = rep.truncated[2] - rep.truncated[1];
  if (d1 != 0.0 && d2 != 0.0 && d1 / d2 > 1.0) {
    const double ratio = d1 / d2;  // 2^p for a tail decaying like R^-p
    rep.extrapolated = rep.truncated[2] + d2 / (ratio - 1.0);
  } else {
    rep.extrapolated = rep.truncated[2];
  }
  rep.value = -(inner + tail);
  if (!std::isfinite(rep.value)) throw NumericError("total curvature tail did not converge");
  rep.error = err_acc + std::abs(rep.value - rep.extrapolated);
  return rep;
}

std::vector<DoublePoint> double_point_scan(const Surface& x, const ScanOptions& o) {
  if (o.n_rho < 8 || o.n_theta < 8 || !(o.rho_max > 1.0)) throw ArgumentError("invalid scan resolution");
  const int nr = o.n_rho, na = o.n_theta;
  std::vector<double> radii(nr), angles(na);
  const double dlog = std::log(o.rho_max) / (nr - 1), dth = 2.0 * kPi / na;
  for (int i = 0; i < nr; ++i) radii[i] = std::exp(dlog * i);
  for (int j = 0; j < na; ++j) angles[j] = dth * j;
  const std::vector<RVec> vals = x.sample_polar(radii, angles);
  const int n = x.dim();
  const std::size_t count = vals.size();
  auto id = [na](int i, int j) { return static_cast<std::size_t>(i) * na + ((j % na) + na) % na; };
  auto param = [&](std::size_t v) { return std::polar(radii[v / na], angles[v % na]); };
  auto spacing = [&](std::size_t v) { return radii[v / na] * std::max(dlog, dth); };

  std::vector<double> scale(count, 0.0);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < na; ++j) {
      const std::size_t v = id(i, j);
      double s = 0.0;
      for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        if (i + di < 0 || i + di >= nr) continue;
        s = std::max(s, (vals[v] - vals[id(i + di, j + dj)]).norm());
      }
      if (!(s > 0.0)) throw PreconditionError("sampled map collapses a grid cell: not an immersion");
      scale[v] = s;
    }

  struct Candidate {
    std::size_t p, q;
    double score;
  };
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a][0] < vals[b][0]; });
  std::vector<std::size_t> rank(count);
  for (std::size_t k = 0; k < count; ++k) rank[order[k]] = k;

  std::vector<Candidate> cands;
  auto consider = [&](std::size_t p, std::size_t q) {
    if (scale[p] < scale[q] || (scale[p] == scale[q] && p > q)) return;
    const double reach = std::max(o.eps, 0.5 * (scale[p] + scale[q]));
    const double dist = (vals[p] - vals[q]).norm();
    if (!(dist < reach)) return;
    const cplx zp = param(p), zq = param(q);
    const double sep = 10.0 * std::max(spacing(p), spacing(q));
    if (std::min(std::abs(zp - zq), std::abs(zp - involution(zq))) <= sep) return;
    cands.push_back({p, q, dist / reach});
  };
  for (std::size_t p = 0; p < count; ++p) {
    const double window = std::max(o.eps, scale[p]);
    const double x0 = vals[p][0];
    for (std::size_t k = rank[p] + 1; k < count && vals[order[k]][0] - x0 < window; ++k) consider(p, order[k]);
    for (std::size_t k = rank[p]; k-- > 0 && x0 - vals[order[k]][0] < window;) consider(p, order[k]);
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.score < b.score; });

  std::vector<Candidate> chosen;
  for (const Candidate& c : cands) {
    if (static_cast<int>(chosen.size()) >= o.max_candidates) break;
    const double guard = 20.0 * std::max(spacing(c.p), spacing(c.q));
    bool overlaps = false;
    for (const Candidate& s : chosen) {
      const double same = std::abs(param(c.p) - param(s.p)) + std::abs(param(c.q) - param(s.q));
      const double swapped = std::abs(param(c.p) - param(s.q)) + std::abs(param(c.q) - param(s.p));
      if (std::min(same, swapped) < guard) {
        overlaps = true;
        break;
      }
    }
    if (!overlaps) chosen.push_back(c);
  }

  std::vector<DoublePoint> found(chosen.size(), DoublePoint{0.0, 0.0, -1.0});
  parallel_for(chosen.size(), [&](std::size_t k) {
    const Candidate& c = chosen[k];
    const cplx ap = param(c.p), aq = param(c.q);
    const RVec& xp = vals[c.p];
    const RVec& xq = vals[c.q];
    double u[4] = {ap.real(), ap.imag(), aq.real(), aq.imag()};
    auto objective = [&](const double* w) {
      const cplx p(w[0], w[1]), q(w[2], w[3]);
      return (x.eval_near(ap, xp, p) - x.eval_near(aq, xq, q)).squaredNorm();
    };
    const double sp = std::max(spacing(c.p), spacing(c.q));
    double best = objective(u);
    double step = sp;
    int evals = 0;
    while (step > 1e-10 * sp && evals < 4000 && best > 1e-6 * o.eps * o.eps) {
      bool improved = false;
      for (int d = 0; d < 4 && !improved; ++d)
        for (double sign : {1.0, -1.0}) {
          double w[4] = {u[0], u[1], u[2], u[3]};
          w[d] += sign * step;
          const double val = objective(w);
          ++evals;
          if (val < best) {
            best = val;
            std::copy(w, w + 4, u);
            improved = true;
            break;
          }
        }
      if (!improved) step *= 0.5;
    }
    const cplx p(u[0], u[1]), q(u[2], u[3]);
    const double dist = std::sqrt(best);
    const double sep = 10.0 * sp;
    if (dist < o.eps && std::min(std::abs(p - q), std::abs(p - involution(q))) > sep) found[k] = {p, q, dist};
  });

  std::vector<DoublePoint> out;
  for (const DoublePoint& dp : found) {
    if (dp.distance < 0) continue;
    const double guard = 1e-3 * std::max(std::abs(dp.p), 1.0);
    bool dup = false;
    for (const DoublePoint& e : out)
      if ((std::abs(dp.p - e.p) < guard && std::abs(dp.q - e.q) < guard) ||
          (std::abs(dp.p - e.q) < guard && std::abs(dp.q - e.p) < guard))
        dup = true;
    if (!dup) out.push_back(dp);
  }
  (void)n;
  return out;
}

ProperCertificate properness_certificate(const Surface& x, const std::vector<cplx>& points,
                                         const std::optional<std::function<double(double)>>& bound, double tol) {
  ProperCertificate cert;
  if (!bound) return cert;
  cert.registered = true;
  const std::vector<RVec> vals = x.sample(points);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size(); ++k) margin = std::min(margin, vals[k].norm() - (*bound)(std::abs(points[k])));
  cert.margin = margin;
  cert.holds = margin >= -tol;
  return cert;
}

}  // namespace mw

#include "mw/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "mw/error.hpp"

namespace mw {

namespace {

struct GaussLegendre16 {
  std::array<double, 16> x{};
  std::array<double, 16> w{};

  GaussLegendre16() {
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre16& rule() {
  static const GaussLegendre16 r;
  return r;
}

// Returns the integral and accumulates the L1 size of the integrand.
CVec fixed_level(const Coefficient& c, int n, const Curve& curve, int segments, double* l1) {
  const auto& r = rule();
  CVec acc = CVec::Zero(n);
  double size = 0.0;
  const double h = 1.0 / segments;
  for (int s = 0; s < segments; ++s) {
    const double mid = (s + 0.5) * h;
    for (int k = 0; k < 16; ++k) {
      const double t = mid + 0.5 * h * r.x[k];
      const cplx v = curve.velocity(t);
      const CVec term = c(curve(t)) * v;
      const double wk = 0.5 * h * r.w[k];
      acc += wk * term;
      size += wk * term.norm();
    }
  }
  if (l1) *l1 = size;
  return acc * static_cast<double>(curve.orientation());
}

std::vector<double> flatten(const CVec& v) {
  std::vector<double> out;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    out.push_back(v[k].real());
    out.push_back(v[k].imag());
  }
  return out;
}

}  // namespace

const std::array<double, 16>& gl_nodes() { return rule().x; }
const std::array<double, 16>& gl_weights() { return rule().w; }

CVec integrate_fixed(const Coefficient& c, int n, const Curve& curve, int segments) {
  return fixed_level(c, n, curve, std::max(1, segments), nullptr);
}

QuadResult integrate(const Coefficient& c, int n, const Curve& curve, const QuadOptions& opts) {
  int segments = std::max(1, opts.initial_segments);
  double l1 = 0.0;
  CVec prev = fixed_level(c, n, curve, segments, &l1);
  double err = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= opts.max_levels; ++level) {
    segments *= 2;
    CVec cur = fixed_level(c, n, curve, segments, &l1);
    err = (cur - prev).norm();
    if (!std::isfinite(err)) throw QuadratureError("non-finite integrand along '" + curve.label() + "'", {}, err);
    if (err <= opts.tol * std::max(1.0, l1)) return {cur, err, segments};
    prev = std::move(cur);
  }
  throw QuadratureError("quadrature along '" + curve.label() + "' did not converge after " +
                            std::to_string(opts.max_levels) + " refinements",
                        flatten(prev), err);
}

QuadResult integrate(const Coefficient& c, int n, const Path& path, const QuadOptions& opts) {
  QuadResult total{CVec::Zero(n), 0.0, 0};
  for (const Curve& piece : path) {
    QuadResult r = integrate(c, n, piece, opts);
    total.value += r.value;
    total.error += r.error;
    total.segments += r.segments;
  }
  return total;
}

double integrate_real(const std::function<double(double)>& f, double a, double b, int segments) {
  const auto& r = rule();
  const double h = (b - a) / segments;
  double acc = 0.0;
  for (int s = 0; s < segments; ++s) {
    const double mid = a + (s + 0.5) * h;
    for (int k = 0; k < 16; ++k) acc += 0.5 * h * r.w[k] * f(mid + 0.5 * h * r.x[k]);
  }
  return acc;
}

double integrate_real_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                               double* error, int max_levels) {
  int segments = 1;
  double prev = integrate_real(f, a, b, segments);
  for (int level = 1; level <= max_levels; ++level) {
    segments *= 2;
    const double cur = integrate_real(f, a, b, segments);
    const double err = std::abs(cur - prev);
    if (err <= tol * std::max(1.0, std::abs(cur))) {
      if (error) *error = err;
      return cur;
    }
    prev = cur;
  }
  throw QuadratureError("real quadrature did not converge", {prev}, std::abs(prev));
}

}  // namespace mw

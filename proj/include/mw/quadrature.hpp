#pragma once

#include <array>
#include <functional>

#include "mw/domain.hpp"
#include "mw/types.hpp"

namespace mw {

/// Coefficient c(z) of a (vector) 1-form c(z) dz.
using Coefficient = std::function<CVec(cplx)>;

struct QuadOptions {
  double tol = 1e-10;
  int initial_segments = 2;
  int max_levels = 14;
};

struct QuadResult {
  CVec value;
  double error = 0.0;
  int segments = 0;  ///< segments used by the accepted level
};

/// Composite 16-point Gauss-Legendre over the curve parameter with dyadic
/// refinement until successive levels differ by less than tol (scaled by the
/// L1 size of the integrand when that exceeds 1).  Throws QuadratureError.
QuadResult integrate(const Coefficient& c, int n, const Curve& curve, const QuadOptions& opts = {});
QuadResult integrate(const Coefficient& c, int n, const Path& path, const QuadOptions& opts = {});

/// Fixed composite rule with the given number of segments.
CVec integrate_fixed(const Coefficient& c, int n, const Curve& curve, int segments);

/// Plain composite Gauss-Legendre of a real function on [a, b].
double integrate_real(const std::function<double(double)>& f, double a, double b, int segments);
/// Adaptive version of integrate_real; relative-or-absolute tolerance.
double integrate_real_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                               double* error = nullptr, int max_levels = 14);

/// 16-point Gauss-Legendre nodes and weights on [-1, 1].
const std::array<double, 16>& gl_nodes();
const std::array<double, 16>& gl_weights();

}  // namespace mw

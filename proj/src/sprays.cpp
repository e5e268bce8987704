#include "mw/sprays.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "mw/error.hpp"

namespace mw {

CVec flow(int j, int k, cplx t, const CVec& z) {
  if (j == k) throw ArgumentError("flow axes must differ");
  if (j < 0 || k < 0 || j >= z.size() || k >= z.size()) throw ArgumentError("flow axis out of range");
  CVec out = z;
  const cplx c = std::cos(t), s = std::sin(t);
  out[j] = z[j] * c - z[k] * s;
  out[k] = z[j] * s + z[k] * c;
  return out;
}

Spray::Spray(std::shared_ptr<const VectorMap> base, std::vector<SprayFactor> factors)
    : base_(std::move(base)), factors_(std::move(factors)) {
  if (!base_) throw ArgumentError("spray needs a base map");
  const Grid probe = Grid::log_polar(8, 8, 0.5, 2.0);
  for (const SprayFactor& f : factors_) {
    if (f.j == f.k || f.j < 0 || f.k < 0 || f.j >= dim() || f.k >= dim())
      throw ArgumentError("spray factor axes invalid");
    if (invariance_residual(f.h, probe).relative > 1e-10)
      throw ValidationError("spray coefficient " + f.h.str() + " is not invariant");
  }
}

CVec Spray::operator()(cplx p, const CVec& t) const {
  if (t.size() != parameter_count()) throw ArgumentError("spray parameter count mismatch");
  CVec z = (*base_)(p);
  for (int i = parameter_count() - 1; i >= 0; --i) {
    const SprayFactor& f = factors_[i];
    if (t[i] != cplx(0.0)) z = flow(f.j, f.k, t[i] * f.h.eval_fast(p), z);
  }
  return z;
}

std::shared_ptr<const VectorMap> Spray::at(const RVec& t) const {
  const CVec tc = t.cast<cplx>();
  Spray self = *this;
  return std::make_shared<FunctionMap>(dim(), [self, tc](cplx p) { return self(p, tc); });
}

Expr rational_peak(cplx c, double w) {
  if (!(w > 0.0)) throw ArgumentError("peak width must be positive");
  const Expr u = (Expr::z() - Expr(c)) / Expr(w);
  return symmetrize(Expr(1.0) / (Expr(1.0) + u.pow(2)));
}

Expr laurent_mode(int k, double phase) { return symmetrize(Expr(std::polar(1.0, phase)) * Expr::z().pow(k)); }

RVec stack_periods(const PeriodVector& p) {
  if (p.size() == 0) return RVec();
  const int n = static_cast<int>(p.entries[0].size());
  RVec out(n * (2 * static_cast<int>(p.size()) - 1));
  out.head(n) = p.entries[0].real();
  for (std::size_t j = 1; j < p.size(); ++j) {
    out.segment(n * (2 * j - 1), n) = p.entries[j].real();
    out.segment(n * (2 * j), n) = p.entries[j].imag();
  }
  return out;
}

namespace {

// Stacked real periods of F(., t) with a frozen composite rule per curve.
RVec stacked_fixed(const Spray& s, const OneForm& theta, const IBasis& basis, const RVec& t,
                   const std::vector<int>& segments) {
  const CVec tc = t.cast<cplx>();
  const Coefficient c = [&](cplx z) -> CVec { return s(z, tc) * theta(z); };
  PeriodVector p;
  for (std::size_t j = 0; j < basis.size(); ++j) p.entries.push_back(integrate_fixed(c, s.dim(), basis.plus[j], segments[j]));
  return stack_periods(p);
}

PeriodVector spray_periods(const Spray& s, const OneForm& theta, const IBasis& basis, const RVec& t, double tol) {
  const CVec tc = t.cast<cplx>();
  const Coefficient c = [&](cplx z) -> CVec { return s(z, tc) * theta(z); };
  return period_map(c, s.dim(), basis, tol);
}

RVec singular_values(const RMat& m) {
  if (m.size() == 0) return RVec();
  Eigen::JacobiSVD<RMat> svd(m);
  return svd.singularValues();
}

}  // namespace

JacobianReport period_jacobian(const Spray& s, const OneForm& theta, const IBasis& basis, double step,
                               const RVec* at, double tol) {
  const int m = s.parameter_count();
  const RVec t0 = at ? *at : RVec(RVec::Zero(m));
  const PeriodVector ref = spray_periods(s, theta, basis, t0, tol);
  // Freeze the rule so the differences see a smooth function of t.
  std::vector<int> segments;
  for (int seg : ref.segments) segments.push_back(seg * 2);
  const int rows = s.dim() * (2 * static_cast<int>(basis.size()) - 1);
  JacobianReport out;
  out.matrix = RMat::Zero(rows, m);
  for (int i = 0; i < m; ++i) {
    auto central = [&](double h) {
      RVec tp = t0, tm = t0;
      tp[i] += h;
      tm[i] -= h;
      return RVec((stacked_fixed(s, theta, basis, tp, segments) - stacked_fixed(s, theta, basis, tm, segments)) /
                  (2.0 * h));
    };
    const RVec d1 = central(step);
    const RVec d2 = central(0.5 * step);
    out.matrix.col(i) = (4.0 * d2 - d1) / 3.0;
  }
  out.singular_values = singular_values(out.matrix);
  return out;
}

DominationReport domination_check(const JacobianReport& j, double rank_tol) {
  DominationReport r;
  const auto rows = j.matrix.rows(), cols = j.matrix.cols();
  if (j.singular_values.size() == 0) return r;
  r.sigma_max = j.singular_values[0];
  // Surjectivity needs rows singular values; fewer columns than rows cannot dominate.
  r.sigma_min = cols < rows ? 0.0 : j.singular_values[rows - 1];
  r.dominating = r.sigma_max > 0.0 && r.sigma_min > rank_tol * r.sigma_max;
  return r;
}

DominationReport domination_check(const Spray& s, const OneForm& theta, const IBasis& basis) {
  return domination_check(period_jacobian(s, theta, basis));
}

ClosureResult close_periods(const Spray& s, const OneForm& theta, const IBasis& basis, const RVec& target,
                            const ClosureOptions& opts, const std::function<void(const ClosureStep&)>& on_step) {
  const int m = s.parameter_count();
  RVec t = RVec::Zero(m);
  auto residual = [&](const RVec& at) {
    return RVec(stack_periods(spray_periods(s, theta, basis, at, opts.quad_tol)) - target);
  };

  const long rows = s.dim() * (2 * static_cast<long>(basis.size()) - 1);
  if (target.size() != rows) throw ArgumentError("target size does not match the stacked period size");

  JacobianReport jac = period_jacobian(s, theta, basis, opts.fd_step, &t, opts.quad_tol);
  if (!domination_check(jac, opts.rank_tol).dominating)
    throw PreconditionError("spray is not period dominating at the core");

  ClosureResult result;
  std::vector<double> history;
  RVec g = residual(t);
  double radius = opts.trust_radius;
  double last_step = 0.0;
  for (int iter = 0;; ++iter) {
    const double gmax = g.cwiseAbs().maxCoeff();
    history.push_back(g.norm());
    ClosureStep rec{iter, g.norm(), last_step};
    result.log.push_back(rec);
    if (on_step) on_step(rec);
    if (gmax < opts.tol) {
      result.parameters = t;
      result.residual = gmax;
      return result;
    }
    if (iter >= opts.max_iter)
      throw IterationError("period closing did not converge in " + std::to_string(opts.max_iter) + " iterations",
                           history);
    if (iter > 0) jac = period_jacobian(s, theta, basis, opts.fd_step, &t, opts.quad_tol);
    const DominationReport dom = domination_check(jac, opts.rank_tol);
    if (!dom.dominating) throw DominationLostError("period domination lost during closing", history);

    Eigen::JacobiSVD<RMat> svd(jac.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
    RVec delta = -svd.solve(g);
    if (delta.norm() > radius) delta *= radius / delta.norm();

    const double phi = 0.5 * g.squaredNorm();
    double alpha = 1.0;
    RVec trial_g;
    bool accepted = false;
    for (int k = 0; k < 40; ++k, alpha *= 0.5) {
      trial_g = residual(t + alpha * delta);
      if (0.5 * trial_g.squaredNorm() <= phi * (1.0 - 2.0 * opts.armijo * alpha)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) throw IterationError("line search failed to decrease the period residual", history);
    t += alpha * delta;
    g = trial_g;
    last_step = alpha * delta.norm();
    if (alpha == 1.0 && delta.norm() >= radius * (1.0 - 1e-12)) radius *= 2.0;
    else if (alpha < 1.0) radius = std::max(alpha * delta.norm(), 1e-6);
  }
}

NonflatReport nonflat_check(const VectorMap& f, const std::vector<cplx>& samples, double ratio) {
  if (samples.size() < 2) throw ArgumentError("nonflat check needs at least 2 samples");
  CMat rows(static_cast<Eigen::Index>(samples.size()), f.dim());
  for (std::size_t i = 0; i < samples.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = f(samples[i]).transpose();
  Eigen::JacobiSVD<CMat> svd(rows);
  const RVec sv = svd.singularValues();
  NonflatReport r;
  r.first_singular_value = sv[0];
  r.second_singular_value = sv.size() > 1 ? sv[1] : 0.0;
  if (!(r.first_singular_value > 0.0)) throw ArgumentError("degenerate sample set: the map vanishes on every sample");
  r.nonflat = r.second_singular_value > ratio * r.first_singular_value;
  return r;
}

int winding_number(const std::function<cplx(cplx)>& h, const Curve& c, double clearance) {
  auto value = [&](double t) {
    const cplx v = h(c(t));
    if (!(std::abs(v) > clearance))
      throw PreconditionError("function comes within the clearance of 0 on '" + c.label() + "'");
    return v;
  };
  double t = 0.0, dt = 1.0 / 64.0;
  cplx prev = value(0.0);
  double total = 0.0;
  while (t < 1.0) {
    const double step = std::min(dt, 1.0 - t);
    const cplx next = value(t + step);
    const double darg = std::arg(next / prev);
    if (std::abs(darg) >= 0.5 * kPi) {
      dt = 0.5 * step;
      if (dt < 1e-14) throw NumericError("argument unwrapping failed on '" + c.label() + "'");
      continue;
    }
    total += darg;
    t += step;
    prev = next;
    if (std::abs(darg) < 0.125 * kPi) dt = std::min(2.0 * step, 1.0 / 16.0);
  }
  const double turns = total / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6) throw NumericError("curve does not close up in the argument");
  return c.orientation() * static_cast<int>(rounded);
}

int winding_number(const Expr& h, const Curve& c, double clearance) {
  return winding_number([&h](cplx z) { return h.eval_fast(z); }, c, clearance);
}

}  // namespace mw

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mw/analytic.hpp"
#include "mw/periods.hpp"

namespace mw {

/// Flow of V_{j,k} = z_j d/dz_k - z_k d/dz_j (0-based axes): a complex
/// rotation in the (j, k) plane, which preserves sum z_i^2.
CVec flow(int j, int k, cplx t, const CVec& z);

struct SprayFactor {
  int j = 0;
  int k = 1;
  Expr h;  ///< invariant coefficient function
};

/// F(p, t) = phi^1_{t_1 h_1(p)} o ... o phi^m_{t_m h_m(p)} (f(p)).
class Spray {
 public:
  Spray(std::shared_ptr<const VectorMap> base, std::vector<SprayFactor> factors);

  CVec operator()(cplx p, const CVec& t) const;
  CVec operator()(cplx p, const RVec& t) const { return (*this)(p, CVec(t.cast<cplx>())); }
  int dim() const { return base_->dim(); }
  int parameter_count() const { return static_cast<int>(factors_.size()); }
  const VectorMap& base() const { return *base_; }
  const std::vector<SprayFactor>& factors() const { return factors_; }
  /// The map p -> F(p, t); keeps the spray alive.
  std::shared_ptr<const VectorMap> at(const RVec& t) const;

 private:
  std::shared_ptr<const VectorMap> base_;
  std::vector<SprayFactor> factors_;
};

/// Pi_I of 1 / (1 + ((z - c)/w)^2): an invariant holomorphic peak near c.
Expr rational_peak(cplx c, double w);
/// Pi_I of e^{i phase} z^k.
Expr laurent_mode(int k, double phase);

/// Stacked real period coordinates [Re P_1; Re P_2; Im P_2; ...].
RVec stack_periods(const PeriodVector& p);

struct JacobianReport {
  RMat matrix;               ///< rows n(2l-1), columns m
  RVec singular_values;      ///< descending
};

/// Central differences (Richardson-extrapolated) of the stacked real periods
/// in each real parameter direction at `at` (default 0).
JacobianReport period_jacobian(const Spray& s, const OneForm& theta, const IBasis& basis, double step = 1e-5,
                               const RVec* at = nullptr, double tol = 1e-12);

struct DominationReport {
  bool dominating = false;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

DominationReport domination_check(const JacobianReport& j, double rank_tol = 1e-6);
DominationReport domination_check(const Spray& s, const OneForm& theta, const IBasis& basis);

struct ClosureStep {
  int iter = 0;
  double residual = 0.0;
  double step = 0.0;
};

struct ClosureResult {
  RVec parameters;
  double residual = 0.0;  ///< max |G| at the returned parameters
  std::vector<ClosureStep> log;
};

struct ClosureOptions {
  double tol = 1e-8;
  int max_iter = 20;
  double trust_radius = 0.5;
  double armijo = 1e-4;
  double fd_step = 1e-5;
  double quad_tol = 1e-12;
  double rank_tol = 1e-6;
};

/// Damped Gauss-Newton on G(t) = stacked real periods of F(., t) - target,
/// over real parameters t.  Throws PreconditionError (not dominating),
/// IterationError or DominationLostError.
ClosureResult close_periods(const Spray& s, const OneForm& theta, const IBasis& basis, const RVec& target,
                            const ClosureOptions& opts = {},
                            const std::function<void(const ClosureStep&)>& on_step = {});

struct NonflatReport {
  bool nonflat = false;
  double first_singular_value = 0.0;
  double second_singular_value = 0.0;
};

NonflatReport nonflat_check(const VectorMap& f, const std::vector<cplx>& samples, double ratio = 1e-8);

/// Winding number of h along c by argument tracking with per-step argument
/// change below pi/2.  Throws PreconditionError if |h| <= clearance on c.
int winding_number(const std::function<cplx(cplx)>& h, const Curve& c, double clearance = 1e-8);
int winding_number(const Expr& h, const Curve& c, double clearance = 1e-8);

}  // namespace mw

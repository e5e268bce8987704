#include "mw/rational.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "mw/error.hpp"

namespace mw {

namespace {

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  cplx b = n >= 0 ? z : 1.0 / z;
  for (unsigned k = static_cast<unsigned>(n >= 0 ? n : -n); k; k >>= 1) {
    if (k & 1u) r *= b;
    b *= b;
  }
  return r;
}

// Divide p by (z - r), discarding the remainder.
Poly deflate(const Poly& p, cplx r) {
  const int d = p.degree();
  Poly q;
  q.c.assign(d, 0.0);
  cplx acc = 0.0;
  for (int k = d; k >= 1; --k) {
    acc = acc * r + p.c[k];
    q.c[k - 1] = acc;
  }
  return q;
}

// Strip factors of z from the low end; returns how many were removed.
int strip_low(Poly& p) {
  int k = 0;
  while (k < static_cast<int>(p.c.size()) && p.c[k] == cplx(0.0)) ++k;
  p.c.erase(p.c.begin(), p.c.begin() + k);
  return k;
}

cplx polish_root(const Poly& p, cplx r) {
  Poly dp;
  for (int k = 1; k <= p.degree(); ++k) dp.c.push_back(static_cast<double>(k) * p.c[k]);
  for (int it = 0; it < 4; ++it) {
    const cplx d = dp(r);
    if (std::abs(d) == 0.0) break;
    const cplx step = p(r) / d;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    r -= step;
  }
  return r;
}

}  // namespace

cplx Poly::operator()(cplx z) const {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Poly::magnitude(cplx z) const {
  double acc = 0.0;
  const double m = std::abs(z);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * m + std::abs(*it);
  return acc;
}

void Poly::trim() {
  double big = 0.0;
  for (cplx v : c) big = std::max(big, std::abs(v));
  for (cplx& v : c)
    if (std::abs(v) <= 1e-14 * big) v = 0.0;
  while (!c.empty() && c.back() == cplx(0.0)) c.pop_back();
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
  for (std::size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
  for (std::size_t k = 0; k < b.c.size(); ++k) r.c[k] += b.c[k];
  r.trim();
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (cplx(-1.0) * b); }

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  if (a.c.empty() || b.c.empty()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.trim();
  return r;
}

Poly operator*(cplx s, const Poly& a) {
  Poly r = a;
  for (cplx& v : r.c) v *= s;
  r.trim();
  return r;
}

std::vector<cplx> poly_roots(const Poly& p) {
  const int d = p.degree();
  if (d < 1) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < d; ++k) companion(0, k) = -p.c[d - 1 - k] / p.c[d];
  for (int k = 1; k < d; ++k) companion(k, k - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<cplx> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + d);
  return roots;
}

Rational::Rational(Poly num, Poly den, int shift) : num_(std::move(num)), den_(std::move(den)), shift_(shift) {
  canonicalize();
}

Rational Rational::constant(cplx c) { return Rational(Poly{{c}}, Poly{{cplx(1.0)}}, 0); }

Rational Rational::variable() { return Rational(Poly{{cplx(1.0)}}, Poly{{cplx(1.0)}}, 1); }

void Rational::canonicalize() {
  num_.trim();
  den_.trim();
  if (den_.is_zero()) throw DomainError("rational function with identically zero denominator");
  if (num_.is_zero()) {
    den_ = Poly{{cplx(1.0)}};
    shift_ = 0;
    return;
  }
  shift_ += strip_low(num_);
  shift_ -= strip_low(den_);

  if (num_.degree() >= 1 && den_.degree() >= 1) {
    auto roots = poly_roots(den_);
    // Cluster numerically split multiple roots; the cluster mean is accurate.
    std::vector<std::pair<cplx, int>> clusters;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t a = 0; a < roots.size(); ++a) {
      if (used[a]) continue;
      cplx sum = roots[a];
      int count = 1;
      used[a] = true;
      for (std::size_t b = a + 1; b < roots.size(); ++b) {
        if (!used[b] && std::abs(roots[b] - roots[a]) < 1e-5 * std::max(1.0, std::abs(roots[a]))) {
          used[b] = true;
          sum += roots[b];
          ++count;
        }
      }
      cplx r = sum / static_cast<double>(count);
      if (count == 1) r = polish_root(den_, r);
      clusters.emplace_back(r, count);
    }
    for (auto [r, mult] : clusters) {
      for (int k = 0; k < mult && num_.degree() >= 1 && den_.degree() >= 1; ++k) {
        if (std::abs(num_(r)) > 1e-9 * num_.magnitude(r)) break;
        if (std::abs(den_(r)) > 1e-9 * den_.magnitude(r)) break;
        num_ = deflate(num_, r);
        den_ = deflate(den_, r);
        num_.trim();
        den_.trim();
      }
    }
  }
  // Monic denominator.
  const cplx lead = den_.c.back();
  for (cplx& v : den_.c) v /= lead;
  for (cplx& v : num_.c) v /= lead;
}

cplx Rational::operator()(cplx z) const {
  if (num_.is_zero()) return 0.0;
  return ipow(z, shift_) * num_(z) / den_(z);
}

std::vector<cplx> Rational::poles() const {
  auto p = poly_roots(den_);
  for (int k = 0; k < -shift_; ++k) p.push_back(0.0);
  return p;
}

std::vector<cplx> Rational::zeros() const {
  auto z = poly_roots(num_);
  for (int k = 0; k < shift_; ++k) z.push_back(0.0);
  return z;
}

int Rational::order_at(cplx p, double tol) const {
  if (num_.is_zero()) return 0;
  if (std::abs(p) <= tol) return shift_;
  int order = 0;
  for (cplx r : poly_roots(num_))
    if (std::abs(r - p) <= tol * std::max(1.0, std::abs(p))) ++order;
  for (cplx r : poly_roots(den_))
    if (std::abs(r - p) <= tol * std::max(1.0, std::abs(p))) --order;
  return order;
}

Rational Rational::operator-() const {
  Rational r = *this;
  for (cplx& v : r.num_.c) v = -v;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const int m = std::min(a.shift_, b.shift_);
  Poly za, zb;
  za.c.assign(a.shift_ - m, 0.0);
  za.c.push_back(1.0);
  zb.c.assign(b.shift_ - m, 0.0);
  zb.c.push_back(1.0);
  bool same_den = a.den_.c.size() == b.den_.c.size();
  for (std::size_t k = 0; same_den && k < a.den_.c.size(); ++k)
    same_den = std::abs(a.den_.c[k] - b.den_.c[k]) <= 1e-15 * std::max(1.0, std::abs(a.den_.c[k]));
  if (same_den) return Rational(za * a.num_ + zb * b.num_, a.den_, m);
  return Rational(za * a.num_ * b.den_ + zb * b.num_ * a.den_, a.den_ * b.den_, m);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (a.is_zero() || b.is_zero()) return Rational();
  return Rational(a.num_ * b.num_, a.den_ * b.den_, a.shift_ + b.shift_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw DomainError("division by the zero function");
  if (a.is_zero()) return Rational();
  return Rational(a.num_ * b.den_, a.den_ * b.num_, a.shift_ - b.shift_);
}

Rational Rational::pow(int n) const {
  if (n == 0) return constant(1.0);
  if (is_zero()) {
    if (n < 0) throw DomainError("negative power of the zero function");
    return Rational();
  }
  Rational base = n > 0 ? *this : Rational(den_, num_, -shift_);
  Rational result = constant(1.0);
  for (unsigned k = static_cast<unsigned>(n > 0 ? n : -n); k; k >>= 1) {
    if (k & 1u) result = result * base;
    if (k > 1) base = base * base;
  }
  return result;
}

Rational Rational::bar_pullback() const {
  if (is_zero()) return Rational();
  // conj(p(-1/conj z)) = z^{-d} * q(z), q_j = conj(c_{d-j}) (-1)^{d-j}
  auto reflect = [](const Poly& p) {
    const int d = p.degree();
    Poly q;
    q.c.resize(d + 1);
    for (int j = 0; j <= d; ++j) {
      const int k = d - j;
      q.c[j] = std::conj(p.c[k]) * ((k % 2) ? -1.0 : 1.0);
    }
    return q;
  };
  const int sign = (shift_ % 2 != 0) ? -1 : 1;
  Poly qn = reflect(num_);
  Poly qd = reflect(den_);
  return Rational(cplx(sign) * qn, qd, -shift_ - num_.degree() + den_.degree());
}

}  // namespace mw

#pragma once

// Double-double ("dd") arithmetic: an unevaluated sum hi + lo carrying about
// 32 significant digits. Used where an identity is checked through a sum whose
// terms are up to ~1e10 larger than its value (disentangled products).

#include <cmath>
#include <complex>
#include <vector>

namespace coherent::dd {

struct Real {
  double hi = 0.0;
  double lo = 0.0;
};

inline Real quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline Real two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

#if defined(FP_FAST_FMA)
inline Real two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}
#else
// Dekker's product; valid without FMA contraction.
inline Real two_prod(double a, double b) {
  constexpr double split = 134217729.0;  // 2^27 + 1
  const double p = a * b;
  const double ca = split * a;
  const double ahi = ca - (ca - a);
  const double alo = a - ahi;
  const double cb = split * b;
  const double bhi = cb - (cb - b);
  const double blo = b - bhi;
  return {p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo};
}
#endif

inline Real operator+(Real x, Real y) {
  Real s = two_sum(x.hi, y.hi);
  const Real t = two_sum(x.lo, y.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline Real operator-(Real x) { return {-x.hi, -x.lo}; }
inline Real operator-(Real x, Real y) { return x + (-y); }

inline Real operator*(Real x, Real y) {
  Real p = two_prod(x.hi, y.hi);
  p.lo += x.hi * y.lo + x.lo * y.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline Real operator*(Real x, double d) {
  Real p = two_prod(x.hi, d);
  p.lo += x.lo * d;
  return quick_two_sum(p.hi, p.lo);
}

inline Real operator/(Real x, double d) {
  const double q1 = x.hi / d;
  const Real r = x - Real{q1, 0.0} * d;
  const double q2 = r.hi / d;
  const Real r2 = r - Real{q2, 0.0} * d;
  const double q3 = r2.hi / d;
  return quick_two_sum(q1, q2) + Real{q3, 0.0};
}

/// sqrt(n) to dd precision (one Newton correction on the double root).
inline Real sqrt(double n) {
  if (n <= 0.0) return {};
  const double s = std::sqrt(n);
  const Real sq = two_prod(s, s);
  const double residual = ((n - sq.hi) - sq.lo);
  return quick_two_sum(s, residual / (2.0 * s));
}

struct Complex {
  Real re;
  Real im;

  std::complex<double> to_double() const { return {re.hi + re.lo, im.hi + im.lo}; }
};

inline Complex from(std::complex<double> z) { return {{z.real(), 0.0}, {z.imag(), 0.0}}; }

inline Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }

inline Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline Complex operator*(const Complex& a, Real r) { return {a.re * r, a.im * r}; }
inline Complex operator/(const Complex& a, double d) { return {a.re / d, a.im / d}; }

/// Row-major dense dd matrix.
class Matrix {
 public:
  explicit Matrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}
  int dim() const { return n_; }
  Complex& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  const Complex& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

 private:
  int n_;
  std::vector<Complex> data_;
};

}  // namespace coherent::dd

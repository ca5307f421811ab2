#pragma once

// Scalar special functions for the extended operators:
//   f(t) = (e^{it} - 1) / (it),  g(t) = (e^{it} - (1 + it)) / t^2,
// associated Laguerre polynomials, and an Abel-summation routine for the
// regularized trace Sum_n e^{itn}.

#include "coherent/matrix_core.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace coherent {

/// Below this |t| f and g are evaluated from their power series.
inline constexpr double kPhaseSeriesSwitch = 1e-3;

namespace detail {

inline constexpr int kPhaseSeriesTerms = 8;

// Sum_{k<terms} (it)^k / (k + shift)!
inline Complex phase_series(double t, int shift) {
  Complex power{1.0, 0.0};
  double factorial = 1.0;
  for (int j = 2; j <= shift; ++j) factorial *= j;
  Complex sum{};
  for (int k = 0; k < kPhaseSeriesTerms; ++k) {
    sum += power / factorial;
    power *= Complex{0.0, t};
    factorial *= static_cast<double>(k + 1 + shift);
  }
  return sum;
}

}  // namespace detail

inline Complex f_series(double t) { return detail::phase_series(t, 1); }
inline Complex g_series(double t) { return -detail::phase_series(t, 2); }

namespace detail {

// e^{it} - 1 with the real part written as -2 sin^2(t/2) to avoid cancellation.
inline Complex expm1_i(double t) {
  const double half = std::sin(0.5 * t);
  return {-2.0 * half * half, std::sin(t)};
}

}  // namespace detail

inline Complex f_direct(double t) {
  return detail::expm1_i(t) / Complex{0.0, t};
}

inline Complex g_direct(double t) {
  return (detail::expm1_i(t) - Complex{0.0, t}) / (t * t);
}

inline Complex f_of_t(double t) {
  return std::abs(t) < kPhaseSeriesSwitch ? f_series(t) : f_direct(t);
}

inline Complex g_of_t(double t) {
  return std::abs(t) < kPhaseSeriesSwitch ? g_series(t) : g_direct(t);
}

/// |f(t)|^2 = (sin(t/2) / (t/2))^2, evaluated without cancellation.
inline double abs_f_squared(double t) {
  if (std::abs(t) < kPhaseSeriesSwitch) return std::norm(f_series(t));
  const double s = std::sin(0.5 * t) / (0.5 * t);
  return s * s;
}

struct PhaseKernelValue {
  double t = 0.0;
  Complex f;
  Complex g;
  double abs_f_sq = 0.0;
};

inline PhaseKernelValue phase_kernel(double t) {
  return {t, f_of_t(t), g_of_t(t), abs_f_squared(t)};
}

/// L_n^{(alpha)}(x) by the forward three-term recurrence.
inline double laguerre_assoc(int n, int alpha, double x) {
  if (n < 0 || alpha < 0)
    throw PreconditionError(
        detail::concat("laguerre_assoc: need n >= 0 and alpha >= 0, got n = ", n, ", alpha = ", alpha));
  if (!(x >= 0.0) || !std::isfinite(x))
    throw PreconditionError(detail::concat("laguerre_assoc: need finite x >= 0, got ", x));
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// True when t lies within a relative 1e-12 of a multiple of 2 pi.
inline bool near_multiple_of_two_pi(double t) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double k = std::round(t / two_pi);
  return std::abs(t - k * two_pi) <= 1e-12 * std::max(1.0, std::abs(t));
}

struct AbelSchedule {
  int k_first = 4;
  int k_last = 12;
  // Partial sums stop once r^n drops below 1e-17.
  double tail = 1e-17;
};

/// Damped partial sum Sum_n r^n e^{itn}, truncated where r^n < tail.
inline Complex damped_phase_sum(double t, double r, double tail = 1e-17) {
  const auto terms = static_cast<long>(std::ceil(std::log(tail) / std::log(r)));
  const Complex step = r * std::polar(1.0, t);
  Complex term{1.0, 0.0};
  Complex sum{};
  Complex carry{};  // Kahan compensation
  for (long n = 0; n < terms; ++n) {
    const Complex y = term - carry;
    const Complex s = sum + y;
    carry = (s - sum) - y;
    sum = s;
    term *= step;
  }
  return sum;
}

/// Abel sum of Sum_{n>=0} e^{itn}: damped sums at r_k = 1 - 2^{-k},
/// Richardson-extrapolated to r -> 1 (the damped sum is analytic in 1 - r).
inline Complex abel_trace(double t, const AbelSchedule& schedule = {}) {
  if (!std::isfinite(t)) throw PreconditionError("abel_trace: t must be finite");
  if (near_multiple_of_two_pi(t))
    throw DomainError(detail::concat("abel_trace: Sum e^{itn} diverges under Abel summation at t = ", t,
                                     " (t is a multiple of 2 pi)"));
  const int levels = schedule.k_last - schedule.k_first + 1;
  if (levels < 1) throw PreconditionError("abel_trace: empty damping schedule");
  // table[j] holds the j-times extrapolated value for the current row.
  std::vector<Complex> table(levels);
  std::vector<Complex> row(levels);
  for (int i = 0; i < levels; ++i) {
    const double h = std::ldexp(1.0, -(schedule.k_first + i));
    row[0] = damped_phase_sum(t, 1.0 - h, schedule.tail);
    for (int j = 1; j <= i; ++j) {
      const double factor = std::ldexp(1.0, j) - 1.0;
      row[j] = row[j - 1] + (row[j - 1] - table[j - 1]) / factor;
    }
    std::copy(row.begin(), row.begin() + i + 1, table.begin());
  }
  return table[levels - 1];
}

}  // namespace coherent

#pragma once

// Coherent (displacement) operators U(z) = exp(z a^dagger - conj(z) a) and
// coherent states |z> = U(z)|0>.

#include "coherent/double_double.hpp"
#include "coherent/matrix_core.hpp"
#include "coherent/oscillator_algebra.hpp"
#include "coherent/scalar_kernels.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

namespace coherent {

struct DisplacementParam {
  Complex z;
};

/// Normal: creation factor leftmost. Antinormal: annihilation factor leftmost.
enum class DisentangleForm { Normal, Antinormal };

inline const char* to_string(DisentangleForm form) {
  return form == DisentangleForm::Normal ? "normal" : "antinormal";
}

inline ComplexMatrix displacement_generator(Complex z, const LadderSet& ladder) {
  return z * ladder.a_dag - std::conj(z) * ladder.a;
}

/// expm_skew(z a^dagger - conj(z) a).
inline ComplexMatrix displacement_exact(DisplacementParam p, const TruncationConfig& cfg) {
  return expm_skew(displacement_generator(p.z, build_ladder(cfg)));
}

namespace detail {

enum class ShiftKind { Raise, Lower };  // exponent c a^dagger or c a

// exp(c a^dagger) (lower triangular) or exp(c a) (upper triangular) by the
// finite series, entry by entry in dd precision:
// E(i, j) = E(i, j-1) c sqrt(j) / (j - i) for exp(c a), transposed for exp(c a^dagger).
inline dd::Matrix shift_exponential_dd(Complex c, ShiftKind kind, int dim) {
  std::vector<dd::Complex> step(dim);
  const dd::Complex cd = dd::from(c);
  for (int j = 1; j < dim; ++j) step[j] = cd * dd::sqrt(static_cast<double>(j));
  dd::Matrix e(dim);
  for (int i = 0; i < dim; ++i) {
    dd::Complex entry = dd::from(Complex{1.0, 0.0});
    e(i, i) = entry;
    for (int j = i + 1; j < dim; ++j) {
      entry = (entry * step[j]) / static_cast<double>(j - i);
      if (kind == ShiftKind::Lower) e(i, j) = entry;
      else e(j, i) = entry;
    }
  }
  return e;
}

// scale * exp(left) * diag(phase) * exp(right) for one raising and one lowering
// factor. Disentangled products cancel heavily (the terms of an antinormal
// product exceed its value by ~1e10 at |z| = 2, n ~ 30), so the factors, the
// phases and the accumulation are all carried in dd precision.
inline ComplexMatrix disentangled_product(Complex scale, Complex left, ShiftKind left_kind,
                                          std::optional<Complex> phase_step, Complex right,
                                          ShiftKind right_kind, int dim) {
  dd::Matrix l = shift_exponential_dd(left, left_kind, dim);
  const dd::Matrix r = shift_exponential_dd(right, right_kind, dim);
  if (phase_step) {
    // e^{itn} as powers of e^{it}: consistent with a single t to dd precision.
    std::vector<dd::Complex> phase(dim);
    phase[0] = dd::from(Complex{1.0, 0.0});
    const dd::Complex unit = dd::from(*phase_step);
    for (int n = 1; n < dim; ++n) phase[n] = phase[n - 1] * unit;
    for (int i = 0; i < dim; ++i)
      for (int n = 0; n < dim; ++n) l(i, n) = l(i, n) * phase[n];
  }
  // rt(k, n) = r(n, k): contiguous inner loop over n.
  dd::Matrix rt(dim);
  for (int n = 0; n < dim; ++n)
    for (int k = 0; k < dim; ++k) rt(k, n) = r(n, k);

  ComplexMatrix out(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      // Nonzero range of n for left(j, n) * right(n, k).
      const int lo = std::max(left_kind == ShiftKind::Lower ? j : 0, right_kind == ShiftKind::Raise ? k : 0);
      const int hi = std::min(left_kind == ShiftKind::Raise ? j : dim - 1,
                              right_kind == ShiftKind::Lower ? k : dim - 1);
      dd::Complex acc{};
      for (int n = lo; n <= hi; ++n) acc = acc + l(j, n) * rt(k, n);
      out(j, k) = scale * acc.to_double();
    }
  }
  return out;
}

}  // namespace detail

/// Scalar prefactor of the disentangled product: e^{-|z|^2/2} (normal) or
/// e^{+|z|^2/2} (antinormal).
inline double disentangle_prefactor(DisplacementParam p, DisentangleForm form) {
  const double x = std::norm(p.z);
  return std::exp(form == DisentangleForm::Normal ? -0.5 * x : 0.5 * x);
}

/// U(z) as e^{-|z|^2/2} e^{z a^dagger} e^{-conj(z) a} or
/// e^{|z|^2/2} e^{-conj(z) a} e^{z a^dagger}. Both triangular factors are the
/// finite exponential series (see expm_triangular), evaluated in dd precision.
inline ComplexMatrix displacement_disentangled(DisplacementParam p, const TruncationConfig& cfg,
                                               DisentangleForm form) {
  using detail::ShiftKind;
  cfg.validate();
  const double scale = disentangle_prefactor(p, form);
  const Complex zc = std::conj(p.z);
  if (form == DisentangleForm::Normal)
    return detail::disentangled_product(scale, p.z, ShiftKind::Raise, std::nullopt, -zc,
                                        ShiftKind::Lower, cfg.dim);
  return detail::disentangled_product(scale, -zc, ShiftKind::Lower, std::nullopt, p.z,
                                      ShiftKind::Raise, cfg.dim);
}

/// <n|U(z)|m> from the associated Laguerre closed form. The n >= m branch
/// (which includes n == m) is z^{n-m} sqrt(m!/n!) L_m^{(n-m)}(|z|^2);
/// the n < m branch is (-conj z)^{m-n} sqrt(n!/m!) L_n^{(m-n)}(|z|^2).
inline Complex coherent_matrix_element(int n, int m, DisplacementParam p) {
  if (n < 0 || m < 0)
    throw PreconditionError(detail::concat("coherent_matrix_element: negative index (n = ", n,
                                           ", m = ", m, ")"));
  const double x = std::norm(p.z);
  const bool lower_branch = n >= m;
  const int low = lower_branch ? m : n;
  const int high = lower_branch ? n : m;
  const Complex base = lower_branch ? p.z : -std::conj(p.z);
  // base^{high-low} * sqrt(low!/high!), accumulated factor by factor.
  Complex factor{1.0, 0.0};
  for (int k = low + 1; k <= high; ++k) factor *= base / std::sqrt(static_cast<double>(k));
  return std::exp(-0.5 * x) * factor * laguerre_assoc(low, high - low, x);
}

/// e^{z conj(w) - conj(z) w}: U(z)U(w) = phase * U(w)U(z).
inline Complex commutation_phase(DisplacementParam z, DisplacementParam w) {
  return std::exp(z.z * std::conj(w.z) - std::conj(z.z) * w.z);
}

struct CoherentState {
  ComplexVector amplitudes;
  // Set when the neglected tail e^{-|z|^2/2}|z|^D/sqrt(D!) exceeds cfg.tol.
  bool tail_warning = false;
};

/// Upper estimate of the amplitude the truncation at dim discards.
inline double coherent_tail_estimate(Complex z, int dim) {
  const double r = std::abs(z);
  if (r == 0.0) return 0.0;
  return std::exp(-0.5 * r * r + dim * std::log(r) - 0.5 * std::lgamma(dim + 1.0));
}

/// |z> as column 0 of the exact truncated U(z).
inline CoherentState coherent_state(DisplacementParam p, const TruncationConfig& cfg) {
  CoherentState state;
  state.amplitudes = displacement_exact(p, cfg).col(0);
  state.tail_warning = coherent_tail_estimate(p.z, cfg.dim) > cfg.tol;
  return state;
}

/// Closed-form amplitudes e^{-|z|^2/2} z^n / sqrt(n!) for n < count.
inline ComplexVector coherent_amplitudes(Complex z, int count) {
  if (count < 0) throw PreconditionError("coherent_amplitudes: negative count");
  ComplexVector v(count);
  Complex amp = std::exp(-0.5 * std::norm(z));
  for (int n = 0; n < count; ++n) {
    v[n] = amp;
    amp *= z / std::sqrt(static_cast<double>(n + 1));
  }
  return v;
}

}  // namespace coherent

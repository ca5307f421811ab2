#pragma once

// Extended coherent operators U(z,t) = exp(z a^dagger - conj(z) a + itN),
// their closed forms, and the su(1,1) extension V(z,t) = exp(z K+ - conj(z) K- + it K3).

#include "coherent/coherent_ops.hpp"
#include "coherent/matrix_core.hpp"
#include "coherent/oscillator_algebra.hpp"
#include "coherent/scalar_kernels.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace coherent {

/// (z, t) with t kept unreduced; t = 0 is the plain displacement.
struct ExtendedParam {
  Complex z;
  double t = 0.0;
};

inline ComplexMatrix number_phase(double t, int dim) {
  ComplexVector phases(dim);
  for (int n = 0; n < dim; ++n) phases[n] = std::polar(1.0, t * n);
  return phases.asDiagonal();
}

inline ComplexMatrix extended_generator(ExtendedParam p, const LadderSet& ladder) {
  return displacement_generator(p.z, ladder) + Complex{0.0, p.t} * ladder.n_op;
}

inline ComplexMatrix extended_exact(ExtendedParam p, const TruncationConfig& cfg) {
  return expm_skew(extended_generator(p, build_ladder(cfg)));
}

/// Normal:     e^{g|z|^2} e^{f z a^dagger} e^{itN} e^{-f conj(z) a}
/// Antinormal: e^{-conj(g)|z|^2} e^{-conj(f) conj(z) a} e^{itN} e^{conj(f) z a^dagger}
inline ComplexMatrix extended_disentangled(ExtendedParam p, const TruncationConfig& cfg,
                                           DisentangleForm form) {
  using detail::ShiftKind;
  cfg.validate();
  const Complex f = f_of_t(p.t);
  const Complex g = g_of_t(p.t);
  const double x = std::norm(p.z);
  const Complex zc = std::conj(p.z);
  const Complex step = std::polar(1.0, p.t);
  if (form == DisentangleForm::Normal)
    return detail::disentangled_product(std::exp(g * x), f * p.z, ShiftKind::Raise, step, -f * zc,
                                        ShiftKind::Lower, cfg.dim);
  const Complex fc = std::conj(f);
  return detail::disentangled_product(std::exp(-std::conj(g) * x), -fc * zc, ShiftKind::Lower, step,
                                      fc * p.z, ShiftKind::Raise, cfg.dim);
}

/// <n|U(z,t)|m> = exp(prefactor_exponent) * <n|U(w)|m> with w = f(t) z.
struct ExtendedMatrixElementParts {
  Complex w;
  // -|w|^2/2 - conj(g)|z|^2 + itm; equal to -(1/2 + conj(g)/|f|^2)|w|^2 + itm
  // wherever f != 0, and finite at the zeros of f.
  Complex prefactor_exponent;
  Complex base_element;

  Complex value() const { return std::exp(prefactor_exponent) * base_element; }
};

inline ExtendedMatrixElementParts extended_matrix_element_parts(int n, int m, ExtendedParam p) {
  if (n < 0 || m < 0)
    throw PreconditionError(detail::concat("extended_matrix_element: negative index (n = ", n,
                                           ", m = ", m, ")"));
  const Complex f = f_of_t(p.t);
  const Complex g = g_of_t(p.t);
  ExtendedMatrixElementParts parts;
  parts.w = f * p.z;
  parts.prefactor_exponent =
      -0.5 * std::norm(parts.w) - std::conj(g) * std::norm(p.z) + Complex{0.0, p.t * m};
  parts.base_element = coherent_matrix_element(n, m, {parts.w});
  return parts;
}

inline Complex extended_matrix_element(int n, int m, ExtendedParam p) {
  return extended_matrix_element_parts(n, m, p).value();
}

/// |z,t> = U(z,t)|0> on the first count Fock states, from the matrix-element closed form.
inline ComplexVector extended_state_amplitudes(ExtendedParam p, int count) {
  const ExtendedMatrixElementParts head = extended_matrix_element_parts(0, 0, p);
  return std::exp(head.prefactor_exponent) * coherent_amplitudes(head.w, count);
}

/// e^{conj(f(t)) conj(f(s)) z conj(w) - f(t) f(s) conj(z) w}.
inline Complex extended_commutation_phase(ExtendedParam left, ExtendedParam right) {
  const Complex ft = f_of_t(left.t);
  const Complex fs = f_of_t(right.t);
  return std::exp(std::conj(ft) * std::conj(fs) * left.z * std::conj(right.z) -
                  ft * fs * std::conj(left.z) * right.z);
}

/// Band residual of U(z,t)U(w,s) = phase * U(w e^{it}, s) U(z e^{-is}, t).
inline double extended_commutation_residual(ExtendedParam left, ExtendedParam right,
                                            const TruncationConfig& cfg) {
  const ComplexMatrix lhs = extended_exact(left, cfg) * extended_exact(right, cfg);
  const ExtendedParam right_moved{right.z * std::polar(1.0, left.t), right.t};
  const ExtendedParam left_moved{left.z * std::polar(1.0, -right.t), left.t};
  const ComplexMatrix rhs = extended_commutation_phase(left, right) *
                            (extended_exact(right_moved, cfg) * extended_exact(left_moved, cfg));
  return band_residual(lhs, rhs, cfg.band);
}

inline constexpr double kMinDecompositionT = 1e-6;

/// e^{-i|z|^2/t} e^{(i/t)(z a^dagger + conj(z) a)} e^{itN} e^{-(i/t)(z a^dagger + conj(z) a)}.
/// The conjugating factor is a displacement by iz/t, so dim must grow as t shrinks.
inline ComplexMatrix conjugated_decomposition(ExtendedParam p, const TruncationConfig& cfg) {
  if (!(std::abs(p.t) >= kMinDecompositionT))
    throw DomainError(detail::concat("conjugated decomposition undefined at t = 0 (|t| = ",
                                     std::abs(p.t), " < ", kMinDecompositionT, ")"));
  const LadderSet ladder = build_ladder(cfg);
  const ComplexMatrix shift =
      expm_skew(Complex{0.0, 1.0 / p.t} * (p.z * ladder.a_dag + std::conj(p.z) * ladder.a));
  const Complex scalar = std::polar(1.0, -std::norm(p.z) / p.t);
  return scalar * (shift * number_phase(p.t, cfg.dim) * shift.adjoint());
}

/// Abel-regularized trace e^{-i|z|^2/t} / (1 - e^{it}).
inline Complex extended_trace_closed(ExtendedParam p) {
  if (!std::isfinite(p.t)) throw PreconditionError("extended_trace_closed: t must be finite");
  if (near_multiple_of_two_pi(p.t))
    throw DomainError(detail::concat("Tr U(z,t) diverges at t = ", p.t, " (multiple of 2 pi)"));
  return std::polar(1.0, -std::norm(p.z) / p.t) / (1.0 - std::polar(1.0, p.t));
}

/// Scalar phase c with U(z, 2 pi k) = c * I, read off from the shifted-number
/// form it (a + z/(it))^dagger (a + z/(it)) - i|z|^2/t whose operator part has
/// integer spectrum. Only valid for k != 0.
inline Complex shift_form_full_period(Complex z, int k) {
  if (k == 0) throw DomainError("shift form is singular at t = 0");
  const double t = 2.0 * std::numbers::pi * k;
  return std::polar(1.0, -std::norm(z) / t);
}

/// V(z,t) = expm_skew(z K+ - conj(z) K- + it K3). The generator couples n to
/// n +- 2 only, so the even and odd Fock sectors are exponentiated separately
/// (each block is tridiagonal) and parity is preserved exactly.
inline ComplexMatrix squeeze_extended(ExtendedParam p, const TruncationConfig& cfg) {
  const Su11Set su = build_su11(cfg);
  const ComplexMatrix x = p.z * su.k_plus - std::conj(p.z) * su.k_minus + Complex{0.0, p.t} * su.k3;
  const int dim = cfg.dim;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int parity = 0; parity < 2; ++parity) {
    const int size = (dim - parity + 1) / 2;
    ComplexMatrix block(size, size);
    for (int j = 0; j < size; ++j)
      for (int i = 0; i < size; ++i) block(i, j) = x(2 * i + parity, 2 * j + parity);
    const ComplexMatrix e = expm_skew(block);
    for (int j = 0; j < size; ++j)
      for (int i = 0; i < size; ++i) out(2 * i + parity, 2 * j + parity) = e(i, j);
  }
  return out;
}

/// The su(1,1) exponent grows hyperbolically; for |z| >= 1 truncation
/// artifacts reach the low Fock states much sooner.
inline bool squeeze_truncation_warning(ExtendedParam p) { return std::abs(p.z) >= 1.0; }

/// U(z,t) V(w,s).
inline ComplexMatrix product_uv(ExtendedParam u, ExtendedParam v, const TruncationConfig& cfg) {
  return extended_exact(u, cfg) * squeeze_extended(v, cfg);
}

}  // namespace coherent

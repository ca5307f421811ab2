#include "coherent/extended_ops.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"

using namespace coherent;

namespace {

constexpr double kPi = std::numbers::pi;
const TruncationConfig kDefault{128, 32, 1e-9};

ComplexMatrix phase_diag(double t, double offset, double step, int dim) {
  ComplexVector v(dim);
  for (int n = 0; n < dim; ++n) v[n] = std::polar(1.0, t * (step * n + offset));
  return v.asDiagonal();
}

}  // namespace

TEST(ExtendedExact, ReducesToDisplacementAtZeroT) {
  const Complex z(0.8, -0.6);
  EXPECT_LT(max_entry(extended_exact({z, 0.0}, kDefault) - displacement_exact({z}, kDefault)), 1e-13);
}

TEST(ExtendedExact, ZeroDisplacementIsNumberPhase) {
  const double t = 0.9;
  EXPECT_LT(max_entry(extended_exact({0.0, t}, kDefault) - phase_diag(t, 0.0, 1.0, 128)), 1e-13);
}

TEST(ExtendedExact, FullPeriodCollapsesToScalar) {
  const ComplexMatrix u = extended_exact({1.0, 2.0 * kPi}, kDefault);
  const Complex c = std::polar(1.0, -1.0 / (2.0 * kPi));
  EXPECT_LT(band_residual(u, c * ComplexMatrix::Identity(128, 128), 32), 1e-8);
  EXPECT_EQ(shift_form_full_period(1.0, 1), c);
  EXPECT_THROW(shift_form_full_period(1.0, 0), DomainError);
}

TEST(ExtendedExact, MatchesPadeOracleAndIsUnitary) {
  oracle::Gen gen(2);
  for (int i = 0; i < 6; ++i) {
    const Complex z = gen.disk(2.0);
    const double t = gen.uniform(-6.0, 6.0);
    const ComplexMatrix u = extended_exact({z, t}, kDefault);
    EXPECT_LT(band_residual(u, oracle::extended(z, t, 128), 32), 1e-11) << z << " " << t;
    EXPECT_LT(unitarity_defect(u), 1e-11 * 128);
  }
}

TEST(ExtendedDisentangled, ReducesToCoherentFactorisationAtZeroT) {
  const Complex z(-0.3, 1.4);
  for (auto form : {DisentangleForm::Normal, DisentangleForm::Antinormal})
    EXPECT_LT(band_residual(extended_disentangled({z, 0.0}, kDefault, form),
                            displacement_disentangled({z}, kDefault, form), 32),
              1e-13);
}

TEST(ExtendedDisentangled, ReferencePoint) {
  const ExtendedParam p{Complex(1.0, 0.5), 1.7};
  const ComplexMatrix exact = oracle::extended(p.z, p.t, 128);
  for (auto form : {DisentangleForm::Normal, DisentangleForm::Antinormal})
    EXPECT_LT(band_residual(extended_disentangled(p, kDefault, form), exact, 32), 1e-9) << to_string(form);
}

TEST(ExtendedDisentangled, NormalFormCollapsesAtFullPeriod) {
  const Complex z(1.2, -0.4);
  const ComplexMatrix u = extended_disentangled({z, 2.0 * kPi}, kDefault, DisentangleForm::Normal);
  const Complex c = std::polar(1.0, -std::norm(z) / (2.0 * kPi));
  EXPECT_LT(band_residual(u, c * ComplexMatrix::Identity(128, 128), 32), 1e-12);
}

TEST(ExtendedDisentangled, PropertyAgainstPadeOracle) {
  oracle::Gen gen(1730);
  for (int i = 0; i < 10; ++i) {
    const Complex z = gen.disk(2.0);
    const double t = gen.uniform(-6.0, 6.0);
    const ComplexMatrix exact = oracle::extended(z, t, 128);
    for (auto form : {DisentangleForm::Normal, DisentangleForm::Antinormal})
      EXPECT_LT(band_residual(extended_disentangled({z, t}, kDefault, form), exact, 32), 1e-9)
          << z << " " << t << " " << to_string(form);
  }
}

TEST(ExtendedMatrixElement, Examples) {
  const Complex z(0.6, 0.9);
  for (int n = 0; n < 6; ++n)
    for (int m = 0; m < 6; ++m)
      EXPECT_LT(std::abs(extended_matrix_element(n, m, {z, 0.0}) - coherent_matrix_element(n, m, {z})),
                1e-15);
  for (int m = 0; m < 10; ++m)
    EXPECT_LT(std::abs(extended_matrix_element(m, m, {0.0, 0.4}) - std::polar(1.0, 0.4 * m)), 1e-15);
  const Complex c = std::polar(1.0, -std::norm(z) / (2.0 * kPi));
  for (int n = 0; n < 6; ++n)
    for (int m = 0; m < 6; ++m)
      EXPECT_LT(std::abs(extended_matrix_element(n, m, {z, 2.0 * kPi}) - (n == m ? c : Complex{})), 1e-14);
  EXPECT_THROW(extended_matrix_element(-1, 0, {z, 1.0}), PreconditionError);
}

TEST(ExtendedMatrixElement, PartsInvariants) {
  oracle::Gen gen(12);
  for (int i = 0; i < 200; ++i) {
    const ExtendedParam p{gen.disk(2.0), gen.uniform(-6.0, 6.0)};
    const int m = gen.integer(0, 20);
    const auto parts = extended_matrix_element_parts(0, m, p);
    const Complex f = f_of_t(p.t), g = g_of_t(p.t);
    EXPECT_EQ(parts.w, f * p.z);
    const double abs_f_sq = std::norm(f);
    if (abs_f_sq > 1e-2) {
      const Complex direct = -(0.5 + std::conj(g) / abs_f_sq) * std::norm(parts.w) + Complex(0.0, p.t * m);
      EXPECT_LT(std::abs(parts.prefactor_exponent - direct), 1e-12);
    }
  }
}

TEST(ExtendedMatrixElement, PropertyAgainstPadeOracleIncludingNearFullPeriod) {
  oracle::Gen gen(13);
  for (int i = 0; i < 8; ++i) {
    const Complex z = gen.disk(2.0);
    double t = gen.uniform(-6.0, 6.0);
    if (i % 2 == 1) t = 2.0 * kPi + gen.uniform(-1e-4, 1e-4);
    const ComplexMatrix exact = oracle::extended(z, t, 128);
    for (int n = 0; n <= 20; ++n)
      for (int m = 0; m <= 20; ++m)
        EXPECT_LT(std::abs(extended_matrix_element(n, m, {z, t}) - exact(n, m)), 1e-9)
            << z << " t=" << t << " " << n << "," << m;
  }
}

TEST(ExtendedState, AmplitudesAreColumnZero) {
  const ExtendedParam p{Complex(0.5, -1.0), 2.2};
  const ComplexMatrix u = oracle::extended(p.z, p.t, 128);
  EXPECT_LT((extended_state_amplitudes(p, 30) - u.col(0).head(30)).norm(), 1e-12);
}

TEST(ExtendedCommutation, Examples) {
  const auto cfg = kDefault;
  EXPECT_LT(extended_commutation_residual({Complex(0.3, 1.0), 0.0}, {Complex(-1.0, 0.2), 0.0}, cfg), 1e-9);
  EXPECT_EQ(extended_commutation_residual({0.0, 0.7}, {0.0, -1.3}, cfg), 0.0);
  EXPECT_LT(extended_commutation_residual({1.0, 0.7}, {Complex(0, 1), -1.2}, cfg), 1e-9);
  // At t = s = 0 the phase is the plain coherent one.
  EXPECT_LT(std::abs(extended_commutation_phase({Complex(0, 1), 0.0}, {1.0, 0.0}) -
                     commutation_phase({Complex(0, 1)}, {1.0})),
            1e-15);
}

TEST(ExtendedCommutation, Property) {
  oracle::Gen gen(14);
  for (int i = 0; i < 6; ++i) {
    const ExtendedParam l{gen.disk(2.0), gen.uniform(-6.0, 6.0)};
    const ExtendedParam r{gen.disk(2.0), gen.uniform(-6.0, 6.0)};
    EXPECT_LT(extended_commutation_residual(l, r, kDefault), 1e-9);
  }
}

TEST(SmallT, ResidualVanishesLinearlyInT) {
  // ||U(z,t) - U(z)|| on the band is first order in t with a slope set by the
  // band's largest number eigenvalue: at z = 0 it is |e^{it(B-1)} - 1|.
  const ComplexMatrix u0 = displacement_exact({0.0}, kDefault);
  const double at_zero = band_residual(extended_exact({0.0, 1e-6}, kDefault), u0, 32);
  EXPECT_NEAR(at_zero, 31e-6, 1e-12);
  const Complex z(0.5, 0.5);
  const ComplexMatrix uz = displacement_exact({z}, kDefault);
  const double r6 = band_residual(extended_exact({z, 1e-6}, kDefault), uz, 32);
  const double r7 = band_residual(extended_exact({z, 1e-7}, kDefault), uz, 32);
  EXPECT_NEAR(r6 / r7, 10.0, 0.05);
}

TEST(ConjugatedDecomposition, Examples) {
  const TruncationConfig wide{256, 16, 1e-6};
  EXPECT_LT(max_entry(conjugated_decomposition({0.0, 0.8}, wide) - phase_diag(0.8, 0.0, 1.0, 256)), 1e-15);
  const ExtendedParam p{0.5, 1.0};
  EXPECT_LT(band_residual(conjugated_decomposition(p, wide), oracle::extended(p.z, p.t, 256), 16), 1e-6);
  EXPECT_THROW(conjugated_decomposition({0.5, 1e-9}, wide), DomainError);
}

TEST(ConjugatedDecomposition, PropertyOnPinnedRange) {
  const TruncationConfig wide{256, 16, 1e-6};
  oracle::Gen gen(15);
  for (int i = 0; i < 4; ++i) {
    const ExtendedParam p{gen.disk(1.0), gen.uniform(0.5, 3.0)};
    EXPECT_LT(band_residual(conjugated_decomposition(p, wide), extended_exact(p, wide), 16), 1e-6);
  }
}

TEST(TraceClosed, Examples) {
  EXPECT_LT(std::abs(extended_trace_closed({0.0, kPi}) - 0.5), 1e-15);
  EXPECT_LT(std::abs(extended_trace_closed({1.0, kPi}) - 0.5 * std::polar(1.0, -1.0 / kPi)), 1e-15);
  for (double t : {0.3, 1.0, 2.5, -4.0})
    EXPECT_LT(std::abs(extended_trace_closed({0.0, t}) - abel_trace(t)), 1e-6);
  EXPECT_THROW(extended_trace_closed({1.0, 2.0 * kPi}), DomainError);
  EXPECT_THROW(extended_trace_closed({1.0, 0.0}), DomainError);
}

TEST(Squeeze, ZeroIsK3Phase) {
  const auto cfg = make_config(32, 16);
  EXPECT_LT(max_entry(squeeze_extended({0.0, 1.3}, cfg) - phase_diag(1.3, 0.25, 0.5, 32)), 1e-14);
}

TEST(Squeeze, UnitarityParityAndWarning) {
  const auto cfg = make_config(64, 32);
  const ComplexMatrix v = squeeze_extended({0.3, 0.0}, cfg);
  EXPECT_LT(unitarity_defect(v), 1e-11);
  const ComplexMatrix w = squeeze_extended({Complex(0.4, -0.5), 0.9}, cfg);
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i)
      if ((i + j) % 2 == 1) EXPECT_EQ(w(i, j), Complex{}) << i << "," << j;
  EXPECT_FALSE(squeeze_truncation_warning({0.9, 0.0}));
  EXPECT_TRUE(squeeze_truncation_warning({Complex(0.0, 1.0), 0.0}));
}

TEST(Squeeze, MatchesPadeOracle) {
  const int d = 64;
  const auto cfg = make_config(d, 32);
  const ComplexMatrix a = oracle::lowering(d);
  const ComplexMatrix kp = 0.5 * a.adjoint() * a.adjoint(), km = 0.5 * a * a;
  const ComplexMatrix k3 = 0.5 * (oracle::number(d) + 0.5 * ComplexMatrix::Identity(d, d));
  const Complex z(0.5, 0.2);
  const double t = -0.7;
  const ComplexMatrix expected = oracle::expm(z * kp - std::conj(z) * km + Complex(0, t) * k3);
  EXPECT_LT(max_entry(squeeze_extended({z, t}, cfg) - expected), 1e-12);
}

TEST(ProductUV, Examples) {
  const auto cfg = kDefault;
  const ComplexMatrix diag_product = product_uv({0.0, 0.5}, {0.0, 1.0}, cfg);
  EXPECT_LT(max_entry(diag_product - phase_diag(0.5, 0.0, 1.0, 128) * phase_diag(1.0, 0.25, 0.5, 128)),
            1e-13);
  EXPECT_LT(unitarity_defect(product_uv({1.0, 0.5}, {0.3, 1.0}, cfg)), 1e-10);
  const ComplexMatrix w0 = product_uv({1.0, 0.5}, {0.0, 1.0}, cfg);
  EXPECT_LT(max_entry(w0 - extended_exact({1.0, 0.5}, cfg) * phase_diag(1.0, 0.25, 0.5, 128)), 1e-13);
}

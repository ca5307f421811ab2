#include "coherent/matrix_core.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <string>

#include "oracles.hpp"

using namespace coherent;

namespace {

ComplexMatrix diag(std::initializer_list<Complex> values) {
  ComplexVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& x : values) v[i++] = x;
  return v.asDiagonal();
}

}  // namespace

TEST(TruncationConfig, BandMustFitInsideHalfDimension) {
  EXPECT_NO_THROW(make_config(128, 64));
  EXPECT_THROW(make_config(128, 65), PreconditionError);
  EXPECT_THROW(make_config(0, 1), PreconditionError);
  EXPECT_THROW(make_config(8, 0), PreconditionError);
  EXPECT_THROW(make_config(8, 2, 0.0), PreconditionError);
}

TEST(ExpmSkew, ZeroGivesIdentity) {
  const ComplexMatrix x = ComplexMatrix::Zero(4, 4);
  EXPECT_EQ(max_entry(expm_skew(x) - ComplexMatrix::Identity(4, 4)), 0.0);
}

TEST(ExpmSkew, DiagonalExponential) {
  const ComplexMatrix e = expm_skew(diag({0.0, kI}));
  EXPECT_LT(max_entry(e - diag({1.0, std::polar(1.0, 1.0)})), 1e-15);
}

TEST(ExpmSkew, NumberPhaseAtPi) {
  const ComplexMatrix x = kI * std::numbers::pi * diag({0.0, 1.0, 2.0});
  EXPECT_LT(max_entry(expm_skew(x) - diag({1.0, -1.0, 1.0})), 1e-15);
}

TEST(ExpmSkew, RejectsNonSkewInputNamingTheNorm) {
  ComplexMatrix x = ComplexMatrix::Zero(3, 3);
  x(0, 1) = 1.0;
  try {
    expm_skew(x);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("max|X + X^dagger|"), std::string::npos) << e.what();
  }
  EXPECT_THROW(expm_skew(ComplexMatrix::Zero(2, 3)), PreconditionError);
}

TEST(ExpmSkew, TolerateRoundingLevelAsymmetry) {
  oracle::Gen gen(11);
  ComplexMatrix x = gen.skew(6, 1.0);
  x(0, 1) += 1e-15;
  EXPECT_NO_THROW(expm_skew(x));
}

// Dense input goes through the general eigensolver.
TEST(ExpmSkew, DenseMatchesPadeOracle) {
  oracle::Gen gen(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = gen.integer(2, 40);
    const ComplexMatrix x = gen.skew(d, 1.5);
    EXPECT_LT(max_entry(expm_skew(x) - oracle::expm(x)), 1e-12) << "trial " << trial;
  }
}

// Tridiagonal input (every displacement generator) goes through the real
// symmetric tridiagonal path.
TEST(ExpmSkew, TridiagonalMatchesPadeOracle) {
  oracle::Gen gen(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = gen.integer(2, 64);
    ComplexMatrix x = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) x(k, k) = Complex(0.0, gen.uniform(-3.0, 3.0));
    for (int k = 0; k + 1 < d; ++k) {
      const Complex c(gen.uniform(-2.0, 2.0), gen.uniform(-2.0, 2.0));
      x(k + 1, k) = c;
      x(k, k + 1) = -std::conj(c);
    }
    EXPECT_LT(max_entry(expm_skew(x) - oracle::expm(x)), 1e-12) << "trial " << trial;
  }
}

TEST(ExpmSkew, InverseAndUnitarityProperties) {
  oracle::Gen gen(5);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = gen.integer(2, 48);
    const ComplexMatrix x = gen.skew(d, gen.uniform(0.1, 4.0));
    const ComplexMatrix e = expm_skew(x);
    EXPECT_LT(max_entry(e * expm_skew(-x) - ComplexMatrix::Identity(d, d)), 1e-11 * d);
    EXPECT_LT(unitarity_defect(e), 1e-11);
    EXPECT_TRUE(all_finite(e));
  }
}

TEST(ExpmTriangular, NilpotentOrderTwo) {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = 1.0;
  ComplexMatrix expected(2, 2);
  expected << 1.0, 1.0, 0.0, 1.0;
  EXPECT_EQ(max_entry(expm_triangular(x) - expected), 0.0);
}

TEST(ExpmTriangular, ZeroGivesIdentity) {
  EXPECT_EQ(max_entry(expm_triangular(ComplexMatrix::Zero(5, 5)) - ComplexMatrix::Identity(5, 5)),
            0.0);
}

TEST(ExpmTriangular, RaisingOperatorAtDimThree) {
  // <k|e^{a^dagger}|j> = sqrt(k!/j!) / (k-j)! for k >= j.
  const ComplexMatrix a_dag = oracle::lowering(3).adjoint();
  const ComplexMatrix e = expm_triangular(a_dag);
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      const double expected =
          k >= j ? std::sqrt(oracle::factorial(k) / oracle::factorial(j)) / oracle::factorial(k - j)
                 : 0.0;
      EXPECT_NEAR(e(k, j).real(), expected, 1e-15) << k << "," << j;
      EXPECT_EQ(e(k, j).imag(), 0.0);
    }
  }
}

TEST(ExpmTriangular, RejectsFullMatrix) {
  ComplexMatrix x = ComplexMatrix::Zero(3, 3);
  x(0, 1) = 1.0;
  x(2, 0) = 1.0;
  EXPECT_THROW(expm_triangular(x), PreconditionError);
  x = ComplexMatrix::Identity(3, 3);
  EXPECT_THROW(expm_triangular(x), PreconditionError);
}

TEST(ExpmTriangular, MatchesDenseSeriesForShiftsAndGeneralTriangles) {
  oracle::Gen gen(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = gen.integer(2, 30);
    const Complex c = gen.disk(2.0);
    // Single-superdiagonal shift (fast path) and its transpose.
    const ComplexMatrix shift = c * oracle::lowering(d);
    EXPECT_LT(max_entry(expm_triangular(shift) - oracle::nilpotent_series(shift)), 1e-12);
    const ComplexMatrix raise = shift.transpose();
    EXPECT_LT(max_entry(expm_triangular(raise) - oracle::nilpotent_series(raise)), 1e-12);
    // General strictly upper triangle.
    ComplexMatrix x = ComplexMatrix::Zero(d, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < j; ++i) x(i, j) = Complex(gen.uniform(-0.5, 0.5), gen.uniform(-0.5, 0.5));
    const ComplexMatrix e = expm_triangular(x);
    EXPECT_LT(max_entry(e - oracle::nilpotent_series(x)), 1e-12);
    // Upper triangular with unit diagonal.
    for (int j = 0; j < d; ++j) {
      EXPECT_EQ(e(j, j), Complex(1.0, 0.0));
      for (int i = j + 1; i < d; ++i) EXPECT_EQ(e(i, j), Complex{});
    }
  }
}

TEST(BandResidual, Examples) {
  const int d = 6;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  EXPECT_EQ(band_residual(id, id, 3), 0.0);
  EXPECT_EQ(band_residual(id, ComplexMatrix::Zero(d, d), 1), 1.0);
  ComplexMatrix edge = id;
  edge(d - 1, d - 1) += 1.0;
  EXPECT_EQ(band_residual(id, edge, d - 1), 0.0);
  EXPECT_EQ(band_residual(id, edge, d), 1.0);
}

TEST(BandResidual, DimensionMismatchThrows) {
  EXPECT_THROW(band_residual(ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(4, 4), 2),
               PreconditionError);
  EXPECT_THROW(band_residual(ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(3, 3), 4),
               PreconditionError);
}

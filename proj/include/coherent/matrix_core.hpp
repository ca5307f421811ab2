#pragma once

// Dense complex matrices on a truncated Fock space and the two exponential
// kernels every brute-force oracle in this library is built from.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace coherent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Raised when an argument violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a formula is evaluated outside the set where it is defined
/// (zeros of f(t), divergent traces, t = 0 in the conjugated decomposition).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

template <typename... Parts>
std::string concat(const Parts&... parts) {
  std::ostringstream out;
  out.precision(17);
  (out << ... << parts);
  return out.str();
}

}  // namespace detail

/// Fock cutoff, interior verification band and tolerance.
///
/// Identity checks compare only the top-left band x band block: truncation
/// corrupts the last rows and columns of every ladder-built operator.
struct TruncationConfig {
  int dim = 128;
  int band = 32;
  double tol = 1e-9;

  void validate() const {
    if (dim < 1) throw PreconditionError(detail::concat("dim must be positive, got ", dim));
    if (band < 1) throw PreconditionError(detail::concat("band must be positive, got ", band));
    if (2 * band > dim)
      throw PreconditionError(
          detail::concat("band ", band, " exceeds dim/2 (dim = ", dim, ")"));
    if (!(tol > 0.0)) throw PreconditionError(detail::concat("tol must be positive, got ", tol));
  }
};

inline TruncationConfig make_config(int dim, int band, double tol = 1e-9) {
  TruncationConfig cfg{dim, band, tol};
  cfg.validate();
  return cfg;
}

/// Largest entry modulus; the norm used for every residual in this library.
inline double max_entry(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

/// max over 0 <= j,k < band of |A_jk - B_jk|.
inline double band_residual(const ComplexMatrix& a, const ComplexMatrix& b, int band) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw PreconditionError("band_residual: matrices must be square");
  if (a.rows() != b.rows())
    throw PreconditionError(detail::concat("band_residual: dimension mismatch ", a.rows(),
                                           " vs ", b.rows()));
  if (band < 0 || band > a.rows())
    throw PreconditionError(detail::concat("band_residual: band ", band,
                                           " outside [0, ", a.rows(), "]"));
  if (band == 0) return 0.0;
  return max_entry(a.topLeftCorner(band, band) - b.topLeftCorner(band, band));
}

/// max |(M^dagger M - I)_jk| over the full dimension.
inline double unitarity_defect(const ComplexMatrix& m) {
  const auto n = m.rows();
  return max_entry(m.adjoint() * m - ComplexMatrix::Identity(n, n));
}

namespace detail {

inline bool is_tridiagonal(const ComplexMatrix& h) {
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      if ((i > j + 1 || j > i + 1) && h(i, j) != Complex{}) return false;
  return true;
}

// exp(iH) for Hermitian tridiagonal H. The diagonal unitary P with
// p_{k+1} = p_k h_{k+1,k} / |h_{k+1,k}| makes T = P^dagger H P real symmetric,
// so exp(iH) = P Q e^{i Lambda} Q^T P^dagger from T's real eigensystem.
inline ComplexMatrix expi_hermitian_tridiagonal(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  ComplexVector p(n);
  p[0] = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    diag[k] = h(k, k).real();
    if (k + 1 < n) {
      const Complex off = h(k + 1, k);
      const double mag = std::abs(off);
      sub[k] = mag;
      p[k + 1] = mag > 0.0 ? p[k] * (off / mag) : p[k];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("expm_skew: tridiagonal eigendecomposition did not converge");
  const Eigen::MatrixXd& q = eig.eigenvectors();
  ComplexMatrix qc = q.cast<Complex>();
  ComplexVector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases[k] = std::polar(1.0, eig.eigenvalues()[k]);
  ComplexMatrix e = qc * phases.asDiagonal() * qc.transpose();
  return p.asDiagonal() * e * p.conjugate().asDiagonal();
}

}  // namespace detail

/// exp(X) for anti-Hermitian X, computed as exp(iH) from the eigendecomposition
/// of the Hermitian matrix H = -iX. The result is unitary to rounding.
inline ComplexMatrix expm_skew(const ComplexMatrix& x) {
  if (x.rows() != x.cols()) throw PreconditionError("expm_skew: matrix must be square");
  const double scale = max_entry(x);
  const double skew_defect = max_entry(x + x.adjoint());
  if (skew_defect > 1e-12 * scale)
    throw PreconditionError(detail::concat(
        "expm_skew: input is not anti-Hermitian, max|X + X^dagger| = ", skew_defect,
        " exceeds 1e-12 * max|X| = ", 1e-12 * scale));
  const auto n = x.rows();
  if (scale == 0.0) return ComplexMatrix::Identity(n, n);

  ComplexMatrix h = -kI * x;
  h = (0.5 * (h + h.adjoint())).eval();
  if (detail::is_tridiagonal(h)) return detail::expi_hermitian_tridiagonal(h);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("expm_skew: Hermitian eigendecomposition did not converge");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  ComplexVector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases[k] = std::polar(1.0, lambda[k]);
  const ComplexMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

enum class Triangle { StrictlyUpper, StrictlyLower, Zero, None };

inline Triangle classify_triangle(const ComplexMatrix& x) {
  bool upper = true;
  bool lower = true;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (x(i, j) == Complex{}) continue;
      if (i >= j) upper = false;
      if (i <= j) lower = false;
    }
  }
  if (upper && lower) return Triangle::Zero;
  if (upper) return Triangle::StrictlyUpper;
  if (lower) return Triangle::StrictlyLower;
  return Triangle::None;
}

namespace detail {

// Sum_{k<D} X^k / k! for strictly upper-triangular X. X^k vanishes below its
// k-th superdiagonal, so each product only touches the trailing (D-k) block.
inline ComplexMatrix expm_strictly_upper(const ComplexMatrix& x) {
  const Eigen::Index n = x.rows();
  ComplexMatrix sum = ComplexMatrix::Identity(n, n);
  ComplexMatrix term = x;
  ComplexMatrix next(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    // term holds X^k / k!; nonzero only in rows [0, n-k), columns [k, n).
    const Eigen::Index m = n - k;
    sum.topRightCorner(m, m) += term.topRightCorner(m, m);
    if (k + 1 >= n) break;
    const Eigen::Index m1 = m - 1;
    next.setZero();
    next.topRightCorner(m1, m1).noalias() =
        term.block(0, k, m1, m1) * x.block(k, k + 1, m1, m1) / static_cast<double>(k + 1);
    term.swap(next);
  }
  return sum;
}

// X nonzero only on its first superdiagonal: X^k lives on the k-th
// superdiagonal, so each entry of the series receives exactly one term,
// E(i, i+k) = prod_{l=i}^{i+k-1} X(l, l+1) / k!.
inline bool is_superdiagonal_shift(const ComplexMatrix& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (j != i + 1 && x(i, j) != Complex{}) return false;
  return true;
}

inline ComplexMatrix expm_superdiagonal_shift(const ComplexMatrix& x) {
  const Eigen::Index n = x.rows();
  ComplexMatrix e = ComplexMatrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      e(i, j) = e(i, j - 1) * x(j - 1, j) / static_cast<double>(j - i);
  return e;
}

inline ComplexMatrix expm_upper(const ComplexMatrix& x) {
  return is_superdiagonal_shift(x) ? expm_superdiagonal_shift(x) : expm_strictly_upper(x);
}

}  // namespace detail

/// exp(X) for strictly triangular (hence nilpotent) X by the finite Taylor
/// series Sum_{k=0}^{D-1} X^k / k!, exact up to rounding.
inline ComplexMatrix expm_triangular(const ComplexMatrix& x) {
  if (x.rows() != x.cols()) throw PreconditionError("expm_triangular: matrix must be square");
  switch (classify_triangle(x)) {
    case Triangle::Zero:
      return ComplexMatrix::Identity(x.rows(), x.cols());
    case Triangle::StrictlyUpper:
      return detail::expm_upper(x);
    case Triangle::StrictlyLower:
      return detail::expm_upper(x.transpose()).transpose();
    case Triangle::None:
      break;
  }
  throw PreconditionError("expm_triangular: input is not strictly triangular");
}

}  // namespace coherent

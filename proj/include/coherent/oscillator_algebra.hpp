#pragma once

// Truncated ladder operators a, a^dagger, N and the su(1,1) generators
// K+ = (a^dagger)^2 / 2, K- = a^2 / 2, K3 = (N + 1/2) / 2.

#include "coherent/matrix_core.hpp"

#include <cmath>

namespace coherent {

struct LadderSet {
  ComplexMatrix a;      // lowering: <n-1|a|n> = sqrt(n)
  ComplexMatrix a_dag;  // raising
  ComplexMatrix n_op;   // a_dag * a
  int dim = 0;
};

struct Su11Set {
  ComplexMatrix k_plus;
  ComplexMatrix k_minus;
  ComplexMatrix k3;
  int dim = 0;
};

/// Unit basis vector |n> of the truncated Fock space.
class FockVector {
 public:
  FockVector(int dim, int index) : index_(index), amplitudes_(ComplexVector::Zero(dim)) {
    if (dim < 1) throw PreconditionError(detail::concat("FockVector: dim must be positive, got ", dim));
    if (index < 0 || index >= dim)
      throw PreconditionError(
          detail::concat("number state index ", index, " outside [0, ", dim, ")"));
    amplitudes_[index] = 1.0;
  }

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  int index() const { return index_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  int index_;
  ComplexVector amplitudes_;
};

/// Lowering operator with entries set column by column from a|n> = sqrt(n)|n-1>.
inline ComplexMatrix lowering_operator(int dim) {
  if (dim < 2) throw PreconditionError(detail::concat("ladder operators need dim >= 2, got ", dim));
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline LadderSet build_ladder(const TruncationConfig& cfg) {
  const int dim = cfg.dim;
  LadderSet set;
  set.dim = dim;
  set.a = lowering_operator(dim);
  set.a_dag = set.a.adjoint();
  set.n_op = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) set.n_op(n, n) = static_cast<double>(n);
  return set;
}

inline Su11Set build_su11(const TruncationConfig& cfg) {
  if (cfg.dim < 3)
    throw PreconditionError(detail::concat("su(1,1) generators need dim >= 3, got ", cfg.dim));
  const LadderSet ladder = build_ladder(cfg);
  Su11Set set;
  set.dim = cfg.dim;
  set.k_plus = 0.5 * ladder.a_dag * ladder.a_dag;
  set.k_minus = 0.5 * ladder.a * ladder.a;
  set.k3 = 0.5 * (ladder.n_op + 0.5 * ComplexMatrix::Identity(cfg.dim, cfg.dim));
  return set;
}

inline FockVector number_state(const TruncationConfig& cfg, int n) {
  return FockVector(cfg.dim, n);
}

inline ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y) {
  return x * y - y * x;
}

}  // namespace coherent

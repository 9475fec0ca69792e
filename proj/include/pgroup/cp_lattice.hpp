#pragma once

// Z_p C_p-lattices at finite precision: a matrix A over Z/p^k with A^p = I,
// split into multiplicities of the trivial module I (rank 1), the cyclotomic
// module J (rank p - 1) and the free module K (rank p).

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pgroup/modpk.hpp"

namespace pgroup {

class DecompositionError : public std::runtime_error {
 public:
  enum class Kind { PrecisionTooLow, NotOrderP, BadShape, Inconsistent };
  DecompositionError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct CpLatticeAction {
  int p = 0;
  int k = 0;
  int d = 0;
  ModPkMatrix a;

  /// Validates shape, k >= 2 and A^p = I.  Throws DecompositionError.
  static CpLatticeAction from_matrix(const ModPkMatrix& a);
  ModPkMatrix norm() const;  // I + A + ... + A^(p-1)
};

struct DecompositionResult {
  int m1 = 0, m2 = 0, m3 = 0;
  // SNF certificate: divisor exponents of A - I and of the norm.
  std::vector<int> a_minus_i_exponents;
  std::vector<int> norm_exponents;

  int dimension(int p) const { return m1 + (p - 1) * m2 + p * m3; }
  bool operator==(const DecompositionResult& o) const { return m1 == o.m1 && m2 == o.m2 && m3 == o.m3; }
};

DecompositionResult decompose(const CpLatticeAction& act);

/// Each indecomposable summand is cyclic, so m1 + m2 + m3.
int min_module_generators(const DecompositionResult& res);

struct CohomologyOrders {
  int log_h0 = 0;  // fixed points modulo the norm image
  int log_h1 = 0;  // norm kernel modulo the (A - I) image
};

/// Subquotient counts computed from two SNFs each, independent of the
/// multiplicity equations used by decompose.
CohomologyOrders cohomology_orders(const CpLatticeAction& act);

ModPkMatrix block_diagonal(const std::vector<ModPkMatrix>& blocks);
/// Companion matrix of 1 + x + ... + x^(p-1), i.e. multiplication by a
/// primitive p-th root of unity on Z_p[zeta].
ModPkMatrix cyclotomic_companion(int p, int k);
/// The p x p cyclic shift (regular representation).
ModPkMatrix cyclic_permutation(int p, int k);

}  // namespace pgroup

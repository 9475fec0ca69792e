#pragma once

// The truncated ring R_k = (Z/3^k)[x]/(x^2 + x + 1), a finite-precision
// model of Z_3[w] with w a primitive cube root of unity.  The uniformiser is
// pi = x - 1 and 3 = pi^2 * unit, so 3-adic precision k is pi-adic precision
// exactly 2k.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pgroup {

struct RkElement {
  std::int64_t a = 0;  // a + b x
  std::int64_t b = 0;
  bool operator==(const RkElement&) const = default;
  auto operator<=>(const RkElement&) const = default;
};

class NonUnitError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class RingRk {
 public:
  explicit RingRk(int k);

  int precision() const { return k_; }
  int pi_precision() const { return 2 * k_; }
  std::int64_t modulus() const { return mod_; }

  RkElement make(std::int64_t a, std::int64_t b) const;
  RkElement zero() const { return {0, 0}; }
  RkElement one() const { return {1, 0}; }
  RkElement x() const { return {0, 1}; }
  RkElement pi() const { return make(-1, 1); }
  RkElement pi_power(int j) const;

  RkElement add(RkElement u, RkElement v) const;
  RkElement sub(RkElement u, RkElement v) const;
  RkElement neg(RkElement u) const;
  RkElement mul(RkElement u, RkElement v) const;
  bool is_unit(RkElement u) const;
  /// Throws NonUnitError.
  RkElement inverse(RkElement u) const;

  /// pi-adic valuation, capped at 2k (the valuation of 0).
  int valuation(RkElement u) const;
  /// The 2k pi-adic digits (each in {0, 1, 2}) of u.
  std::vector<int> pi_digits(RkElement u) const;
  RkElement from_pi_digits(const std::vector<int>& digits) const;
  /// Canonical representative of u modulo pi^j.
  RkElement truncate(RkElement u, int j) const;

 private:
  int k_;
  std::int64_t mod_;
};

/// Square matrix over R_k.
class RMatrix {
 public:
  RMatrix(const RingRk& ring, int m);
  static RMatrix identity(const RingRk& ring, int m);

  int size() const { return m_; }
  const RingRk& ring() const { return ring_; }
  const RkElement& at(int r, int c) const { return data_[static_cast<std::size_t>(r) * m_ + c]; }
  void set(int r, int c, RkElement v) { data_[static_cast<std::size_t>(r) * m_ + c] = ring_.make(v.a, v.b); }

  RMatrix operator*(const RMatrix& o) const;
  bool operator==(const RMatrix& o) const { return data_ == o.data_; }
  bool operator<(const RMatrix& o) const { return data_ < o.data_; }

  /// Entrywise reduction modulo pi^j.
  RMatrix truncate(int j) const;
  /// Smallest pi-adic valuation of (this - I); 2k for the identity.
  int congruence_level() const;
  bool is_invertible() const;
  /// Throws NonUnitError when the matrix is not invertible.
  RMatrix inverse() const;

 private:
  RingRk ring_;
  int m_;
  std::vector<RkElement> data_;
};

/// GL_m^i(R) / GL_m^j(R), realised as the matrices I + pi^i E mod pi^j.
struct CongruenceLayer {
  int m = 0, k = 0, i = 0, j = 0;
  std::vector<RMatrix> elements;  // sorted
  int log3_order = 0;
  std::uint64_t exponent = 1;
  bool abelian = true;
  bool elementary_abelian = true;
  bool closed = true;  // products of elements stay inside the set
};

/// Requires 1 <= i < j <= 2k and 3^(m^2 (j - i)) <= enum_cap.
CongruenceLayer gl_congruence_layer(int m, int k, int i, int j, std::uint64_t enum_cap = 10'000'000);

struct TorsionProxyReport {
  int m = 0, k = 0;
  std::uint64_t domain_size = 0;   // matrices congruent to I mod pi^2
  std::uint64_t cube_roots = 0;    // those with X^3 = I mod pi^2k
  std::uint64_t violations = 0;    // cube roots not congruent to I mod pi^(2k-2)
  bool passed() const { return violations == 0; }
};

/// X = I mod pi^2 ranges over GL_m(R_k); checks X^3 = I forces X = I mod
/// pi^(2k-2).  Finite-precision evidence only.  Requires k >= 3.
TorsionProxyReport torsion_proxy_check(int m, int k, std::uint64_t enum_cap = 10'000'000);

/// Whether X lies in the domain of the torsion proxy (X = I mod pi^2).
bool in_torsion_proxy_domain(const RMatrix& x);

}  // namespace pgroup

#pragma once

// Dense matrices over Z/p^k and their Smith normal form.  Z/p^k is a local
// ring, so the pivot is always an entry of minimal p-adic valuation and no
// gcd steps are needed.

#include <cstdint>
#include <string>
#include <vector>

namespace pgroup {

class ModPkMatrix {
 public:
  ModPkMatrix() = default;
  ModPkMatrix(int p, int k, int rows, int cols);
  /// Entries are reduced into [0, p^k).
  static ModPkMatrix from_rows(int p, int k, const std::vector<std::vector<std::int64_t>>& rows);
  static ModPkMatrix identity(int p, int k, int n);

  int prime() const { return p_; }
  int precision() const { return k_; }
  std::int64_t modulus() const { return mod_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  std::int64_t at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  void set(int r, int c, std::int64_t v);

  ModPkMatrix operator*(const ModPkMatrix& o) const;
  ModPkMatrix operator+(const ModPkMatrix& o) const;
  ModPkMatrix operator-(const ModPkMatrix& o) const;
  bool operator==(const ModPkMatrix& o) const = default;

  ModPkMatrix transpose() const;
  /// Stack [this | o] side by side.
  ModPkMatrix hcat(const ModPkMatrix& o) const;
  /// Same matrix read at a different precision (entries re-reduced).
  ModPkMatrix with_precision(int k) const;

  bool is_invertible() const;
  /// Throws std::domain_error when singular.
  ModPkMatrix inverse() const;

  std::string to_string() const;

 private:
  int p_ = 2;
  int k_ = 1;
  std::int64_t mod_ = 2;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// p-adic valuation of x in Z/p^k, capped at k (so 0 has valuation k).
int valuation_mod_pk(std::int64_t x, int p, int k);
/// Inverse of a unit modulo m.  Throws std::domain_error for non-units.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);
std::int64_t reduce_mod(std::int64_t a, std::int64_t m);

struct SmithForm {
  /// Divisor exponents a_1 <= a_2 <= ..., one per diagonal position
  /// (min(rows, cols) of them); a_i == k means the divisor is 0 at this
  /// precision.
  std::vector<int> exponents;
  ModPkMatrix left;      // U
  ModPkMatrix right;     // V
  ModPkMatrix diagonal;  // D = U M V

  int count(int exponent) const;
  int zero_count() const;  // exponents equal to the precision
};

SmithForm smith_normal_form(const ModPkMatrix& m);

}  // namespace pgroup

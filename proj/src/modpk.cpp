#include "pgroup/modpk.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pgroup {

std::int64_t reduce_mod(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r0 = m, r1 = reduce_mod(a, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
  }
  if (r0 != 1) throw std::domain_error("element is not a unit");
  return reduce_mod(s0, m);
}

int valuation_mod_pk(std::int64_t x, int p, int k) {
  int v = 0;
  while (v < k && x % p == 0) {
    if (x == 0) return k;
    x /= p;
    ++v;
  }
  return v;
}

ModPkMatrix::ModPkMatrix(int p, int k, int rows, int cols) : p_(p), k_(k), rows_(rows), cols_(cols) {
  if (p < 2 || k < 1) throw std::invalid_argument("ModPkMatrix needs p >= 2 and k >= 1");
  mod_ = 1;
  for (int i = 0; i < k; ++i) {
    if (mod_ > (std::int64_t{1} << 31) / p) throw std::invalid_argument("p^k too large");
    mod_ *= p;
  }
  data_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

ModPkMatrix ModPkMatrix::from_rows(int p, int k, const std::vector<std::vector<std::int64_t>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows.front().size());
  ModPkMatrix m(p, k, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw std::invalid_argument("ragged matrix rows");
    for (int j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

ModPkMatrix ModPkMatrix::identity(int p, int k, int n) {
  ModPkMatrix m(p, k, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

void ModPkMatrix::set(int r, int c, std::int64_t v) { data_[static_cast<std::size_t>(r) * cols_ + c] = reduce_mod(v, mod_); }

ModPkMatrix ModPkMatrix::operator*(const ModPkMatrix& o) const {
  if (cols_ != o.rows_ || mod_ != o.mod_) throw std::invalid_argument("matrix shape/precision mismatch");
  ModPkMatrix out(p_, k_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < o.cols_; ++j) {
      std::int64_t s = 0;
      for (int t = 0; t < cols_; ++t) s = (s + at(i, t) * o.at(t, j)) % mod_;
      out.set(i, j, s);
    }
  return out;
}

ModPkMatrix ModPkMatrix::operator+(const ModPkMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || mod_ != o.mod_) throw std::invalid_argument("matrix shape/precision mismatch");
  ModPkMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = (data_[i] + o.data_[i]) % mod_;
  return out;
}

ModPkMatrix ModPkMatrix::operator-(const ModPkMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || mod_ != o.mod_) throw std::invalid_argument("matrix shape/precision mismatch");
  ModPkMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = reduce_mod(data_[i] - o.data_[i], mod_);
  return out;
}

ModPkMatrix ModPkMatrix::transpose() const {
  ModPkMatrix out(p_, k_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
  return out;
}

ModPkMatrix ModPkMatrix::hcat(const ModPkMatrix& o) const {
  if (rows_ != o.rows_ || mod_ != o.mod_) throw std::invalid_argument("matrix shape/precision mismatch");
  ModPkMatrix out(p_, k_, rows_, cols_ + o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out.set(i, j, at(i, j));
    for (int j = 0; j < o.cols_; ++j) out.set(i, cols_ + j, o.at(i, j));
  }
  return out;
}

ModPkMatrix ModPkMatrix::with_precision(int k) const {
  ModPkMatrix out(p_, k, rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(i, j, at(i, j));
  return out;
}

bool ModPkMatrix::is_invertible() const {
  if (rows_ != cols_) return false;
  auto snf = smith_normal_form(*this);
  return std::all_of(snf.exponents.begin(), snf.exponents.end(), [](int e) { return e == 0; });
}

ModPkMatrix ModPkMatrix::inverse() const {
  if (rows_ != cols_) throw std::domain_error("non-square matrix has no inverse");
  // Gauss-Jordan; over a local ring a column of an invertible matrix always
  // has a unit entry.
  const int n = rows_;
  ModPkMatrix a = *this;
  ModPkMatrix inv = identity(p_, k_, n);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (a.at(r, c) % p_ != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::domain_error("matrix is singular mod p");
    for (int j = 0; j < n; ++j) {
      std::swap(a.data_[static_cast<std::size_t>(c) * n + j], a.data_[static_cast<std::size_t>(piv) * n + j]);
      std::swap(inv.data_[static_cast<std::size_t>(c) * n + j], inv.data_[static_cast<std::size_t>(piv) * n + j]);
    }
    std::int64_t s = inverse_mod(a.at(c, c), mod_);
    for (int j = 0; j < n; ++j) {
      a.set(c, j, a.at(c, j) * s);
      inv.set(c, j, inv.at(c, j) * s);
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a.at(r, c) == 0) continue;
      std::int64_t f = a.at(r, c);
      for (int j = 0; j < n; ++j) {
        a.set(r, j, a.at(r, j) - f * a.at(c, j));
        inv.set(r, j, inv.at(r, j) - f * inv.at(c, j));
      }
    }
  }
  return inv;
}

std::string ModPkMatrix::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j);
    os << "\n";
  }
  return os.str();
}

int SmithForm::count(int exponent) const {
  return static_cast<int>(std::count(exponents.begin(), exponents.end(), exponent));
}

int SmithForm::zero_count() const { return count(diagonal.precision()); }

SmithForm smith_normal_form(const ModPkMatrix& m) {
  const int p = m.prime(), k = m.precision();
  const int rows = m.rows(), cols = m.cols();
  const std::int64_t mod = m.modulus();
  ModPkMatrix a = m;
  ModPkMatrix u = ModPkMatrix::identity(p, k, rows);
  ModPkMatrix v = ModPkMatrix::identity(p, k, cols);
  auto swap_rows = [&](ModPkMatrix& x, int r1, int r2) {
    for (int j = 0; j < x.cols(); ++j) {
      auto t = x.at(r1, j);
      x.set(r1, j, x.at(r2, j));
      x.set(r2, j, t);
    }
  };
  auto swap_cols = [&](ModPkMatrix& x, int c1, int c2) {
    for (int i = 0; i < x.rows(); ++i) {
      auto t = x.at(i, c1);
      x.set(i, c1, x.at(i, c2));
      x.set(i, c2, t);
    }
  };
  SmithForm out;
  const int steps = std::min(rows, cols);
  for (int t = 0; t < steps; ++t) {
    int best = k, bi = -1, bj = -1;
    for (int i = t; i < rows && best > 0; ++i)
      for (int j = t; j < cols; ++j) {
        int val = valuation_mod_pk(a.at(i, j), p, k);
        if (val < best) {
          best = val;
          bi = i;
          bj = j;
          if (val == 0) break;
        }
      }
    if (bi < 0) {
      out.exponents.resize(steps, k);
      break;
    }
    if (bi != t) {
      swap_rows(a, bi, t);
      swap_rows(u, bi, t);
    }
    if (bj != t) {
      swap_cols(a, bj, t);
      swap_cols(v, bj, t);
    }
    std::int64_t pv = 1;
    for (int e = 0; e < best; ++e) pv *= p;
    // Pivot = p^best * unit; scale the row so the pivot is exactly p^best.
    std::int64_t unit_inv = inverse_mod(a.at(t, t) / pv, mod);
    for (int j = 0; j < cols; ++j) a.set(t, j, a.at(t, j) * unit_inv);
    for (int j = 0; j < rows; ++j) u.set(t, j, u.at(t, j) * unit_inv);
    for (int i = t + 1; i < rows; ++i) {
      std::int64_t f = a.at(i, t) / pv;
      if (f == 0) continue;
      for (int j = t; j < cols; ++j) a.set(i, j, a.at(i, j) - f * a.at(t, j));
      for (int j = 0; j < rows; ++j) u.set(i, j, u.at(i, j) - f * u.at(t, j));
    }
    for (int j = t + 1; j < cols; ++j) {
      std::int64_t f = a.at(t, j) / pv;
      if (f == 0) continue;
      for (int i = 0; i < rows; ++i) a.set(i, j, a.at(i, j) - f * a.at(i, t));
      for (int i = 0; i < cols; ++i) v.set(i, j, v.at(i, j) - f * v.at(i, t));
    }
    out.exponents.push_back(best);
  }
  out.left = std::move(u);
  out.right = std::move(v);
  out.diagonal = std::move(a);
  return out;
}

}  // namespace pgroup

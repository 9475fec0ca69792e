#include "pgroup/ramified.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "pgroup/modpk.hpp"
#include "pgroup/pc.hpp"

namespace pgroup {

RingRk::RingRk(int k) : k_(k), mod_(1) {
  if (k < 1 || k > 19) throw std::invalid_argument("R_k precision must be in [1, 19]");
  for (int i = 0; i < k; ++i) mod_ *= 3;
}

RkElement RingRk::make(std::int64_t a, std::int64_t b) const { return {reduce_mod(a, mod_), reduce_mod(b, mod_)}; }

RkElement RingRk::add(RkElement u, RkElement v) const { return make(u.a + v.a, u.b + v.b); }
RkElement RingRk::sub(RkElement u, RkElement v) const { return make(u.a - v.a, u.b - v.b); }
RkElement RingRk::neg(RkElement u) const { return make(-u.a, -u.b); }

RkElement RingRk::mul(RkElement u, RkElement v) const {
  // (a + b x)(c + d x) = ac + (ad + bc) x + bd x^2,  x^2 = -1 - x
  auto m = [&](std::int64_t s, std::int64_t t) { return static_cast<std::int64_t>((static_cast<__int128>(s) * t) % mod_); };
  std::int64_t ac = m(u.a, v.a), bd = m(u.b, v.b);
  std::int64_t cross = (m(u.a, v.b) + m(u.b, v.a)) % mod_;
  return make(ac - bd, cross - bd);
}

bool RingRk::is_unit(RkElement u) const { return (u.a + u.b) % 3 != 0; }

RkElement RingRk::inverse(RkElement u) const {
  // (a + b x)((a - b) - b x) = a^2 - ab + b^2
  if (!is_unit(u)) throw NonUnitError("element of R_k is not a unit");
  std::int64_t norm = (mul(u, make(u.a - u.b, -u.b))).a;
  std::int64_t ninv = inverse_mod(norm, mod_);
  return mul(make(u.a - u.b, -u.b), make(ninv, 0));
}

RkElement RingRk::pi_power(int j) const {
  RkElement r = one();
  for (int t = 0; t < j; ++t) r = mul(r, pi());
  return r;
}

int RingRk::valuation(RkElement u) const {
  int m = std::min(valuation_mod_pk(u.a, 3, k_), valuation_mod_pk(u.b, 3, k_));
  if (m >= k_) return 2 * k_;
  std::int64_t scale = 1;
  for (int t = 0; t < m; ++t) scale *= 3;
  // u = 3^m (a' + b' x); the residue of a' + b' x mod pi is a' + b' mod 3.
  std::int64_t a = u.a / scale, b = u.b / scale;
  int extra = (a + b) % 3 == 0 ? 1 : 0;
  return std::min(2 * m + extra, 2 * k_);
}

std::vector<int> RingRk::pi_digits(RkElement u) const {
  std::vector<int> digits;
  for (int t = 0; t < 2 * k_; ++t) {
    int d = static_cast<int>((u.a + u.b) % 3);
    digits.push_back(d);
    std::int64_t a = u.a - d, b = u.b;
    // (x - 1)(c + e x) = (-c - e) + (c - 2e) x, solved for c, e.
    std::int64_t e = -(a + b) / 3;
    std::int64_t c = -a - e;
    u = make(c, e);
  }
  return digits;
}

RkElement RingRk::from_pi_digits(const std::vector<int>& digits) const {
  RkElement r = zero(), pw = one();
  for (int d : digits) {
    r = add(r, mul(pw, make(d, 0)));
    pw = mul(pw, pi());
  }
  return r;
}

RkElement RingRk::truncate(RkElement u, int j) const {
  auto digits = pi_digits(u);
  for (std::size_t t = static_cast<std::size_t>(std::max(j, 0)); t < digits.size(); ++t) digits[t] = 0;
  return from_pi_digits(digits);
}

// ---------------------------------------------------------------------------

RMatrix::RMatrix(const RingRk& ring, int m) : ring_(ring), m_(m), data_(static_cast<std::size_t>(m) * m) {}

RMatrix RMatrix::identity(const RingRk& ring, int m) {
  RMatrix r(ring, m);
  for (int i = 0; i < m; ++i) r.set(i, i, ring.one());
  return r;
}

RMatrix RMatrix::operator*(const RMatrix& o) const {
  RMatrix out(ring_, m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) {
      RkElement s = ring_.zero();
      for (int t = 0; t < m_; ++t) s = ring_.add(s, ring_.mul(at(i, t), o.at(t, j)));
      out.set(i, j, s);
    }
  return out;
}

RMatrix RMatrix::truncate(int j) const {
  RMatrix out(ring_, m_);
  for (int r = 0; r < m_; ++r)
    for (int c = 0; c < m_; ++c) out.set(r, c, ring_.truncate(at(r, c), j));
  return out;
}

int RMatrix::congruence_level() const {
  int level = ring_.pi_precision();
  for (int r = 0; r < m_; ++r)
    for (int c = 0; c < m_; ++c) {
      RkElement e = at(r, c);
      if (r == c) e = ring_.sub(e, ring_.one());
      level = std::min(level, ring_.valuation(e));
    }
  return level;
}

RMatrix RMatrix::inverse() const {
  RMatrix a = *this;
  RMatrix inv = identity(ring_, m_);
  for (int c = 0; c < m_; ++c) {
    int piv = -1;
    for (int r = c; r < m_; ++r)
      if (ring_.is_unit(a.at(r, c))) {
        piv = r;
        break;
      }
    if (piv < 0) throw NonUnitError("matrix over R_k is not invertible");
    for (int j = 0; j < m_; ++j) {
      std::swap(a.data_[static_cast<std::size_t>(c) * m_ + j], a.data_[static_cast<std::size_t>(piv) * m_ + j]);
      std::swap(inv.data_[static_cast<std::size_t>(c) * m_ + j], inv.data_[static_cast<std::size_t>(piv) * m_ + j]);
    }
    RkElement s = ring_.inverse(a.at(c, c));
    for (int j = 0; j < m_; ++j) {
      a.set(c, j, ring_.mul(a.at(c, j), s));
      inv.set(c, j, ring_.mul(inv.at(c, j), s));
    }
    for (int r = 0; r < m_; ++r) {
      if (r == c) continue;
      RkElement f = a.at(r, c);
      if (f == ring_.zero()) continue;
      for (int j = 0; j < m_; ++j) {
        a.set(r, j, ring_.sub(a.at(r, j), ring_.mul(f, a.at(c, j))));
        inv.set(r, j, ring_.sub(inv.at(r, j), ring_.mul(f, inv.at(c, j))));
      }
    }
  }
  return inv;
}

bool RMatrix::is_invertible() const {
  try {
    (void)inverse();
    return true;
  } catch (const NonUnitError&) {
    return false;
  }
}

bool in_torsion_proxy_domain(const RMatrix& x) { return x.congruence_level() >= 2; }

namespace {

// All matrices I + pi^i E with E running over digit expansions of length
// `width`, i.e. representatives of I + pi^i M_m(R / pi^width).
std::vector<RMatrix> congruence_family(const RingRk& ring, int m, int i, int width, std::uint64_t enum_cap) {
  const int cells = m * m * width;
  const std::uint64_t count = checked_pow(3, cells);
  if (count > enum_cap)
    throw CapExceeded("congruence family of size 3^" + std::to_string(cells) + " exceeds enumeration cap");
  std::vector<RMatrix> out;
  out.reserve(count);
  std::vector<int> digits(cells, 0);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t c = code;
    for (int t = cells - 1; t >= 0; --t) {
      digits[t] = static_cast<int>(c % 3);
      c /= 3;
    }
    RMatrix x = RMatrix::identity(ring, m);
    for (int cell = 0; cell < m * m; ++cell) {
      std::vector<int> d(static_cast<std::size_t>(i), 0);
      d.insert(d.end(), digits.begin() + cell * width, digits.begin() + (cell + 1) * width);
      int r = cell / m, col = cell % m;
      x.set(r, col, ring.add(x.at(r, col), ring.from_pi_digits(d)));
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

CongruenceLayer gl_congruence_layer(int m, int k, int i, int j, std::uint64_t enum_cap) {
  if (m < 1) throw std::invalid_argument("matrix size must be positive");
  if (!(1 <= i && i < j && j <= 2 * k))
    throw std::invalid_argument("congruence layer requires 1 <= i < j <= 2k (pi-precision of R_k)");
  RingRk ring(k);
  CongruenceLayer layer{m, k, i, j, {}, m * m * (j - i), 1, true, true, true};
  layer.elements = congruence_family(ring, m, i, j - i, enum_cap);
  for (auto& x : layer.elements) x = x.truncate(j);
  std::sort(layer.elements.begin(), layer.elements.end());

  const RMatrix id = RMatrix::identity(ring, m);
  auto mul = [&](const RMatrix& a, const RMatrix& b) { return (a * b).truncate(j); };
  for (const auto& x : layer.elements) {
    std::uint64_t order = 1;
    RMatrix y = x;
    while (!(y == id)) {
      RMatrix z = y;
      for (int t = 1; t < 3; ++t) z = mul(z, y);
      y = z;
      order *= 3;
    }
    layer.exponent = std::max(layer.exponent, order);
  }
  // Generators I + pi^l E_ab, i <= l < j, span every filtration quotient.
  std::vector<RMatrix> gens;
  for (int l = i; l < j; ++l)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        RMatrix g = id;
        g.set(a, b, ring.add(g.at(a, b), ring.pi_power(l)));
        gens.push_back(g.truncate(j));
      }
  for (std::size_t a = 0; a < gens.size() && layer.abelian; ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b)
      if (!(mul(gens[a], gens[b]) == mul(gens[b], gens[a]))) {
        layer.abelian = false;
        break;
      }
  for (const auto& g : gens)
    for (const auto& x : layer.elements)
      if (!std::binary_search(layer.elements.begin(), layer.elements.end(), mul(g, x))) layer.closed = false;
  layer.elementary_abelian = layer.abelian && layer.exponent <= 3;
  return layer;
}

TorsionProxyReport torsion_proxy_check(int m, int k, std::uint64_t enum_cap) {
  if (k < 3) throw std::invalid_argument("torsion proxy needs precision k >= 3");
  RingRk ring(k);
  TorsionProxyReport report{m, k, 0, 0, 0};
  const int top = ring.pi_precision();
  const RMatrix id = RMatrix::identity(ring, m);
  for (const auto& x : congruence_family(ring, m, 2, top - 2, enum_cap)) {
    ++report.domain_size;
    if (!(x * x * x == id)) continue;
    ++report.cube_roots;
    if (x.congruence_level() < top - 2) ++report.violations;
  }
  return report;
}

}  // namespace pgroup

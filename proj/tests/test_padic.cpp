#include <map>
#include <random>

#include "doctest.h"
#include "pgroup/modpk.hpp"
#include "pgroup/ramified.hpp"

using namespace pgroup;

namespace {

ModPkMatrix random_matrix(std::mt19937_64& rng, int p, int k, int rows, int cols) {
  ModPkMatrix m(p, k, rows, cols);
  std::uniform_int_distribution<std::int64_t> d(0, m.modulus() - 1);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.set(i, j, d(rng));
  return m;
}

// Random matrices with a controlled p-adic structure: diag(p^a) conjugated.
ModPkMatrix structured_matrix(std::mt19937_64& rng, int p, int k, int n) {
  ModPkMatrix d(p, k, n, n);
  std::uniform_int_distribution<int> e(0, k);
  for (int i = 0; i < n; ++i) {
    std::int64_t v = 1;
    for (int t = e(rng); t > 0; --t) v *= p;
    d.set(i, i, v);
  }
  auto rand_inv = [&] {
    while (true) {
      auto g = random_matrix(rng, p, k, n, n);
      if (g.is_invertible()) return g;
    }
  };
  return rand_inv() * d * rand_inv();
}

ModPkMatrix random_invertible(std::mt19937_64& rng, int p, int k, int n) {
  while (true) {
    auto g = random_matrix(rng, p, k, n, n);
    if (g.is_invertible()) return g;
  }
}

bool is_diagonal(const ModPkMatrix& d) {
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j)
      if (i != j && d.at(i, j) != 0) return false;
  return true;
}

// Oracle: #{v : M v = 0 mod p^t} = prod_i p^min(a_i, t) for square M, so
// the kernel sizes for t = 1..k determine the exponent multiset.
std::vector<int> exponents_by_kernel_count(const ModPkMatrix& m) {
  const int p = m.prime(), k = m.precision(), n = m.cols();
  std::vector<int> log_kernel(k + 1, 0);
  for (int t = 1; t <= k; ++t) {
    auto mt = m.with_precision(t);
    std::int64_t q = mt.modulus();
    std::int64_t total = 1;
    for (int i = 0; i < n; ++i) total *= q;
    std::int64_t count = 0;
    std::vector<std::int64_t> v(n);
    for (std::int64_t code = 0; code < total; ++code) {
      std::int64_t c = code;
      for (int i = 0; i < n; ++i) {
        v[i] = c % q;
        c /= q;
      }
      bool zero = true;
      for (int r = 0; r < mt.rows() && zero; ++r) {
        std::int64_t s = 0;
        for (int j = 0; j < n; ++j) s += mt.at(r, j) * v[j];
        zero = s % q == 0;
      }
      count += zero;
    }
    int lg = 0;
    while (count > 1) {
      count /= p;
      ++lg;
    }
    log_kernel[t] = lg;
  }
  // #{i : a_i >= t} = log_kernel[t] - log_kernel[t-1]
  std::vector<int> at_least(k + 2, 0);
  for (int t = 1; t <= k; ++t) at_least[t] = log_kernel[t] - log_kernel[t - 1];
  std::vector<int> exps;
  at_least[0] = n;
  for (int t = 0; t <= k; ++t) {
    int exactly = at_least[t] - (t < k ? at_least[t + 1] : 0);
    for (int c = 0; c < exactly; ++c) exps.push_back(t);
  }
  return exps;
}

}  // namespace

TEST_CASE("Smith normal form examples") {
  CHECK(smith_normal_form(ModPkMatrix::identity(3, 4, 3)).exponents == std::vector<int>{0, 0, 0});
  auto diag = ModPkMatrix::from_rows(3, 4, {{1, 0, 0}, {0, 3, 0}, {0, 0, 9}});
  CHECK(smith_normal_form(diag).exponents == std::vector<int>{0, 1, 2});
  // Rank-1 norm matrix of the free module: divisors (1, 0, 0).
  auto ones = ModPkMatrix::from_rows(3, 4, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  auto snf = smith_normal_form(ones);
  CHECK(snf.exponents == std::vector<int>{0, 4, 4});
  CHECK(snf.zero_count() == 2);
  CHECK(smith_normal_form(ones.with_precision(2)).exponents == exponents_by_kernel_count(ones.with_precision(2)));
}

TEST_CASE("Smith normal form agrees with the kernel-count oracle") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 40; ++t) {
    auto m = t % 2 ? structured_matrix(rng, 3, 2, 3) : random_matrix(rng, 3, 2, 3, 3);
    CHECK(smith_normal_form(m).exponents == exponents_by_kernel_count(m));
  }
  for (int t = 0; t < 10; ++t) {
    auto m = structured_matrix(rng, 2, 3, 3);
    CHECK(smith_normal_form(m).exponents == exponents_by_kernel_count(m));
  }
}

TEST_CASE("Smith normal form: U M V = D and invariance") {
  for (auto [p, k] : {std::pair{3, 4}, std::pair{5, 3}}) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(p * 100 + k));
    std::uniform_int_distribution<int> dim(1, 5);
    for (int t = 0; t < 500; ++t) {
      int r = dim(rng), c = dim(rng);
      auto m = t % 2 ? random_matrix(rng, p, k, r, c) : structured_matrix(rng, p, k, r);
      if (t % 2 == 0) c = r;
      auto snf = smith_normal_form(m);
      REQUIRE(snf.left * m * snf.right == snf.diagonal);
      REQUIRE(is_diagonal(snf.diagonal));
      REQUIRE(snf.left.is_invertible());
      REQUIRE(snf.right.is_invertible());
      REQUIRE(std::is_sorted(snf.exponents.begin(), snf.exponents.end()));
      REQUIRE(static_cast<int>(snf.exponents.size()) == std::min(r, c));
      if (t < 100) {
        auto g = random_invertible(rng, p, k, r), h = random_invertible(rng, p, k, c);
        REQUIRE(smith_normal_form(g * m * h).exponents == snf.exponents);
      }
    }
  }
}

TEST_CASE("mod p^k helpers") {
  CHECK(valuation_mod_pk(0, 3, 4) == 4);
  CHECK(valuation_mod_pk(18, 3, 4) == 2);
  CHECK(inverse_mod(2, 9) == 5);
  CHECK_THROWS_AS(inverse_mod(3, 9), std::domain_error);
  auto m = ModPkMatrix::from_rows(3, 2, {{1, 2}, {3, 4}});
  CHECK(m * m.inverse() == ModPkMatrix::identity(3, 2, 2));
  CHECK_THROWS(ModPkMatrix::from_rows(3, 2, {{3, 0}, {0, 1}}).inverse());
}

TEST_CASE("R_k arithmetic") {
  RingRk r2(2);
  RkElement pi = r2.pi();
  CHECK(pi == RkElement{8, 1});
  CHECK(r2.mul(pi, pi) == RkElement{0, 6});  // (x-1)^2 = -3x
  CHECK(r2.valuation(r2.make(3, 0)) == 2);
  CHECK(r2.valuation(pi) == 1);
  CHECK(r2.valuation(r2.x()) == 0);
  CHECK(r2.valuation(r2.zero()) == 4);
  CHECK(r2.inverse(r2.x()) == r2.make(-1, -1));
  CHECK(r2.mul(r2.x(), r2.make(-1, -1)) == r2.one());
  CHECK_THROWS_AS(r2.inverse(pi), NonUnitError);
  // x is a primitive cube root of unity.
  CHECK(r2.mul(r2.x(), r2.mul(r2.x(), r2.x())) == r2.one());
}

TEST_CASE("R_k multiplication matches polynomial arithmetic") {
  // Oracle: multiply as integer polynomials, then reduce x^2 -> -1 - x by
  // long division, then mod 3^k.
  RingRk ring(4);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::int64_t> d(0, ring.modulus() - 1);
  for (int t = 0; t < 500; ++t) {
    RkElement u{d(rng), d(rng)}, v{d(rng), d(rng)};
    std::int64_t c0 = u.a * v.a, c1 = u.a * v.b + u.b * v.a, c2 = u.b * v.b;
    // c0 + c1 x + c2 x^2 = (c0 - c2) + (c1 - c2) x  modulo x^2 + x + 1
    CHECK(ring.mul(u, v) == ring.make(c0 - c2, c1 - c2));
    if (ring.is_unit(u)) CHECK(ring.mul(u, ring.inverse(u)) == ring.one());
  }
}

TEST_CASE("pi-adic digits and valuations") {
  for (int k : {1, 2, 3, 4}) {
    RingRk ring(k);
    CHECK(ring.valuation(ring.make(3, 0)) == std::min(2 * ring.valuation(ring.pi()), 2 * k));
    std::mt19937_64 rng(static_cast<std::uint64_t>(k));
    std::uniform_int_distribution<std::int64_t> d(0, ring.modulus() - 1);
    for (int t = 0; t < 300; ++t) {
      RkElement u{d(rng), d(rng)};
      auto digits = ring.pi_digits(u);
      REQUIRE(digits.size() == static_cast<std::size_t>(2 * k));
      CHECK(ring.from_pi_digits(digits) == u);
      int first = 0;
      while (first < 2 * k && digits[first] == 0) ++first;
      CHECK(ring.valuation(u) == first);
      for (int j = 0; j <= 2 * k; ++j) {
        auto tr = ring.truncate(u, j);
        CHECK(ring.valuation(ring.sub(u, tr)) >= j);
        CHECK(ring.truncate(tr, j) == tr);
      }
    }
  }
}

TEST_CASE("R_k matrices") {
  RingRk ring(3);
  RMatrix m(ring, 2);
  m.set(0, 0, ring.x());
  m.set(0, 1, ring.pi());
  m.set(1, 0, ring.make(3, 0));
  m.set(1, 1, ring.one());
  CHECK(m.is_invertible());
  CHECK(m * m.inverse() == RMatrix::identity(ring, 2));
  RMatrix s(ring, 2);
  s.set(0, 0, ring.pi());
  s.set(1, 1, ring.one());
  CHECK_FALSE(s.is_invertible());
}

TEST_CASE("GL congruence layers") {
  auto l1 = gl_congruence_layer(1, 2, 1, 2);
  CHECK(l1.elements.size() == 3);
  CHECK(l1.elementary_abelian);
  CHECK(l1.closed);

  auto l2 = gl_congruence_layer(2, 2, 1, 2);
  CHECK(l2.elements.size() == 81);
  CHECK(l2.log3_order == 4);
  CHECK(l2.elementary_abelian);
  CHECK(l2.closed);

  // Oracle: for 2i >= j the map I + pi^i e -> e is an isomorphism onto the
  // additive group pi^i R / pi^j R, here (Z/3)^2 with exponent 3.
  auto l3 = gl_congruence_layer(1, 2, 2, 4);
  CHECK(l3.elements.size() == 9);
  CHECK(l3.abelian);
  CHECK(l3.exponent == 3);
  RingRk ring(2);
  for (const auto& x : l3.elements)
    for (const auto& y : l3.elements) {
      auto e = ring.sub(x.at(0, 0), ring.one());
      auto f = ring.sub(y.at(0, 0), ring.one());
      CHECK(ring.sub((x * y).truncate(4).at(0, 0), ring.one()) == ring.truncate(ring.add(e, f), 4));
    }

  // 1 + pi = x has order 3 but (1 + pi^2)^3 = 1 + 3 pi^2 + ... is not 1
  // modulo pi^5, so this layer has exponent 9.
  auto l4 = gl_congruence_layer(1, 3, 1, 5);
  CHECK(l4.abelian);
  CHECK(l4.exponent == 9);
  CHECK_FALSE(l4.elementary_abelian);

  CHECK_THROWS_AS(gl_congruence_layer(1, 2, 2, 5), std::invalid_argument);
  CHECK_THROWS_AS(gl_congruence_layer(2, 4, 1, 8, 1000), std::runtime_error);
}

TEST_CASE("consecutive congruence layers are elementary abelian of order 3^(m^2)") {
  for (int m = 1; m <= 2; ++m)
    for (int i = 1; i <= 3; ++i) {
      auto layer = gl_congruence_layer(m, 2, i, i + 1);
      CHECK(layer.elements.size() == static_cast<std::size_t>(m == 1 ? 3 : 81));
      CHECK(layer.elementary_abelian);
      CHECK(layer.closed);
    }
}

TEST_CASE("abelian verdict from generators matches all pairs") {
  for (auto [m, i, j] : {std::tuple{2, 1, 2}, std::tuple{1, 1, 4}, std::tuple{2, 2, 3}}) {
    auto layer = gl_congruence_layer(m, 2, i, j);
    bool all_pairs = true;
    for (const auto& x : layer.elements)
      for (const auto& y : layer.elements)
        if (!((x * y).truncate(j) == (y * x).truncate(j))) all_pairs = false;
    CHECK(layer.abelian == all_pairs);
  }
}

TEST_CASE("torsion proxy") {
  auto report = torsion_proxy_check(1, 3);
  CHECK(report.domain_size == 81);
  CHECK(report.cube_roots >= 1);  // the identity
  CHECK(report.passed());

  RingRk ring(3);
  CHECK(in_torsion_proxy_domain(RMatrix::identity(ring, 1)));
  RMatrix x(ring, 1);
  x.set(0, 0, ring.x());
  CHECK(x * x * x == RMatrix::identity(ring, 1));
  CHECK_FALSE(in_torsion_proxy_domain(x));  // x - 1 = pi
  CHECK_THROWS_AS(torsion_proxy_check(1, 2), std::invalid_argument);
}

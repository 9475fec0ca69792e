#pragma once

#include <array>
#include <map>
#include <string>

#include "pgroup/pc.hpp"
#include "pgroup/subgroup.hpp"

namespace fixtures {

inline constexpr const char* kHeisenberg3 =
    "group heisenberg3 p=3 n=3\n"
    "pow 1:\n"
    "pow 2:\n"
    "pow 3:\n"
    "comm 2 1: 3^1\n";

// 3^{1+2} of exponent 9: g1^3 = g3 central, [g2, g1] = g3.
inline constexpr const char* kExtraspecial9 =
    "group extraspecial3_exp9 p=3 n=3\n"
    "pow 1: 3^1\n"
    "comm 2 1: 3^1\n";

inline constexpr const char* kC3 = "group c3 p=3 n=1\npow 1:\n";

inline constexpr const char* kC9 = "group c9 p=3 n=2\npow 1: 2^1\n";

inline constexpr const char* kC9xC9 =
    "group c9xc9 p=3 n=4\n"
    "pow 1: 3^1\n"
    "pow 2: 4^1\n";

inline constexpr const char* kC9xC3 = "group c9xc3 p=3 n=3\npow 1: 3^1\n";

inline pgroup::GroupPtr make(const char* text) { return pgroup::Group::create(pgroup::parse_pcp(text)); }

inline pgroup::Subgroup whole(const char* text) { return pgroup::Subgroup::whole(make(text)); }

inline pgroup::GroupElement elem(std::initializer_list<int> e) { return pgroup::GroupElement{std::vector<int>(e)}; }

/// 3x3 upper unitriangular matrices over Z/p.
struct Unitri {
  std::array<int, 3> v{};  // (1,2), (2,3), (1,3) entries
  int p = 3;
  Unitri operator*(const Unitri& o) const {
    return {{(v[0] + o.v[0]) % p, (v[1] + o.v[1]) % p, (v[2] + o.v[2] + v[0] * o.v[1]) % p}, p};
  }
  Unitri inv() const {
    int a = (p - v[0]) % p, b = (p - v[1]) % p;
    // (a, b, c) * (a', b', c') = 1  =>  c' = -c - a b'
    int c = ((-v[2] - v[0] * b) % p + p * p) % p;
    return {{a, b, c}, p};
  }
  bool operator==(const Unitri&) const = default;
  bool operator<(const Unitri& o) const { return v < o.v; }
};

inline Unitri upow(Unitri x, int e) {
  Unitri r{{0, 0, 0}, x.p};
  for (int i = 0; i < e; ++i) r = r * x;
  return r;
}

}  // namespace fixtures

#include <set>
#include <vector>

namespace fixtures {

/// Subgroup generated by gens, by breadth-first multiplication.  Independent
/// of the igs machinery; returns element ranks.
inline std::set<std::uint64_t> brute_closure(const pgroup::Group& g, const std::vector<pgroup::GroupElement>& gens) {
  std::set<std::uint64_t> seen{g.rank(g.identity())};
  std::vector<pgroup::GroupElement> frontier{g.identity()};
  while (!frontier.empty()) {
    std::vector<pgroup::GroupElement> next;
    for (const auto& x : frontier)
      for (const auto& s : gens) {
        auto y = g.multiply(x, s);
        if (seen.insert(g.rank(y)).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return seen;
}

inline std::set<std::uint64_t> ranks(const pgroup::Subgroup& h) {
  std::set<std::uint64_t> out;
  h.for_each_element([&](const pgroup::GroupElement& x) { out.insert(h.group().rank(x)); });
  return out;
}

}  // namespace fixtures

#include "pgroup/series.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace pgroup {

namespace {

int powerful_exponent(const Subgroup& h) { return h.group().prime() == 2 ? 4 : h.group().prime(); }

void sort_subgroups(std::vector<Subgroup>& v) {
  std::sort(v.begin(), v.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.log_order() != b.log_order()) return a.log_order() < b.log_order();
    return a.key() < b.key();
  });
}

}  // namespace

Subgroup agemo(const Subgroup& h, int e) {
  const Group& g = h.group();
  if (e == 0) e = g.prime();
  std::unordered_set<std::uint64_t> seen;
  std::vector<GroupElement> powers;
  h.for_each_element([&](const GroupElement& x) {
    GroupElement y = g.power(x, e);
    if (!y.is_identity() && seen.insert(g.rank(y)).second) powers.push_back(std::move(y));
  });
  return closure(h.group_ptr(), powers);
}

Subgroup commutator_subgroup(const Subgroup& a, const Subgroup& b) {
  const Group& g = a.group();
  std::vector<GroupElement> comms;
  for (const auto& x : a.igs())
    for (const auto& y : b.igs()) {
      auto c = g.commutator(x, y);
      if (!c.is_identity()) comms.push_back(std::move(c));
    }
  return normal_closure_in(join(a, b), comms);
}

Subgroup derived(const Subgroup& h) { return commutator_subgroup(h, h); }

SeriesProfile lower_central_series(const Subgroup& h) {
  SeriesProfile s;
  s.terms.push_back(h);
  while (!s.terms.back().is_trivial()) {
    Subgroup next = commutator_subgroup(s.terms.back(), h);
    if (next == s.terms.back()) break;  // unreachable for p-groups
    s.indices.push_back(s.terms.back().log_order() - next.log_order());
    s.terms.push_back(std::move(next));
  }
  return s;
}

Subgroup gamma(const Subgroup& h, int i) {
  Subgroup term = h;
  for (int k = 1; k < i && !term.is_trivial(); ++k) term = commutator_subgroup(term, h);
  return term;
}

SeriesProfile lower_central_p_series(const Subgroup& h) {
  SeriesProfile s;
  s.terms.push_back(h);
  while (!s.terms.back().is_trivial()) {
    const Subgroup& cur = s.terms.back();
    Subgroup next = join(agemo(cur), commutator_subgroup(cur, h));
    s.indices.push_back(cur.log_order() - next.log_order());
    s.terms.push_back(std::move(next));
  }
  return s;
}

Subgroup frattini(const Subgroup& h) { return join(agemo(h), derived(h)); }

int min_gens(const Subgroup& h) { return h.log_order() - frattini(h).log_order(); }

bool is_abelian(const Subgroup& h) {
  const Group& g = h.group();
  const auto& gens = h.igs();
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b)
      if (!g.commutator(gens[a], gens[b]).is_identity()) return false;
  return true;
}

Omega1 omega1(const Subgroup& h) {
  const Group& g = h.group();
  std::vector<GroupElement> order_p;
  h.for_each_element([&](const GroupElement& x) {
    if (!x.is_identity() && g.power(x, g.prime()).is_identity()) order_p.push_back(x);
  });
  Omega1 out{closure(h.group_ptr(), order_p), false};
  bool exponent_p = true;
  for (const auto& y : out.subgroup.igs())
    if (!g.power(y, g.prime()).is_identity()) exponent_p = false;
  out.elementary_abelian = exponent_p && is_abelian(out.subgroup);
  return out;
}

Subgroup center(const Subgroup& h) {
  const Group& g = h.group();
  std::vector<GroupElement> central;
  h.for_each_element([&](const GroupElement& x) {
    for (const auto& y : h.igs())
      if (g.multiply(x, y) != g.multiply(y, x)) return;
    if (!x.is_identity()) central.push_back(x);
  });
  return closure(h.group_ptr(), central);
}

bool is_powerful(const Subgroup& h) { return agemo(h, powerful_exponent(h)).contains(derived(h)); }

bool is_potent(const Subgroup& h) { return agemo(h).contains(gamma(h, h.group().prime() - 1)); }

bool is_p_central(const Subgroup& h) { return center(h).contains(omega1(h).subgroup); }

bool is_powerfully_embedded(const Subgroup& n, const Subgroup& g) {
  return agemo(n, powerful_exponent(n)).contains(commutator_subgroup(n, g));
}

bool uniform_segment(const Subgroup& h) {
  auto s = lower_central_p_series(h);
  return std::adjacent_find(s.indices.begin(), s.indices.end(), std::not_equal_to<>()) == s.indices.end();
}

DProfile d_profile(const Subgroup& h) {
  DProfile out;
  out.d = lower_central_p_series(h).indices;
  out.non_increasing = std::is_sorted(out.d.rbegin(), out.d.rend());
  return out;
}

SubgroupScan all_subgroups(const Subgroup& h, std::size_t max_count) {
  const Group& g = h.group();
  if (h.log_order() > 6)
    throw CapExceeded("subgroup enumeration requires |H| <= p^6, got p^" + std::to_string(h.log_order()));
  SubgroupScan scan;
  const auto elems = h.elements();
  std::vector<Subgroup> layer{Subgroup(h.group_ptr())};
  scan.subgroups.push_back(layer.front());
  while (!layer.empty()) {
    std::map<std::string, Subgroup> next;
    for (const auto& k : layer) {
      std::unordered_set<std::uint64_t> covered;
      for (const auto& x : elems) {
        if (covered.count(g.rank(x)) || k.contains(x)) continue;
        if (!k.contains(g.power(x, g.prime()))) continue;
        bool normalises = true;
        for (const auto& y : k.igs())
          if (!k.contains(g.conjugate(y, x))) {
            normalises = false;
            break;
          }
        if (!normalises) continue;
        Subgroup m = join(k, x);
        m.for_each_element([&](const GroupElement& z) { covered.insert(g.rank(z)); });
        next.try_emplace(m.key(), std::move(m));
      }
    }
    layer.clear();
    for (auto& [key, sub] : next) {
      if (scan.subgroups.size() >= max_count) {
        scan.complete = false;
        return scan;
      }
      scan.subgroups.push_back(sub);
      layer.push_back(std::move(sub));
    }
  }
  return scan;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Verdict is_hereditarily_powerful(const Subgroup& h, std::size_t max_count) {
  auto scan = all_subgroups(h, max_count);
  for (const auto& k : scan.subgroups)
    if (!is_powerful(k)) return Verdict::False;
  return scan.complete ? Verdict::True : Verdict::Indeterminate;
}

std::vector<Subgroup> maximal_subgroups(const Subgroup& h) {
  const Group& g = h.group();
  const int p = g.prime();
  Subgroup phi = frattini(h);
  std::vector<GroupElement> basis;  // lifts of a basis of H / Phi(H)
  Subgroup span = phi;
  for (const auto& y : h.igs())
    if (!span.contains(y)) {
      basis.push_back(y);
      span = join(span, y);
    }
  const int d = static_cast<int>(basis.size());
  std::vector<Subgroup> out;
  // Hyperplanes <-> functionals f with first nonzero coordinate 1.
  std::vector<int> f(d, 0);
  const std::uint64_t total = checked_pow(static_cast<std::uint64_t>(p), d);
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    for (int i = d - 1; i >= 0; --i) {
      f[i] = static_cast<int>(c % static_cast<std::uint64_t>(p));
      c /= static_cast<std::uint64_t>(p);
    }
    int q = 0;
    while (f[q] == 0) ++q;
    if (f[q] != 1) continue;
    std::vector<GroupElement> gens = phi.igs();
    for (int i = 0; i < d; ++i) {
      if (i == q) continue;
      // e_i - f_i e_q
      GroupElement v = basis[i];
      int coeff = (p - f[i]) % p;
      if (coeff != 0) v = g.multiply(v, g.power(basis[q], coeff));
      gens.push_back(std::move(v));
    }
    out.push_back(closure(h.group_ptr(), gens));
  }
  sort_subgroups(out);
  return out;
}

std::vector<Subgroup> subgroups_of_index_at_most(const Subgroup& h, int j, std::size_t max_count) {
  std::vector<Subgroup> out{h};
  std::vector<Subgroup> layer{h};
  for (int level = 0; level < j; ++level) {
    std::map<std::string, Subgroup> next;
    for (const auto& k : layer)
      for (auto& m : maximal_subgroups(k)) next.try_emplace(m.key(), std::move(m));
    layer.clear();
    for (auto& [key, sub] : next) {
      if (out.size() >= max_count) throw CapExceeded("subgroup count budget exceeded");
      out.push_back(sub);
      layer.push_back(std::move(sub));
    }
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.log_order() != b.log_order()) return a.log_order() > b.log_order();
    return a.key() < b.key();
  });
  return out;
}

std::uint64_t pth_power_image_size(const Subgroup& h) {
  const Group& g = h.group();
  std::unordered_set<std::uint64_t> image;
  h.for_each_element([&](const GroupElement& x) { image.insert(g.rank(g.power(x, g.prime()))); });
  return image.size();
}

HallReport hall_congruence_check(const Subgroup& h, std::uint64_t trials, std::uint64_t seed) {
  const Group& g = h.group();
  const int p = g.prime();
  HallReport report;
  std::unordered_map<std::string, Subgroup> modulus_cache;
  auto modulus = [&](const Subgroup& k) -> const Subgroup& {
    auto key = k.key();
    auto it = modulus_cache.find(key);
    if (it == modulus_cache.end())
      it = modulus_cache.emplace(key, join(agemo(derived(k)), gamma(k, p))).first;
    return it->second;
  };
  auto check = [&](const GroupElement& x, const GroupElement& u) {
    ++report.pairs_checked;
    GroupElement lhs = g.power(g.multiply(x, u), p);
    GroupElement rhs = g.multiply(g.power(x, p), g.power(u, p));
    GroupElement quotient = g.multiply(lhs, g.inverse(rhs));
    if (quotient.is_identity()) return;
    std::vector<GroupElement> gens{x, u};
    if (!modulus(closure(h.group_ptr(), gens)).contains(quotient)) report.violations.push_back({x, u});
  };
  const std::uint64_t n = h.order();
  if (n <= g.limits().enum_cap && n * n <= trials) {
    report.exhaustive = true;
    const auto elems = h.elements();
    for (const auto& x : elems)
      for (const auto& u : elems) check(x, u);
    return report;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> digit(0, p - 1);
  auto random_element = [&] {
    GroupElement x = g.identity();
    for (const auto& y : h.igs()) x = g.multiply(x, g.power(y, digit(rng)));
    return x;
  };
  for (std::uint64_t t = 0; t < trials; ++t) check(random_element(), random_element());
  return report;
}

}  // namespace pgroup

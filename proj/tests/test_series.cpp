#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "pgroup/series.hpp"

using namespace pgroup;
using fixtures::elem;

namespace {

constexpr const char* kElem3_3 = "group c3^3 p=3 n=3\n";
constexpr const char* kZ9sq = fixtures::kC9xC9;
constexpr const char* kZ27cubed =
    "group c27^3 p=3 n=9\n"
    "pow 1: 4^1\npow 2: 5^1\npow 3: 6^1\n"
    "pow 4: 7^1\npow 5: 8^1\npow 6: 9^1\n";

std::set<std::uint64_t> brute_elements_where(const Group& g, auto pred) {
  std::set<std::uint64_t> out;
  g.for_each_element([&](const GroupElement& x) {
    if (pred(x)) out.insert(g.rank(x));
  });
  return out;
}

// Oracle: every subgroup generated by at most two elements.
std::set<std::set<std::uint64_t>> two_generated_subgroups(const Group& g) {
  auto elems = g.enumerate_elements();
  std::set<std::set<std::uint64_t>> out;
  for (const auto& x : elems)
    for (const auto& y : elems) out.insert(fixtures::brute_closure(g, {x, y}));
  return out;
}

}  // namespace

TEST_CASE("closures") {
  auto heis = fixtures::make(fixtures::kHeisenberg3);
  CHECK(closure(heis, std::vector<GroupElement>{}).order() == 1);

  std::vector<GroupElement> z{heis->generator(2)};
  auto c = closure(heis, z);
  CHECK(c.order() == 3);
  CHECK(c.is_normal());
  // The centre of the unitriangular model is {I + c E13}.
  auto centre_oracle = brute_elements_where(*heis, [&](const GroupElement& x) {
    bool central = true;
    heis->for_each_element([&](const GroupElement& y) { central = central && heis->multiply(x, y) == heis->multiply(y, x); });
    return central;
  });
  CHECK(fixtures::ranks(c) == centre_oracle);
  CHECK(fixtures::ranks(center(Subgroup::whole(heis))) == centre_oracle);

  std::vector<GroupElement> g1{heis->generator(0)};
  auto h = closure(heis, g1);
  CHECK(h.order() == 3);
  CHECK_FALSE(h.is_normal());
  auto n = normal_closure(heis, g1);
  CHECK(n.order() == 9);
  // Oracle: closure of all conjugates of g1.
  std::vector<GroupElement> conjugates;
  heis->for_each_element([&](const GroupElement& y) { conjugates.push_back(heis->conjugate(g1[0], y)); });
  CHECK(fixtures::ranks(n) == fixtures::brute_closure(*heis, conjugates));
}

TEST_CASE("closure agrees with brute force on random generating sets") {
  auto g = fixtures::make(fixtures::kExtraspecial9);
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::uint64_t> pick(0, 26);
  for (int t = 0; t < 100; ++t) {
    std::vector<GroupElement> gens{g->unrank(pick(rng)), g->unrank(pick(rng))};
    auto h = closure(g, gens);
    auto oracle = fixtures::brute_closure(*g, gens);
    CHECK(fixtures::ranks(h) == oracle);
    CHECK(h.order() == oracle.size());
    g->for_each_element([&](const GroupElement& x) { REQUIRE(h.contains(x) == (oracle.count(g->rank(x)) == 1)); });
  }
}

TEST_CASE("agemo") {
  CHECK(agemo(fixtures::whole(kElem3_3)).is_trivial());
  auto c9 = fixtures::whole(fixtures::kC9);
  auto a = agemo(c9);
  CHECK(a.order() == 3);
  CHECK(a.contains(elem({0, 1})));
  CHECK(agemo(fixtures::whole(fixtures::kHeisenberg3)).is_trivial());
  CHECK(agemo(fixtures::whole(fixtures::kExtraspecial9)).order() == 3);
}

TEST_CASE("derived subgroup and lower central series") {
  auto ab = fixtures::whole(kZ9sq);
  CHECK(derived(ab).is_trivial());
  CHECK(lower_central_series(ab).terms.size() == 2);

  auto heis = fixtures::whole(fixtures::kHeisenberg3);
  auto d = derived(heis);
  CHECK(d.order() == 3);
  CHECK(d.contains(elem({0, 0, 1})));
  auto lcs = lower_central_series(heis);
  REQUIRE(lcs.terms.size() == 3);
  CHECK(lcs.terms[1] == d);
  CHECK(lcs.terms[2].is_trivial());
  CHECK(gamma(heis, 3).is_trivial());

  auto ex = fixtures::whole(fixtures::kExtraspecial9);
  auto dex = derived(ex);
  CHECK(dex.order() == 3);
  CHECK(dex.contains(elem({0, 0, 1})));
  // Oracle: closure of all commutators.
  const Group& g = ex.group();
  std::vector<GroupElement> comms;
  g.for_each_element([&](const GroupElement& x) {
    g.for_each_element([&](const GroupElement& y) { comms.push_back(g.commutator(x, y)); });
  });
  CHECK(fixtures::ranks(dex) == fixtures::brute_closure(g, comms));
}

TEST_CASE("frattini and d(G)") {
  CHECK(min_gens(fixtures::whole(kElem3_3)) == 3);
  CHECK(min_gens(fixtures::whole("group c5^4 p=5 n=4\n")) == 4);
  auto heis = fixtures::whole(fixtures::kHeisenberg3);
  CHECK(min_gens(heis) == 2);
  CHECK(frattini(heis) == center(heis));
  CHECK(min_gens(fixtures::whole(fixtures::kC9)) == 1);
}

TEST_CASE("Burnside basis: d(G) random elements can generate, d(G)-1 never do") {
  for (const char* text : {fixtures::kHeisenberg3, fixtures::kExtraspecial9, kZ9sq, kElem3_3}) {
    auto g = fixtures::make(text);
    auto whole = Subgroup::whole(g);
    int d = min_gens(whole);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> pick(0, whole.order() - 1);
    auto sample = [&](int k) {
      std::vector<GroupElement> v;
      for (int i = 0; i < k; ++i) v.push_back(g->unrank(pick(rng)));
      return v;
    };
    bool generated = false;
    for (int t = 0; t < 200 && !generated; ++t) generated = closure(g, sample(d)).is_whole();
    CHECK(generated);
    for (int t = 0; t < 200; ++t) REQUIRE_FALSE(closure(g, sample(d - 1)).is_whole());
  }
}

TEST_CASE("omega1") {
  auto heis = omega1(fixtures::whole(fixtures::kHeisenberg3));
  CHECK(heis.subgroup.order() == 27);
  CHECK_FALSE(heis.elementary_abelian);

  auto c9 = omega1(fixtures::whole(fixtures::kC9));
  CHECK(c9.subgroup.order() == 3);
  CHECK(c9.elementary_abelian);

  auto exg = fixtures::make(fixtures::kExtraspecial9);
  auto ex = omega1(Subgroup::whole(exg));
  CHECK(ex.subgroup.order() == 9);
  CHECK(ex.elementary_abelian);
  // Oracle: the order-3 elements plus 1 already form the subgroup.
  auto order3 = brute_elements_where(*exg, [&](const GroupElement& x) { return exg->power(x, 3).is_identity(); });
  CHECK(order3.size() == 9);
  CHECK(fixtures::ranks(ex.subgroup) == order3);
}

TEST_CASE("lower central p-series") {
  CHECK(lower_central_p_series(fixtures::whole(fixtures::kC9)).indices == std::vector<int>{1, 1});
  auto heis = fixtures::whole(fixtures::kHeisenberg3);
  auto s = lower_central_p_series(heis);
  CHECK(s.indices == std::vector<int>{2, 1});
  CHECK(s.terms[1] == derived(heis));
  CHECK(lower_central_p_series(fixtures::whole(kZ9sq)).indices == std::vector<int>{2, 2});
}

TEST_CASE("predicates") {
  auto ab = fixtures::whole(kZ9sq);
  CHECK(is_powerful(ab));
  CHECK(is_potent(ab));
  CHECK(is_p_central(ab));

  auto heis = fixtures::whole(fixtures::kHeisenberg3);
  CHECK_FALSE(is_powerful(heis));
  CHECK_FALSE(is_potent(heis));
  CHECK_FALSE(is_p_central(heis));

  auto ex = fixtures::whole(fixtures::kExtraspecial9);
  CHECK(is_powerful(ex));
  CHECK(derived(ex) == agemo(ex));
  CHECK_FALSE(is_p_central(ex));  // Omega_1 = <g2, g3> is larger than Z = <g3>

  CHECK(is_powerfully_embedded(center(ex), ex));
  CHECK(is_powerfully_embedded(ex, ex));
  CHECK_FALSE(is_powerfully_embedded(heis, heis));

  // Q8 at p = 2: [Q8, Q8] = <-1> is not contained in Q8^4 = 1.
  auto q8 = fixtures::whole("group q8 p=2 n=3\npow 1: 3^1\npow 2: 3^1\ncomm 2 1: 3^1\n");
  CHECK(agemo(q8).order() == 2);
  CHECK_FALSE(is_powerful(q8));
  CHECK(is_powerful(fixtures::whole("group c4xc4 p=2 n=4\npow 1: 3^1\npow 2: 4^1\n")));
}

TEST_CASE("uniform segment and d-profile") {
  CHECK(uniform_segment(fixtures::whole(kZ9sq)));
  CHECK(uniform_segment(fixtures::whole(kZ27cubed)));
  CHECK_FALSE(uniform_segment(fixtures::whole(fixtures::kHeisenberg3)));
  CHECK_FALSE(uniform_segment(fixtures::whole(fixtures::kC9xC3)));

  auto heis = d_profile(fixtures::whole(fixtures::kHeisenberg3));
  CHECK(heis.d == std::vector<int>{2, 1});
  CHECK(heis.non_increasing);
  CHECK(d_profile(fixtures::whole(kZ27cubed)).d == std::vector<int>{3, 3, 3});
}

TEST_CASE("subgroup enumeration matches the two-generator oracle") {
  for (const char* text : {fixtures::kHeisenberg3, fixtures::kExtraspecial9, fixtures::kC9xC3}) {
    auto g = fixtures::make(text);
    auto scan = all_subgroups(Subgroup::whole(g));
    CHECK(scan.complete);
    std::set<std::set<std::uint64_t>> found;
    for (const auto& h : scan.subgroups) found.insert(fixtures::ranks(h));
    CHECK(found.size() == scan.subgroups.size());
    CHECK(found == two_generated_subgroups(*g));
  }
  CHECK(all_subgroups(fixtures::whole(fixtures::kHeisenberg3)).subgroups.size() == 19);
  auto partial = all_subgroups(fixtures::whole(fixtures::kHeisenberg3), 5);
  CHECK_FALSE(partial.complete);
  CHECK_THROWS_AS(all_subgroups(fixtures::whole("group c3^7 p=3 n=7\n")), CapExceeded);
}

TEST_CASE("hereditarily powerful") {
  CHECK(is_hereditarily_powerful(fixtures::whole(fixtures::kC9xC3)) == Verdict::True);
  CHECK(is_hereditarily_powerful(fixtures::whole(fixtures::kHeisenberg3)) == Verdict::False);
  CHECK(is_hereditarily_powerful(fixtures::whole(fixtures::kExtraspecial9)) == Verdict::True);
  CHECK(is_hereditarily_powerful(fixtures::whole(fixtures::kC9xC3), 3) == Verdict::Indeterminate);
}

TEST_CASE("maximal subgroups and bounded-index subgroups") {
  auto heis = fixtures::whole(fixtures::kHeisenberg3);
  auto maxes = maximal_subgroups(heis);
  CHECK(maxes.size() == 4);
  for (const auto& m : maxes) {
    CHECK(m.order() == 9);
    CHECK(m.is_normal());
  }
  CHECK(subgroups_of_index_at_most(heis, 1).size() == 5);
  // Index <= 9: G, 4 of order 9, and the 13 subgroups of order 3.
  CHECK(subgroups_of_index_at_most(heis, 2).size() == 18);
  CHECK(maximal_subgroups(fixtures::whole(kElem3_3)).size() == 13);
}

TEST_CASE("p-th power image") {
  CHECK(pth_power_image_size(fixtures::whole(kZ9sq)) == 9);
  CHECK(pth_power_image_size(fixtures::whole(kZ27cubed)) == 729);
  CHECK(pth_power_image_size(fixtures::whole(fixtures::kHeisenberg3)) == 1);
  CHECK(pth_power_image_size(fixtures::whole(fixtures::kExtraspecial9)) == 3);
}

TEST_CASE("Hall collection congruence") {
  auto ab = hall_congruence_check(fixtures::whole(kZ9sq), 1'000'000);
  CHECK(ab.exhaustive);
  CHECK(ab.violations.empty());
  auto heis = hall_congruence_check(fixtures::whole(fixtures::kHeisenberg3), 1'000'000);
  CHECK(heis.exhaustive);
  CHECK(heis.pairs_checked == 729);
  CHECK(heis.violations.empty());
  auto ex = hall_congruence_check(fixtures::whole(fixtures::kExtraspecial9), 1'000'000);
  CHECK(ex.exhaustive);
  CHECK(ex.violations.empty());
  auto sampled = hall_congruence_check(fixtures::whole(fixtures::kExtraspecial9), 50);
  CHECK_FALSE(sampled.exhaustive);
  CHECK(sampled.pairs_checked == 50);
}

TEST_CASE("structural invariants on small groups") {
  for (const char* text : {fixtures::kHeisenberg3, fixtures::kExtraspecial9, kZ9sq, fixtures::kC9xC3, kElem3_3}) {
    auto g = fixtures::whole(text);
    CAPTURE(g.group().name());
    int d = min_gens(g);
    auto om = omega1(g).subgroup;
    CHECK(d <= om.log_order());  // Laffey
    if (is_powerful(g)) {
      CHECK(g.log_order() - agemo(g).log_order() == om.log_order());  // Wilson
      CHECK(d_profile(g).non_increasing);
    }
    if (is_p_central(g)) CHECK(g.log_order() - agemo(g).log_order() <= om.log_order());
    CHECK(lower_central_p_series(g).terms[1] == frattini(g));
    // Monotonicity: H <= G gives H^p <= G^p and [H,H] <= [G,G].
    for (const auto& h : all_subgroups(g).subgroups) {
      CHECK(agemo(g).contains(agemo(h)));
      CHECK(derived(g).contains(derived(h)));
      CHECK(frattini(g).contains(frattini(h)) == true);
    }
  }
}

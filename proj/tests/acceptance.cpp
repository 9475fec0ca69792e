// Acceptance run: one PASS/FAIL line per criterion, with its runtime limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "pgroup/cp_lattice.hpp"
#include "pgroup/harness.hpp"
#include "pgroup/ramified.hpp"

using namespace pgroup;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

int failures = 0;

void criterion(const char* id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > limit_s) o.require(false, "runtime over limit");
  failures += !o.ok;
  std::printf("%-5s %s  %s  [%.2f s, limit %.0f s]%s%s\n", id, o.ok ? "PASS" : "FAIL", title, secs, limit_s,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
}

TowerQuotient tower(const std::string& spec) { return build_tower(TowerSpec::parse(spec)); }

ModPkMatrix random_invertible(int p, int k, int n, std::mt19937_64& rng) {
  ModPkMatrix m(p, k, n, n);
  std::uniform_int_distribution<std::int64_t> dist(0, m.modulus() - 1);
  do {
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m.set(r, c, dist(rng));
  } while (!m.is_invertible());
  return m;
}

}  // namespace

int main() {
  criterion("AC1", "maximal-class quotients at levels 1 and 2: d = 2 and not powerful", 1, [] {
    Outcome o;
    for (int n : {1, 2}) {
      auto q = tower("maxclass3:3:-:-:-:" + std::to_string(n));
      auto g = Subgroup::whole(q.group);
      o.require(min_gens(g) == 2, "level " + std::to_string(n) + ": d != 2");
      o.require(!is_powerful(g), "level " + std::to_string(n) + ": powerful");
    }
    return o;
  });

  criterion("AC2", "lattice decomposition of the three seeds at p = 3, k = 4, stable under 100 conjugations", 5, [] {
    Outcome o;
    const int p = 3, k = 4;
    struct Seed {
      const char* name;
      ModPkMatrix a;
      int m1, m2, m3;
    };
    std::vector<Seed> seeds{{"identity", ModPkMatrix::identity(p, k, 2), 2, 0, 0},
                            {"companion", cyclotomic_companion(p, k), 0, 1, 0},
                            {"3-cycle", cyclic_permutation(p, k), 0, 0, 1}};
    std::mt19937_64 rng(7);
    int runs = 0;
    for (const auto& s : seeds) {
      for (int t = 0; t <= 100; ++t) {
        ModPkMatrix a = s.a;
        if (t > 0) {
          auto c = random_invertible(p, k, a.rows(), rng);
          a = c * a * c.inverse();
        }
        auto act = CpLatticeAction::from_matrix(a);
        auto res = decompose(act);
        auto coh = cohomology_orders(act);
        ++runs;
        bool exact = res.m1 == s.m1 && res.m2 == s.m2 && res.m3 == s.m3;
        // H^0 counts trivial summands, H^1 counts cyclotomic ones.
        bool coh_ok = coh.log_h0 == res.m1 && coh.log_h1 == res.m2;
        o.require(exact, std::string(s.name) + " gave a different decomposition");
        o.require(coh_ok, std::string(s.name) + " cohomology disagrees");
        if (!exact || !coh_ok) return o;
      }
    }
    o.detail = std::to_string(runs) + " decompositions";
    return o;
  });

  criterion("AC3", "Omega_1 of levels 2 and 3 is the deepest layer of order 3^dim; maximal class expected-negative", 30, [] {
    Outcome o;
    for (const char* s : {"abelian:3:2:-:-:3", "abelian:3:3:-:-:3", "scalar:3:2:1:+:3", "scalar:3:3:1:+:3"}) {
      auto r = omega1_tower_check(TowerSpec::parse(s), 3);
      o.require(r.status == Status::Pass && r.rows.size() == 2, std::string(s) + " " + to_string(r.status));
    }
    auto mc = omega1_tower_check(TowerSpec::parse("maxclass3:3:-:-:-:2"), 2);
    o.require(mc.status == Status::ExpectedNegative, "maximal class: " + to_string(mc.status));
    return o;
  });

  criterion("AC4", "coset power sets equal x^p N^p on every coset, power image |G|/9", 30, [] {
    Outcome o;
    auto r = coset_power_check(tower("scalar:3:2:1:+:3"), 1'000'000);
    o.require(r.cosets_checked == r.cosets_total, "not every coset checked");
    o.require(r.failing_cosets.empty(), std::to_string(r.failing_cosets.size()) + " failing cosets");
    o.require(r.power_image_ok && r.power_image_size * 9 == checked_pow(3, 6), "power image size at n = 3");
    auto r2 = coset_power_check(tower("scalar:3:2:1:+:2"), 1'000'000);
    o.require(r2.power_image_ok && r2.power_image_size * 9 == checked_pow(3, 4), "power image size at n = 2");
    o.detail = std::to_string(r.cosets_total) + " cosets, |{x^3}| = " + std::to_string(r.power_image_size);
    return o;
  });

  criterion("AC5", "a power of y lands in N \\ N^p; w expected-negative", 5, [] {
    Outcome o;
    auto s = tower("scalar:3:2:1:+:3");
    auto r = power_escape_check(s, s.designated);
    o.require(r.found && r.status == Status::Pass, "no witness for y");
    auto m = tower("maxclass3:3:-:-:-:2");
    auto rm = power_escape_check(m, m.designated);
    o.require(rm.status == Status::ExpectedNegative, "maximal class: " + to_string(rm.status));
    if (o.ok) o.detail = "witness y^" + std::to_string(r.witness_exponent);
    return o;
  });

  criterion("AC6", "question harness on the bundled catalog: no backward witness, forward and bounds hold", 120, [] {
    Outcome o;
    Limits limits;
    limits.enum_cap = 10'000'000;
    auto cat = load_catalog("bundled", limits);
    auto r = run_question_harness(cat, 4);
    o.require(r.summary.forward_fail == 0, std::to_string(r.summary.forward_fail) + " forward failures");
    std::string witnesses;
    for (const auto& v : r.verdicts)
      if (v.direction_backward_witness) witnesses += " " + v.group;
    o.require(r.summary.backward_witnesses == 0,
              std::to_string(r.summary.backward_witnesses) + " backward witness(es):" + witnesses);
    std::size_t bound_bad = 0, eq_bad = 0, pc_bad = 0;
    for (const auto& e : cat.entries) {
      const auto& inv = e->invariants();
      if (inv.p == 2) continue;
      bound_bad += inv.d > inv.omega1_log;
      eq_bad += inv.powerful && inv.index_log != inv.omega1_log;
      pc_bad += inv.p_central && inv.index_log > inv.omega1_log;
    }
    o.require(bound_bad == 0, "d-bound fails on " + std::to_string(bound_bad));
    o.require(eq_bad == 0, "index equality fails on " + std::to_string(eq_bad));
    o.require(pc_bad == 0, "p-central bound fails on " + std::to_string(pc_bad));
    std::ostringstream os;
    os << r.summary.entries << " entries, " << r.summary.powerful << " powerful, forward " << r.summary.forward_pass
       << "/" << r.summary.powerful;
    o.detail = o.detail.empty() ? os.str() : os.str() + "; " + o.detail;
    return o;
  });

  criterion("AC7", "Hall congruence: exhaustive pair check on catalog groups of order <= 81", 120, [] {
    Outcome o;
    auto cat = load_catalog("bundled");
    std::size_t groups = 0;
    std::uint64_t pairs = 0;
    for (const auto& e : cat.entries) {
      if (checked_pow(e->group()->prime(), e->group()->ngens()) > 81) continue;
      auto r = hall_congruence_check(Subgroup::whole(e->group()), 1'000'000);
      ++groups;
      pairs += r.pairs_checked;
      o.require(r.exhaustive, e->name() + " not exhaustive");
      o.require(r.violations.empty(), e->name() + " has violations");
    }
    o.require(groups == 20, std::to_string(groups) + " groups, expected 20");
    if (o.ok) o.detail = std::to_string(groups) + " groups, " + std::to_string(pairs) + " pairs";
    return o;
  });

  criterion("AC8", "non-increasing d-profiles; torsion-free powerful towers have constant index p^dim", 60, [] {
    Outcome o;
    auto cat = load_catalog("bundled");
    std::size_t checked = 0;
    for (const auto& e : cat.entries) {
      if (!e->invariants().powerful) continue;
      ++checked;
      o.require(d_profile(Subgroup::whole(e->group())).non_increasing, e->name());
    }
    for (const char* s : {"abelian:3:2:-:-:3", "abelian:3:3:-:-:2", "scalar:3:2:1:+:3", "scalar:3:3:1:+:2",
                          "scalar:5:2:1:+:2", "scalar:3:2:2:+:3", "heredpowerful:3:2,1:1:-:2", "maxclass3:3:-:-:-:2"}) {
      auto spec = TowerSpec::parse(s);
      auto q = build_tower(spec);
      auto g = Subgroup::whole(q.group);
      if (!is_powerful(g)) continue;
      ++checked;
      auto prof = d_profile(g);
      o.require(prof.non_increasing, s);
      if (spec.torsion_free())
        for (int x : prof.d) o.require(x == spec.dim(), std::string(s) + " not constant");
    }
    if (o.ok) o.detail = std::to_string(checked) + " powerful groups";
    return o;
  });

  criterion("AC9", "level-4 quotients: every subgroup of index <= 9 has d = family d", 120, [] {
    Outcome o;
    for (const char* s : {"abelian:3:2:-:-:4", "scalar:3:2:1:+:4", "maxclass3:3:-:-:-:4"}) {
      auto r = constant_d_check(tower(s), 2);
      o.require(r.status == Status::Pass && r.d_spectrum == std::vector<int>{2}, s);
      o.detail += (o.detail.empty() ? "" : ", ") + std::to_string(r.subgroups) + " subgroups";
    }
    return o;
  });

  criterion("AC10", "GL^1/GL^2 over Z_3[omega] elementary abelian of order 3^(m^2); torsion proxy at m = 1, k = 3", 60, [] {
    Outcome o;
    for (int m : {1, 2}) {
      auto l = gl_congruence_layer(m, 2, 1, 2);
      o.require(l.elementary_abelian && l.closed, "m = " + std::to_string(m) + " not elementary abelian");
      o.require(l.log3_order == m * m, "m = " + std::to_string(m) + " order 3^" + std::to_string(l.log3_order));
    }
    o.require(torsion_proxy_check(1, 3).passed(), "torsion proxy");
    return o;
  });

  criterion("AC11", "hereditary powerfulness by exhaustive subgroup scans", 120, [] {
    Outcome o;
    for (const char* s : {"heredpowerful:3:2,1:1:-:1", "scalar:3:2:1:+:2", "scalar:3:2:1:+:1"}) {
      auto r = hereditary_check(tower(s));
      o.require(r.verdict == Verdict::True && r.status == Status::Pass, s);
    }
    auto m = hereditary_check(tower("maxclass3:3:-:-:-:1"));
    o.require(m.verdict == Verdict::False, "maximal class");
    return o;
  });

  std::printf("%d criteria failed\n", failures);
  return failures ? 1 : 0;
}

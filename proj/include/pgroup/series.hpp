#pragma once

// Invariants and predicates of finite p-groups.  Every operation takes a
// Subgroup H and treats it as a group in its own right; pass
// Subgroup::whole(G) for G itself.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pgroup/subgroup.hpp"

namespace pgroup {

struct SeriesProfile {
  std::vector<Subgroup> terms;  // descending, ending at the trivial subgroup
  std::vector<int> indices;     // log_p |term_i : term_{i+1}|
};

/// <x^e : x in H>, by enumerating H.  Default e = p.
Subgroup agemo(const Subgroup& h, int e = 0);
/// [A, B] for subgroups that normalise each other.
Subgroup commutator_subgroup(const Subgroup& a, const Subgroup& b);
Subgroup derived(const Subgroup& h);
/// gamma_1 = H, gamma_{i+1} = [gamma_i, H], down to the trivial subgroup.
SeriesProfile lower_central_series(const Subgroup& h);
/// gamma_i(H), 1-based.
Subgroup gamma(const Subgroup& h, int i);
/// P_1 = H, P_{i+1} = P_i^p [P_i, H].
SeriesProfile lower_central_p_series(const Subgroup& h);

/// H^p [H, H]
Subgroup frattini(const Subgroup& h);
/// d(H) = log_p |H : Phi(H)|
int min_gens(const Subgroup& h);

struct Omega1 {
  Subgroup subgroup;
  bool elementary_abelian = false;
};
Omega1 omega1(const Subgroup& h);

/// Z(H), as the elements of H commuting with its igs.
Subgroup center(const Subgroup& h);
bool is_abelian(const Subgroup& h);

/// [H,H] <= H^p, or [H,H] <= H^4 when p = 2.
bool is_powerful(const Subgroup& h);
/// gamma_{p-1}(H) <= H^p
bool is_potent(const Subgroup& h);
/// Omega_1(H) <= Z(H)
bool is_p_central(const Subgroup& h);
/// [N, G] <= N^p (N^4 when p = 2); N must be normal in G.
bool is_powerfully_embedded(const Subgroup& n, const Subgroup& g);

/// True iff every nontrivial step of the lower central p-series has the
/// same index.
bool uniform_segment(const Subgroup& h);

struct DProfile {
  std::vector<int> d;  // d_i = log_p |P_i : P_{i+1}|
  bool non_increasing = true;
};
DProfile d_profile(const Subgroup& h);

struct SubgroupScan {
  std::vector<Subgroup> subgroups;  // sorted by (order, key)
  bool complete = true;
};
/// Every subgroup of H by cyclic extension.  Requires |H| <= p^6; stops
/// (complete = false) once max_count subgroups are found.
SubgroupScan all_subgroups(const Subgroup& h, std::size_t max_count = 1'000'000);

enum class Verdict { True, False, Indeterminate };
std::string to_string(Verdict v);
/// Every subgroup powerful.  Indeterminate if the scan hit its budget
/// before a non-powerful subgroup was found.
Verdict is_hereditarily_powerful(const Subgroup& h, std::size_t max_count = 1'000'000);

/// Maximal subgroups, as preimages of hyperplanes of H / Phi(H).
std::vector<Subgroup> maximal_subgroups(const Subgroup& h);
/// All subgroups of index at most p^j (including H), sorted by (index, key).
std::vector<Subgroup> subgroups_of_index_at_most(const Subgroup& h, int j, std::size_t max_count = 1'000'000);

/// |{x^p : x in H}|, the set of p-th powers (not the subgroup).
std::uint64_t pth_power_image_size(const Subgroup& h);

struct HallViolation {
  GroupElement x;
  GroupElement u;
};
struct HallReport {
  std::uint64_t pairs_checked = 0;
  bool exhaustive = false;
  std::vector<HallViolation> violations;
};
/// Checks (xu)^p (x^p u^p)^-1 in agemo([K,K]) gamma_p(K), K = <x, u>.
/// All pairs when |H|^2 <= trials, otherwise `trials` seeded random pairs.
HallReport hall_congruence_check(const Subgroup& h, std::uint64_t trials, std::uint64_t seed = 1);

}  // namespace pgroup

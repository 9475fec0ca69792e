#pragma once

// Finite congruence quotients of a few explicit pro-p groups, and the
// finite-level checks run on them.
//
// Abelian(p, d)                Z_p^d
// ScalarMetabelian(p,d,s,sign) <y> x| Z_p^(d-1), y acting as sign (1 + p^s)
// MaximalClass3                <w> x| Z_3[omega], w acting as omega
// HeredPowerful(p, s, e, n)    <b> A, A = sum Z/p^e_i, b of order p^n acting
//                              as 1 + p^s
//
// Level n is G / <y^(p^n), p^n A> for the torsion-free families and
// G / 3^n B for MaximalClass3.  HeredPowerful is already finite; its "level"
// is the exponent n of |b|.

#include <optional>
#include <string>
#include <vector>

#include "pgroup/series.hpp"

namespace pgroup {

enum class Family { Abelian, ScalarMetabelian, MaximalClass3, HeredPowerful };

std::string to_string(Family f);

struct TowerSpec {
  Family family = Family::Abelian;
  int p = 3;
  int d = 1;                 // Abelian, ScalarMetabelian
  std::optional<int> s;      // nullopt is s = infinity (trivial action)
  int sign = 1;              // ScalarMetabelian only
  std::vector<int> torsion;  // HeredPowerful: exponents e_i of A
  int level = 1;

  /// Throws std::invalid_argument.
  void validate() const;
  /// Number of family generators.
  int dim() const;
  bool torsion_free() const;
  /// log_p of the order of the level quotient.
  int log_order() const;
  TowerSpec at_level(int n) const;

  /// "<family>:<p>:<d>:<s>:<sign>:<n>", unused fields "-".
  std::string to_string() const;
  /// Accepts the same grammar, optionally prefixed by "tower ".
  static TowerSpec parse(const std::string& text);
};

/// One spec per "tower ..." line; blank lines and '#' comments skipped.
std::vector<TowerSpec> parse_tower_file(const std::string& text);

struct TowerQuotient {
  TowerSpec spec;
  GroupPtr group;
  std::vector<std::string> labels;  // one per pc generator, e.g. "y0", "a1_2"
  Subgroup marked;                  // image of the designated uniform/abelian subgroup
  GroupElement designated;          // image of y, x1, w or b
  Subgroup power_layer;             // generated by the deepest layer
};

/// Throws std::invalid_argument for bad specs and CapExceeded when the
/// order exceeds limits.enum_cap.
TowerQuotient build_tower(const TowerSpec& spec, const Limits& limits = {});

/// Checks the map sending each generator of `upper` (level n + 1) to the
/// same-labelled generator of `lower` (level n), and the top layer to 1,
/// respects every relation, is onto, and has kernel of order p^(dim) for
/// the tower families.
bool verify_quotient_map(const TowerQuotient& upper, const TowerQuotient& lower);

enum class Status { Pass, Fail, ExpectedNegative, Skipped };
std::string to_string(Status s);

struct OmegaTowerRow {
  int level = 0;
  int omega_log = 0;
  int expected_log = 0;
  bool equals_power_layer = false;
  Status status = Status::Skipped;
};
struct OmegaTowerReport {
  TowerSpec spec;
  std::vector<OmegaTowerRow> rows;
  Status status = Status::Skipped;
};
/// |Omega_1(G_n)| = p^dim and Omega_1(G_n) is the deepest layer, for
/// 2 <= n <= n_max.  Torsion families are run anyway and the failure is
/// recorded as expected-negative.
OmegaTowerReport omega1_tower_check(const TowerSpec& spec, int n_max, const Limits& limits = {});

struct CosetPowerReport {
  std::uint64_t cosets_total = 0;
  std::uint64_t cosets_checked = 0;
  std::vector<GroupElement> failing_cosets;  // representatives
  std::uint64_t power_image_size = 0;
  std::uint64_t expected_power_image_size = 0;  // |G| / p^dim
  bool power_image_ok = false;
  Status status = Status::Skipped;
};
/// {(xu)^p : u in N} = x^p N^p on every coset (a seeded sample of
/// `sample` cosets when the index is larger), plus |{x^p}| = |G| / p^dim.
CosetPowerReport coset_power_check(const TowerQuotient& q, std::uint64_t sample = 200, std::uint64_t seed = 1);

struct PowerEscapeReport {
  bool found = false;
  std::uint64_t witness_exponent = 0;  // z^m in N \ N^p
  Status status = Status::Skipped;
};
/// Some power of z lies in N \ N^p.  Throws std::invalid_argument if z is in N.
PowerEscapeReport power_escape_check(const TowerQuotient& q, const GroupElement& z);

struct ConstantDReport {
  int max_index_exp = 0;
  std::size_t subgroups = 0;
  std::vector<int> d_spectrum;  // sorted distinct values of d(H)
  Status status = Status::Skipped;
};
/// d(H) over all subgroups of index <= p^j.  Every subgroup of the quotient
/// contains the (trivial) image of the level-n kernel, so none is filtered.
/// Requires j <= n - 2 (j <= 2n - 2 for MaximalClass3).
ConstantDReport constant_d_check(const TowerQuotient& q, int j, std::size_t max_count = 1'000'000);

struct HereditaryReport {
  Verdict verdict = Verdict::Indeterminate;
  bool expected = false;  // the family guarantees a True verdict
  Status status = Status::Skipped;
};
/// Requires |G| <= p^6.
HereditaryReport hereditary_check(const TowerQuotient& q);

}  // namespace pgroup

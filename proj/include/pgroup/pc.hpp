#pragma once

// Power-commutator presentations of finite p-groups.
//
// Generators are 0-based internally; the text format is 1-based.  The normal
// form of an element is g0^e0 g1^e1 ... g(n-1)^e(n-1) with 0 <= ei < p, and a
// relation [gj, gi] = w (j > i, commutator convention [x,y] = x^-1 y^-1 x y)
// is read as gj gi = gi gj w.

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pgroup {

struct Limits {
  std::uint64_t enum_cap = 10'000'000;
  std::uint64_t collect_budget = 1'000'000;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CollectBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class InconsistentPresentation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Letter {
  int gen = 0;
  int exp = 1;
  bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

struct GroupElement {
  std::vector<int> exps;

  bool is_identity() const {
    for (int e : exps)
      if (e != 0) return false;
    return true;
  }
  /// Index of the first nonzero exponent, or exps.size() for the identity.
  int depth() const {
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i] != 0) return static_cast<int>(i);
    return static_cast<int>(exps.size());
  }
  bool operator==(const GroupElement&) const = default;
  auto operator<=>(const GroupElement&) const = default;
};

class PcPresentation {
 public:
  PcPresentation() = default;
  PcPresentation(std::string name, int p, int n);

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  int prime() const { return p_; }
  int ngens() const { return n_; }

  /// gi^p = w; w may only mention generators of index > i.
  void set_power(int i, Word w);
  /// [gj, gi] = w for j > i; w may only mention generators of index > j.
  void set_commutator(int j, int i, Word w);

  const Word& power(int i) const { return powers_.at(i); }
  const Word& commutator(int j, int i) const { return comms_.at(index(j, i)); }

  /// Structural validation (ranges and polycyclic weighting). Throws
  /// std::invalid_argument.
  void validate() const;

  /// Text in the catalog grammar; parse_pcp(to_text()) round-trips.
  std::string to_text() const;

 private:
  std::size_t index(int j, int i) const { return static_cast<std::size_t>(j) * n_ + i; }

  std::string name_;
  int p_ = 2;
  int n_ = 0;
  std::vector<Word> powers_;
  std::vector<Word> comms_;
};

/// Parses a single presentation. Errors carry the 1-based line number.
PcPresentation parse_pcp(std::string_view text);
/// Parses every `group` block in the text (a catalog file).
std::vector<PcPresentation> parse_pcp_file(std::string_view text);

struct OverlapFailure {
  std::string test;  // e.g. "g3(g2 g1)"
  GroupElement lhs;
  GroupElement rhs;
};

struct ConsistencyReport {
  std::vector<OverlapFailure> failures;
  bool ok() const { return failures.empty(); }
};

ConsistencyReport check_consistency(const PcPresentation& pres, const Limits& limits = {});

/// A presentation that passed check_consistency.  Immutable; every group
/// operation lives here so an unverified presentation cannot be used.
class Group {
 public:
  /// Throws InconsistentPresentation listing the failed overlaps.
  static std::shared_ptr<const Group> create(PcPresentation pres, const Limits& limits = {});

  const PcPresentation& presentation() const { return pres_; }
  const std::string& name() const { return pres_.name(); }
  int prime() const { return pres_.prime(); }
  int ngens() const { return pres_.ngens(); }
  const Limits& limits() const { return limits_; }

  /// log_p |G| (= number of generators).
  int log_order() const { return pres_.ngens(); }

  GroupElement identity() const;
  GroupElement generator(int i) const;
  GroupElement collect(const Word& w) const;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  GroupElement power(const GroupElement& a, std::int64_t k) const;
  GroupElement commutator(const GroupElement& a, const GroupElement& b) const;
  /// b^-1 a b
  GroupElement conjugate(const GroupElement& a, const GroupElement& b) const;
  std::uint64_t element_order(const GroupElement& a) const;

  /// Mixed-radix rank of an element; a bijection onto [0, p^n).
  std::uint64_t rank(const GroupElement& a) const;
  GroupElement unrank(std::uint64_t r) const;

  /// Visits all p^n elements in rank order.  Throws CapExceeded if p^n
  /// exceeds the enumeration cap.
  void for_each_element(const std::function<void(const GroupElement&)>& fn) const;
  std::vector<GroupElement> enumerate_elements() const;

  /// Word whose collection is `a`.
  Word to_word(const GroupElement& a) const;

 private:
  Group(PcPresentation pres, const Limits& limits);
  friend ConsistencyReport check_consistency(const PcPresentation&, const Limits&);

  PcPresentation pres_;
  Limits limits_;
  // Collected relations, filled bottom-up.
  std::vector<GroupElement> power_nf_;
  std::vector<GroupElement> comm_nf_;  // index j*n+i
  std::vector<GroupElement> gen_inverse_;
  void prepare();
  void collect_into(std::vector<int>& v, std::vector<std::pair<int, int>> pending) const;
};

/// Saturating p^e; returns UINT64_MAX on overflow.
std::uint64_t checked_pow(std::uint64_t p, int e);

}  // namespace pgroup

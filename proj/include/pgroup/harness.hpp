#pragma once

// Catalog ingestion, the d(G) = log_p |Omega_1(G)| question harness, and the
// invariant suite over catalog groups and tower quotients.

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pgroup/towers.hpp"

namespace pgroup {

class CatalogError : public std::runtime_error {
 public:
  CatalogError(const std::string& file, int line, const std::string& what)
      : std::runtime_error(file + (line > 0 ? ":" + std::to_string(line) : "") + ": " + what), file_(file), line_(line) {}
  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

struct Invariants {
  int p = 0;
  int log_order = 0;
  int d = 0;
  int omega1_log = 0;
  bool omega1_elementary_abelian = false;
  int agemo_log = 0;  // log_p |G^p|
  int index_log = 0;  // log_p |G : G^p|
  int center_log = 0;
  int derived_log = 0;
  bool abelian = false;
  bool powerful = false;
  bool potent = false;
  bool p_central = false;
  std::vector<int> p_series_indices;
  std::vector<int> gamma_series_indices;

  bool operator==(const Invariants&) const = default;
};

Invariants compute_invariants(const GroupPtr& g);
nlohmann::json to_json(const Invariants& inv);

class CatalogEntry {
 public:
  CatalogEntry(GroupPtr group, std::string source);
  /// Entry whose invariants are supplied rather than computed; used to
  /// exercise the report and exit-code paths with synthetic data.
  static std::shared_ptr<CatalogEntry> synthetic(GroupPtr group, Invariants inv);

  const std::string& name() const { return group_->name(); }
  const GroupPtr& group() const { return group_; }
  const std::string& source() const { return source_; }
  /// Computed on first access; safe to call from several threads.
  const Invariants& invariants() const;

 private:
  GroupPtr group_;
  std::string source_;
  mutable std::once_flag once_;
  mutable std::optional<Invariants> inv_;
};

using EntryPtr = std::shared_ptr<const CatalogEntry>;

struct CoverageRow {
  std::string file;
  std::string order;  // e.g. "3^4"
  std::size_t entries = 0;
  bool complete = false;
};

struct Catalog {
  std::vector<EntryPtr> entries;  // sorted by name
  std::vector<CoverageRow> coverage;
};

/// Directory of *.pcp files (sorted by file name), a single file, or the
/// word "bundled".  Every presentation is consistency-checked at load; a
/// file header of the form
///   # catalog-order: 3^4
///   # catalog-coverage: complete
/// adds an order check of each group and a coverage row.  Throws
/// CatalogError naming the file and line.
Catalog load_catalog(const std::string& path, const Limits& limits = {});
std::string bundled_catalog_dir();

struct QuestionVerdict {
  std::string group;
  int p = 0;
  int log_order = 0;
  int lhs = 0;  // d(G)
  int rhs = 0;  // log_p |Omega_1(G)|
  bool powerful = false;
  bool omega1_elementary_abelian = false;
  bool skipped = false;  // p = 2
  bool direction_forward_ok = true;
  bool direction_backward_witness = false;          // d = rhs, not powerful
  bool direction_backward_witness_elementary = false;  // ... and Omega_1 elementary abelian
};

struct HarnessSummary {
  std::size_t entries = 0;
  std::size_t skipped = 0;
  std::size_t powerful = 0;
  std::size_t forward_pass = 0;
  std::size_t forward_fail = 0;
  std::size_t equality_holds = 0;
  std::size_t backward_witnesses = 0;
  std::size_t backward_witnesses_elementary = 0;
};

struct HarnessReport {
  std::vector<QuestionVerdict> verdicts;  // sorted by group name
  HarnessSummary summary;
  std::vector<CoverageRow> coverage;
};

HarnessReport run_question_harness(const Catalog& catalog, int jobs = 1);

enum class ExitCode { Ok = 0, UnexpectedFailure = 1, Usage = 2, Critical = 3 };
ExitCode harness_exit_code(const HarnessReport& r);

nlohmann::json to_json(const HarnessReport& r);
std::string to_csv(const HarnessReport& r);
/// Presentation text and invariants of a backward witness.
nlohmann::json reproducer_json(const CatalogEntry& e);

struct CheckRow {
  std::string subject;  // group name or tower spec
  std::string check;
  Status status = Status::Skipped;
  std::string detail;
};

struct SuiteReport {
  std::vector<CheckRow> rows;  // sorted by (subject, check)
  std::size_t count(Status s) const;
};

struct SuiteOptions {
  int jobs = 1;
  std::uint64_t hall_trials = 1'000'000;  // exhaustive when |G|^2 fits
  Limits limits;
};

std::vector<CheckRow> catalog_checks(const CatalogEntry& e, const SuiteOptions& opt);
std::vector<CheckRow> tower_checks(const TowerSpec& spec, const std::vector<std::string>& which, const SuiteOptions& opt);
SuiteReport run_invariant_suite(const Catalog& catalog, const std::vector<TowerSpec>& towers, const SuiteOptions& opt = {});
ExitCode suite_exit_code(const SuiteReport& r);
nlohmann::json to_json(const SuiteReport& r);

/// Names accepted by tower_checks; "all" selects every one.
const std::vector<std::string>& tower_check_names();

/// Runs fn(i) for i in [0, n) on `jobs` threads.  Callers write results into
/// slot i, so the merged order never depends on scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

inline constexpr const char* kReportSchema = "pgroup-report/1";

}  // namespace pgroup

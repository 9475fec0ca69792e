#include "pgroup/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#ifndef PGROUP_CATALOG_DIR
#define PGROUP_CATALOG_DIR "catalog"
#endif

namespace pgroup {

namespace fs = std::filesystem;
using nlohmann::json;

Invariants compute_invariants(const GroupPtr& g) {
  const Subgroup whole = Subgroup::whole(g);
  Invariants inv;
  inv.p = g->prime();
  inv.log_order = g->ngens();
  inv.d = min_gens(whole);
  auto om = omega1(whole);
  inv.omega1_log = om.subgroup.log_order();
  inv.omega1_elementary_abelian = om.elementary_abelian;
  inv.agemo_log = agemo(whole).log_order();
  inv.index_log = inv.log_order - inv.agemo_log;
  inv.center_log = center(whole).log_order();
  inv.derived_log = derived(whole).log_order();
  inv.abelian = inv.derived_log == 0;
  inv.powerful = is_powerful(whole);
  inv.potent = is_potent(whole);
  inv.p_central = is_p_central(whole);
  inv.p_series_indices = lower_central_p_series(whole).indices;
  inv.gamma_series_indices = lower_central_series(whole).indices;
  return inv;
}

json to_json(const Invariants& inv) {
  return json{{"p", inv.p},
              {"log_order", inv.log_order},
              {"d", inv.d},
              {"omega1_log", inv.omega1_log},
              {"omega1_elementary_abelian", inv.omega1_elementary_abelian},
              {"agemo_log", inv.agemo_log},
              {"index_log", inv.index_log},
              {"center_log", inv.center_log},
              {"derived_log", inv.derived_log},
              {"abelian", inv.abelian},
              {"powerful", inv.powerful},
              {"potent", inv.potent},
              {"p_central", inv.p_central},
              {"p_series_indices", inv.p_series_indices},
              {"gamma_series_indices", inv.gamma_series_indices}};
}

CatalogEntry::CatalogEntry(GroupPtr group, std::string source) : group_(std::move(group)), source_(std::move(source)) {}

std::shared_ptr<CatalogEntry> CatalogEntry::synthetic(GroupPtr group, Invariants inv) {
  auto e = std::make_shared<CatalogEntry>(std::move(group), "synthetic");
  std::call_once(e->once_, [&] { e->inv_ = std::move(inv); });
  return e;
}

const Invariants& CatalogEntry::invariants() const {
  std::call_once(once_, [this] { inv_ = compute_invariants(group_); });
  return *inv_;
}

// ---------------------------------------------------------------------------

std::string bundled_catalog_dir() { return PGROUP_CATALOG_DIR; }

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError(path.string(), 0, "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// "# key: value" header directives and the line of each "group" header.
struct FileHeader {
  std::optional<std::pair<int, int>> order;  // p, n
  std::optional<bool> complete;
  std::map<std::string, int> group_lines;
};

FileHeader scan_header(const std::string& file, const std::string& text) {
  FileHeader h;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "group") {
      std::string name;
      ls >> name;
      h.group_lines.emplace(name, lineno);
    } else if (first == "#") {
      std::string key, value;
      ls >> key >> value;
      if (key == "catalog-order:") {
        auto caret = value.find('^');
        try {
          if (caret == std::string::npos) throw std::invalid_argument("");
          h.order = std::pair{std::stoi(value.substr(0, caret)), std::stoi(value.substr(caret + 1))};
        } catch (const std::exception&) {
          throw CatalogError(file, lineno, "catalog-order must look like p^n");
        }
      } else if (key == "catalog-coverage:") {
        if (value != "complete" && value != "partial")
          throw CatalogError(file, lineno, "catalog-coverage must be complete or partial");
        h.complete = value == "complete";
      }
    }
  }
  return h;
}

void load_file(const fs::path& path, const Limits& limits, Catalog& cat) {
  const std::string file = path.string();
  const std::string text = read_file(path);
  const FileHeader header = scan_header(file, text);
  std::vector<PcPresentation> presentations;
  try {
    presentations = parse_pcp_file(text);
  } catch (const ParseError& e) {
    std::string msg = e.what();
    throw CatalogError(file, e.line(), msg.substr(msg.find(": ") + 2));
  }
  for (auto& pres : presentations) {
    const std::string name = pres.name();
    const int line = header.group_lines.count(name) ? header.group_lines.at(name) : 0;
    GroupPtr g;
    try {
      g = Group::create(std::move(pres), limits);
    } catch (const std::exception& e) {
      throw CatalogError(file, line, e.what());
    }
    if (header.order) {
      auto [p, n] = *header.order;
      if (g->prime() != p || g->ngens() != n)
        throw CatalogError(file, line, "group '" + name + "' has order " + std::to_string(g->prime()) + "^" +
                                           std::to_string(g->ngens()) + ", file declares " + std::to_string(p) +
                                           "^" + std::to_string(n));
      std::uint64_t count = 0;
      g->for_each_element([&](const GroupElement&) { ++count; });
      if (count != checked_pow(p, n)) throw CatalogError(file, line, "element count does not match the declared order");
    }
    cat.entries.push_back(std::make_shared<CatalogEntry>(std::move(g), file));
  }
  if (header.order) {
    CoverageRow row;
    row.file = path.filename().string();
    row.order = std::to_string(header.order->first) + "^" + std::to_string(header.order->second);
    row.entries = presentations.size();
    row.complete = header.complete.value_or(false);
    cat.coverage.push_back(row);
  }
}

}  // namespace

Catalog load_catalog(const std::string& path, const Limits& limits) {
  fs::path root = path == "bundled" ? fs::path(bundled_catalog_dir()) : fs::path(path);
  Catalog cat;
  std::error_code ec;
  if (fs::is_directory(root, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root))
      if (entry.is_regular_file() && entry.path().extension() == ".pcp") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) load_file(f, limits, cat);
  } else if (fs::exists(root, ec)) {
    load_file(root, limits, cat);
  } else {
    throw CatalogError(root.string(), 0, "no such catalog file or directory");
  }
  std::sort(cat.entries.begin(), cat.entries.end(), [](const EntryPtr& a, const EntryPtr& b) { return a->name() < b->name(); });
  for (std::size_t i = 1; i < cat.entries.size(); ++i)
    if (cat.entries[i]->name() == cat.entries[i - 1]->name())
      throw CatalogError(cat.entries[i]->source(), 0, "duplicate group name '" + cat.entries[i]->name() + "'");
  return cat;
}

// ---------------------------------------------------------------------------

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  for (std::size_t w = 0; w < count; ++w)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

HarnessReport run_question_harness(const Catalog& catalog, int jobs) {
  HarnessReport r;
  r.coverage = catalog.coverage;
  r.verdicts.resize(catalog.entries.size());
  parallel_for(catalog.entries.size(), jobs, [&](std::size_t i) {
    const auto& e = *catalog.entries[i];
    QuestionVerdict v;
    v.group = e.name();
    v.p = e.group()->prime();
    v.log_order = e.group()->ngens();
    if (v.p == 2) {
      v.skipped = true;
    } else {
      const auto& inv = e.invariants();
      v.lhs = inv.d;
      v.rhs = inv.omega1_log;
      v.powerful = inv.powerful;
      v.omega1_elementary_abelian = inv.omega1_elementary_abelian;
      v.direction_forward_ok = !inv.powerful || inv.d == inv.omega1_log;
      v.direction_backward_witness = inv.d == inv.omega1_log && !inv.powerful;
      v.direction_backward_witness_elementary = v.direction_backward_witness && inv.omega1_elementary_abelian;
    }
    r.verdicts[i] = v;
  });
  std::sort(r.verdicts.begin(), r.verdicts.end(),
            [](const QuestionVerdict& a, const QuestionVerdict& b) { return a.group < b.group; });
  auto& s = r.summary;
  for (const auto& v : r.verdicts) {
    ++s.entries;
    if (v.skipped) {
      ++s.skipped;
      continue;
    }
    s.powerful += v.powerful;
    s.equality_holds += v.lhs == v.rhs;
    if (v.powerful) (v.direction_forward_ok ? s.forward_pass : s.forward_fail)++;
    s.backward_witnesses += v.direction_backward_witness;
    s.backward_witnesses_elementary += v.direction_backward_witness_elementary;
  }
  return r;
}

ExitCode harness_exit_code(const HarnessReport& r) {
  if (r.summary.backward_witnesses > 0) return ExitCode::Critical;
  if (r.summary.forward_fail > 0) return ExitCode::UnexpectedFailure;
  return ExitCode::Ok;
}

namespace {

json coverage_json(const std::vector<CoverageRow>& rows) {
  json out = json::array();
  for (const auto& c : rows)
    out.push_back({{"file", c.file}, {"order", c.order}, {"entries", c.entries}, {"complete", c.complete}});
  return out;
}

}  // namespace

json to_json(const HarnessReport& r) {
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    json row{{"group", v.group}, {"p", v.p}, {"log_order", v.log_order}, {"skipped", v.skipped}};
    if (!v.skipped) {
      row["d"] = v.lhs;
      row["omega1_log"] = v.rhs;
      row["powerful"] = v.powerful;
      row["omega1_elementary_abelian"] = v.omega1_elementary_abelian;
      row["direction_forward_ok"] = v.direction_forward_ok;
      row["direction_backward_witness"] = v.direction_backward_witness;
      row["direction_backward_witness_elementary"] = v.direction_backward_witness_elementary;
    }
    verdicts.push_back(row);
  }
  const auto& s = r.summary;
  json summary{{"entries", s.entries},
               {"skipped", s.skipped},
               {"powerful", s.powerful},
               {"forward_pass", s.forward_pass},
               {"forward_fail", s.forward_fail},
               {"equality_holds", s.equality_holds},
               {"backward_witnesses", s.backward_witnesses},
               {"backward_witnesses_elementary", s.backward_witnesses_elementary},
               {"critical", s.backward_witnesses > 0}};
  return json{{"schema", kReportSchema},
              {"kind", "question-harness"},
              {"summary", summary},
              {"coverage", coverage_json(r.coverage)},
              {"verdicts", verdicts}};
}

std::string to_csv(const HarnessReport& r) {
  std::ostringstream os;
  os << "group,p,log_order,skipped,d,omega1_log,powerful,omega1_elementary_abelian,forward_ok,backward_witness\n";
  for (const auto& v : r.verdicts)
    os << v.group << "," << v.p << "," << v.log_order << "," << v.skipped << "," << v.lhs << "," << v.rhs << ","
       << v.powerful << "," << v.omega1_elementary_abelian << "," << v.direction_forward_ok << ","
       << v.direction_backward_witness << "\n";
  return os.str();
}

json reproducer_json(const CatalogEntry& e) {
  return json{{"schema", kReportSchema},
              {"kind", "counterexample"},
              {"group", e.name()},
              {"source", e.source()},
              {"presentation", e.group()->presentation().to_text()},
              {"invariants", to_json(e.invariants())}};
}

// ---------------------------------------------------------------------------

std::size_t SuiteReport::count(Status s) const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const CheckRow& r) { return r.status == s; }));
}

std::vector<CheckRow> catalog_checks(const CatalogEntry& e, const SuiteOptions& opt) {
  const auto& inv = e.invariants();
  const Subgroup whole = Subgroup::whole(e.group());
  const std::string subject = e.name();
  std::vector<CheckRow> rows;
  auto add = [&](std::string check, Status st, std::string detail) {
    rows.push_back({subject, std::move(check), st, std::move(detail)});
  };
  auto pass_fail = [](bool ok) { return ok ? Status::Pass : Status::Fail; };
  const std::string dd = "d = " + std::to_string(inv.d) + ", log|Omega_1| = " + std::to_string(inv.omega1_log);
  const std::string ww = "log|G:G^p| = " + std::to_string(inv.index_log) + ", log|Omega_1| = " + std::to_string(inv.omega1_log);

  if (inv.p == 2) add("d-bound", Status::Skipped, "p = 2");
  else add("d-bound", pass_fail(inv.d <= inv.omega1_log), dd);

  if (inv.powerful) add("index-equality", pass_fail(inv.index_log == inv.omega1_log), ww);
  else add("index-equality", Status::Skipped, "not powerful");

  if (inv.p_central) add("p-central-bound", pass_fail(inv.index_log <= inv.omega1_log), ww);
  else add("p-central-bound", Status::Skipped, "not p-central");

  if (inv.p == 2 || !inv.potent) {
    add("potent-equality", Status::Skipped, inv.p == 2 ? "p = 2" : "not potent");
  } else if (inv.log_order > 6) {
    add("potent-equality", Status::Skipped, "order above p^6");
  } else {
    std::size_t normals = 0, bad = 0;
    for (const auto& n : all_subgroups(whole).subgroups) {
      if (!n.is_normal()) continue;
      ++normals;
      if (n.log_order() - agemo(n).log_order() != omega1(n).subgroup.log_order()) ++bad;
    }
    std::string detail = std::to_string(normals) + " normal subgroups, " + std::to_string(bad) + " violations";
    if (inv.p == 3) detail += "; potent = powerful at p = 3";
    add("potent-equality", pass_fail(bad == 0), detail);
  }

  auto hall = hall_congruence_check(whole, opt.hall_trials);
  add("hall", pass_fail(hall.violations.empty()),
      std::to_string(hall.pairs_checked) + (hall.exhaustive ? " pairs (all)" : " sampled pairs") + ", " +
          std::to_string(hall.violations.size()) + " violations");

  if (inv.powerful) {
    auto prof = d_profile(whole);
    std::string detail = "d_i =";
    for (int x : prof.d) detail += " " + std::to_string(x);
    add("d-profile", pass_fail(prof.non_increasing), detail);
  } else {
    add("d-profile", Status::Skipped, "not powerful");
  }
  return rows;
}

const std::vector<std::string>& tower_check_names() {
  static const std::vector<std::string> names{"build",       "powerful",   "omega1",    "coset-power",    "power-escape",
                                              "constant-d",  "hereditary", "coherence", "d-profile", "uniform-segment"};
  return names;
}

std::vector<CheckRow> tower_checks(const TowerSpec& spec, const std::vector<std::string>& which, const SuiteOptions& opt) {
  auto wanted = [&](const std::string& name) {
    return std::find(which.begin(), which.end(), "all") != which.end() ||
           std::find(which.begin(), which.end(), name) != which.end();
  };
  for (const auto& w : which)
    if (w != "all" && std::find(tower_check_names().begin(), tower_check_names().end(), w) == tower_check_names().end())
      throw std::invalid_argument("unknown tower check '" + w + "'");

  const std::string subject = "tower " + spec.to_string();
  std::vector<CheckRow> rows;
  auto add = [&](const std::string& check, Status st, std::string detail) { rows.push_back({subject, check, st, std::move(detail)}); };
  auto guarded = [&](const std::string& check, const std::function<void()>& fn) {
    if (!wanted(check)) return;
    try {
      fn();
    } catch (const std::exception& e) {
      add(check, Status::Skipped, e.what());
    }
  };

  std::optional<TowerQuotient> q;
  try {
    q = build_tower(spec, opt.limits);
  } catch (const std::exception& e) {
    if (wanted("build")) add("build", Status::Skipped, e.what());
    return rows;
  }
  const int n = spec.level;
  const Subgroup whole = Subgroup::whole(q->group);
  const bool positive_family = spec.family != Family::MaximalClass3 && spec.sign == 1;

  guarded("build", [&] {
    int d = min_gens(whole);
    bool ok = q->group->ngens() == spec.log_order() && d == spec.dim();
    add("build", ok ? Status::Pass : Status::Fail,
        "log|G| = " + std::to_string(q->group->ngens()) + ", d = " + std::to_string(d) + ", dim = " + std::to_string(spec.dim()));
  });
  guarded("powerful", [&] {
    bool pw = is_powerful(whole);
    Status st = pw ? Status::Pass : (positive_family ? Status::Fail : Status::ExpectedNegative);
    add("powerful", st, pw ? "powerful" : "not powerful");
  });
  guarded("omega1", [&] {
    if (n < 2) return add("omega1", Status::Skipped, "needs level >= 2");
    auto r = omega1_tower_check(spec, n, opt.limits);
    std::string detail;
    for (const auto& row : r.rows)
      detail += (detail.empty() ? "" : "; ") + std::string("n=") + std::to_string(row.level) + ": log|Omega_1| = " +
                std::to_string(row.omega_log) + " (dim " + std::to_string(row.expected_log) + ")" +
                (row.equals_power_layer ? ", equals power layer" : ", differs from power layer");
    add("omega1", r.status, detail);
  });
  guarded("coset-power", [&] {
    auto r = coset_power_check(*q);
    add("coset-power", r.status,
        std::to_string(r.cosets_checked) + "/" + std::to_string(r.cosets_total) + " cosets, " +
            std::to_string(r.failing_cosets.size()) + " failing; |{x^p}| = " + std::to_string(r.power_image_size) +
            " (|G|/p^dim = " + std::to_string(r.expected_power_image_size) + ")");
  });
  guarded("power-escape", [&] {
    if (n < 2) return add("power-escape", Status::Skipped, "needs level >= 2");
    if (q->marked.contains(q->designated)) return add("power-escape", Status::Skipped, "designated generator lies in N");
    auto r = power_escape_check(*q, q->designated);
    add("power-escape", r.status, r.found ? "z^" + std::to_string(r.witness_exponent) + " in N \\ N^p" : "no power of z in N \\ N^p");
  });
  guarded("constant-d", [&] {
    const int bound = spec.family == Family::MaximalClass3 ? 2 * n - 2 : n - 2;
    const int j = std::min(2, bound);
    if (j < 1) return add("constant-d", Status::Skipped, "level too low for a resolved index bound");
    auto r = constant_d_check(*q, j);
    std::string detail = std::to_string(r.subgroups) + " subgroups of index <= p^" + std::to_string(j) + ", d in {";
    for (std::size_t i = 0; i < r.d_spectrum.size(); ++i) detail += (i ? "," : "") + std::to_string(r.d_spectrum[i]);
    add("constant-d", r.status, detail + "}");
  });
  guarded("hereditary", [&] {
    if (q->group->ngens() > 6) return add("hereditary", Status::Skipped, "order above p^6");
    auto r = hereditary_check(*q);
    add("hereditary", r.status, "verdict " + to_string(r.verdict) + (r.expected ? ", guaranteed true" : ", not guaranteed"));
  });
  guarded("coherence", [&] {
    if (n < 2) return add("coherence", Status::Skipped, "needs level >= 2");
    auto lower = build_tower(spec.at_level(n - 1), opt.limits);
    bool ok = verify_quotient_map(*q, lower);
    int kernel = q->group->ngens() - lower.group->ngens();
    int expected = spec.family == Family::HeredPowerful ? 1 : spec.dim();
    add("coherence", ok && kernel == expected ? Status::Pass : Status::Fail,
        std::string(ok ? "map respects relations" : "map breaks a relation") + ", kernel p^" + std::to_string(kernel));
  });
  guarded("d-profile", [&] {
    if (!is_powerful(whole)) return add("d-profile", Status::Skipped, "not powerful");
    auto prof = d_profile(whole);
    std::string detail = "d_i =";
    for (int x : prof.d) detail += " " + std::to_string(x);
    add("d-profile", prof.non_increasing ? Status::Pass : Status::Fail, detail);
  });
  guarded("uniform-segment", [&] {
    if (!spec.torsion_free() || !is_powerful(whole))
      return add("uniform-segment", Status::Skipped, "not a torsion-free powerful quotient");
    auto prof = d_profile(whole);
    bool constant = std::all_of(prof.d.begin(), prof.d.end(), [&](int x) { return x == spec.dim(); });
    std::string detail = "indices p^";
    for (std::size_t i = 0; i < prof.d.size(); ++i) detail += (i ? ",p^" : "") + std::to_string(prof.d[i]);
    add("uniform-segment", constant ? Status::Pass : Status::Fail, detail);
  });
  std::stable_sort(rows.begin(), rows.end(), [](const CheckRow& a, const CheckRow& b) { return a.check < b.check; });
  return rows;
}

SuiteReport run_invariant_suite(const Catalog& catalog, const std::vector<TowerSpec>& towers, const SuiteOptions& opt) {
  const std::size_t ne = catalog.entries.size();
  std::vector<std::vector<CheckRow>> parts(ne + towers.size());
  parallel_for(parts.size(), opt.jobs, [&](std::size_t i) {
    parts[i] = i < ne ? catalog_checks(*catalog.entries[i], opt) : tower_checks(towers[i - ne], {"all"}, opt);
  });
  SuiteReport r;
  for (auto& part : parts)
    for (auto& row : part) r.rows.push_back(std::move(row));
  std::stable_sort(r.rows.begin(), r.rows.end(), [](const CheckRow& a, const CheckRow& b) {
    return std::tie(a.subject, a.check) < std::tie(b.subject, b.check);
  });
  return r;
}

ExitCode suite_exit_code(const SuiteReport& r) { return r.count(Status::Fail) ? ExitCode::UnexpectedFailure : ExitCode::Ok; }

json to_json(const SuiteReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"subject", row.subject}, {"check", row.check}, {"status", to_string(row.status)}, {"detail", row.detail}});
  json summary;
  for (Status s : {Status::Pass, Status::Fail, Status::ExpectedNegative, Status::Skipped}) summary[to_string(s)] = r.count(s);
  return json{{"schema", kReportSchema}, {"kind", "invariant-suite"}, {"summary", summary}, {"rows", rows}};
}

}  // namespace pgroup

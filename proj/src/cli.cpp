#include "pgroup/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pgroup/cp_lattice.hpp"
#include "pgroup/harness.hpp"

namespace pgroup {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// A .pcp path (optionally "path:name" when the file holds several groups),
// or the name of a bundled catalog group.
GroupPtr resolve_group(const std::string& ref, const Limits& limits) {
  std::string path = ref, name;
  if (!fs::exists(path)) {
    auto colon = ref.rfind(':');
    if (colon != std::string::npos && fs::exists(ref.substr(0, colon))) {
      path = ref.substr(0, colon);
      name = ref.substr(colon + 1);
    }
  }
  if (fs::exists(path) && !fs::is_directory(path)) {
    auto all = parse_pcp_file(slurp(path));
    if (name.empty() && all.size() == 1) return Group::create(all.front(), limits);
    for (auto& pres : all)
      if (pres.name() == name) return Group::create(pres, limits);
    std::string names;
    for (const auto& pres : all) names += " " + pres.name();
    throw UsageError("'" + path + "' holds" + (names.empty() ? " no groups" : names) + "; use " + path + ":<name>");
  }
  auto cat = load_catalog("bundled", limits);
  for (const auto& e : cat.entries)
    if (e->name() == ref) return e->group();
  throw UsageError("no group file or bundled group named '" + ref + "'");
}

json igs_json(const Subgroup& h) {
  json gens = json::array();
  for (const auto& g : h.igs()) gens.push_back(g.exps);
  return gens;
}

std::vector<std::vector<std::int64_t>> read_matrix(const std::string& path) {
  std::istringstream in(slurp(path));
  std::vector<std::vector<std::int64_t>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line.substr(0, line.find('#')));
    std::vector<std::int64_t> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw UsageError("matrix file '" + path + "': bad entry '" + tok + "'");
      }
    }
    if (!row.empty()) rows.push_back(row);
  }
  if (rows.empty()) throw UsageError("matrix file '" + path + "' is empty");
  for (const auto& r : rows)
    if (r.size() != rows.size()) throw UsageError("matrix file '" + path + "' is not square");
  return rows;
}

void print(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite p-group invariants, Z_p C_p lattices and congruence-quotient towers"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Limits limits;
  int precision = 4;
  int jobs = 1;
  app.add_option("--enum-cap", limits.enum_cap, "Largest group order that may be enumerated")->capture_default_str();
  app.add_option("--precision", precision, "Default p-adic precision k for decompose")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  std::string group_ref;
  auto* info = app.add_subcommand("info", "Invariants of a group as JSON");
  info->add_option("group", group_ref, "A .pcp file or a bundled group name")->required();
  auto* series = app.add_subcommand("series", "Lower central p-series and lower central series profiles");
  series->add_option("group", group_ref)->required();
  auto* predicates = app.add_subcommand("predicates", "Powerful, potent, p-central and related predicates");
  predicates->add_option("group", group_ref)->required();
  auto* subgroups = app.add_subcommand("subgroups", "List subgroups");
  subgroups->add_option("group", group_ref)->required();
  std::optional<int> max_index;
  subgroups->add_option("--max-index", max_index, "Only subgroups of index at most p^j");

  std::string matrix_file;
  int mp = 0;
  std::optional<int> mk;
  auto* decomp = app.add_subcommand("decompose", "Decompose a Z_p C_p lattice given by the action of a generator");
  decomp->add_option("--matrix", matrix_file, "Whitespace-separated integer rows")->required();
  decomp->add_option("--p", mp)->required();
  decomp->add_option("--k", mk, "Precision (defaults to --precision)");

  std::string tower_text, checks = "all";
  auto* tower = app.add_subcommand("tower", "Build a tower quotient and run checks on it");
  tower->add_option("spec", tower_text, "<family>:<p>:<d>:<s>:<sign>:<n>")->required();
  tower->add_option("--checks", checks, "Comma-separated check names, or all")->capture_default_str();

  std::string catalog_path = "bundled", reproducer_dir = "reproducers";
  bool as_csv = false;
  auto* harness = app.add_subcommand("harness", "Run the d(G) = log_p |Omega_1(G)| question harness on a catalog");
  harness->add_option("--catalog", catalog_path, "Directory, .pcp file, or bundled")->capture_default_str();
  auto* json_flag = harness->add_flag("--json", "JSON report (default)");
  harness->add_flag("--csv", as_csv, "CSV projection of the verdicts")->excludes(json_flag);
  harness->add_option("--reproducer-dir", reproducer_dir, "Where backward witnesses are written")->capture_default_str();

  std::string towers_file;
  auto* suite = app.add_subcommand("suite", "Run the invariant suite on a catalog and tower specs");
  suite->add_option("--catalog", catalog_path)->capture_default_str();
  suite->add_option("--towers", towers_file, "File with one 'tower ...' line per spec");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return static_cast<int>(ExitCode::Usage);
  }

  try {
    if (*info) {
      auto g = resolve_group(group_ref, limits);
      json j = to_json(compute_invariants(g));
      j["group"] = g->name();
      print(out, j);
    } else if (*series) {
      auto g = resolve_group(group_ref, limits);
      auto whole = Subgroup::whole(g);
      auto prof = d_profile(whole);
      print(out, {{"group", g->name()},
                  {"p_series_indices", lower_central_p_series(whole).indices},
                  {"gamma_series_indices", lower_central_series(whole).indices},
                  {"d_profile", prof.d},
                  {"d_profile_non_increasing", prof.non_increasing}});
    } else if (*predicates) {
      auto g = resolve_group(group_ref, limits);
      auto whole = Subgroup::whole(g);
      json j{{"group", g->name()},
             {"abelian", is_abelian(whole)},
             {"powerful", is_powerful(whole)},
             {"potent", is_potent(whole)},
             {"p_central", is_p_central(whole)},
             {"omega1_elementary_abelian", omega1(whole).elementary_abelian},
             {"uniform_segment", uniform_segment(whole)}};
      j["hereditarily_powerful"] = g->ngens() <= 6 ? to_string(is_hereditarily_powerful(whole)) : "not computed";
      print(out, j);
    } else if (*subgroups) {
      auto g = resolve_group(group_ref, limits);
      auto whole = Subgroup::whole(g);
      std::vector<Subgroup> subs;
      bool complete = true;
      if (max_index) {
        subs = subgroups_of_index_at_most(whole, *max_index);
      } else {
        auto scan = all_subgroups(whole);
        subs = std::move(scan.subgroups);
        complete = scan.complete;
      }
      json rows = json::array();
      for (const auto& h : subs)
        rows.push_back({{"log_order", h.log_order()}, {"normal", h.is_normal()}, {"d", min_gens(h)}, {"igs", igs_json(h)}});
      print(out, {{"group", g->name()}, {"complete", complete}, {"count", subs.size()}, {"subgroups", rows}});
    } else if (*decomp) {
      const int k = mk.value_or(precision);
      auto act = CpLatticeAction::from_matrix(ModPkMatrix::from_rows(mp, k, read_matrix(matrix_file)));
      auto res = decompose(act);
      auto coh = cohomology_orders(act);
      print(out, {{"m1", res.m1},
                  {"m2", res.m2},
                  {"m3", res.m3},
                  {"p", mp},
                  {"k", k},
                  {"min_module_generators", min_module_generators(res)},
                  {"certificate",
                   {{"a_minus_i_exponents", res.a_minus_i_exponents},
                    {"norm_exponents", res.norm_exponents},
                    {"log_h0", coh.log_h0},
                    {"log_h1", coh.log_h1}}}});
    } else if (*tower) {
      std::vector<std::string> which;
      std::stringstream ss(checks);
      for (std::string c; std::getline(ss, c, ',');)
        if (!c.empty()) which.push_back(c);
      SuiteOptions opt{jobs, 1'000'000, limits};
      SuiteReport r{tower_checks(TowerSpec::parse(tower_text), which, opt)};
      print(out, to_json(r));
      return static_cast<int>(suite_exit_code(r));
    } else if (*harness) {
      auto cat = load_catalog(catalog_path, limits);
      auto r = run_question_harness(cat, jobs);
      if (as_csv) out << to_csv(r);
      else print(out, to_json(r));
      for (const auto& v : r.verdicts) {
        if (!v.direction_backward_witness) continue;
        fs::create_directories(reproducer_dir);
        const auto path = fs::path(reproducer_dir) / (v.group + ".json");
        for (const auto& e : cat.entries)
          if (e->name() == v.group) std::ofstream(path) << reproducer_json(*e).dump(2) << "\n";
        err << "CRITICAL: " << v.group << " has d = " << v.lhs << " = log_p|Omega_1| but is not powerful"
            << (v.omega1_elementary_abelian ? " (Omega_1 elementary abelian)" : "") << "; reproducer " << path.string()
            << "\n";
      }
      return static_cast<int>(harness_exit_code(r));
    } else if (*suite) {
      auto cat = load_catalog(catalog_path, limits);
      std::vector<TowerSpec> towers;
      if (!towers_file.empty()) towers = parse_tower_file(slurp(towers_file));
      SuiteOptions opt{jobs, 1'000'000, limits};
      auto r = run_invariant_suite(cat, towers, opt);
      print(out, to_json(r));
      return static_cast<int>(suite_exit_code(r));
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  } catch (const CatalogError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  } catch (const DecompositionError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::UnexpectedFailure);
  }
  return 0;
}

int cli_main(int argc, char** argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace pgroup

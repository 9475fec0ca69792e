#include "pgroup/towers.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace pgroup {

std::string to_string(Family f) {
  switch (f) {
    case Family::Abelian: return "abelian";
    case Family::ScalarMetabelian: return "scalar";
    case Family::MaximalClass3: return "maxclass3";
    case Family::HeredPowerful: return "heredpowerful";
  }
  return "?";
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::ExpectedNegative: return "expected-negative";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

int parse_int(const std::string& field, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(field, &used);
    if (used != field.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("tower spec: bad ") + what + " '" + field + "'");
  }
}

}  // namespace

void TowerSpec::validate() const {
  auto bad = [](const std::string& why) { throw std::invalid_argument("tower spec: " + why); };
  if (!is_prime(p)) bad("p must be prime");
  if (level < 1) bad("level must be >= 1");
  switch (family) {
    case Family::Abelian:
      if (d < 1) bad("d must be >= 1");
      break;
    case Family::ScalarMetabelian:
      if (d < 1) bad("d must be >= 1");
      if (sign != 1 && sign != -1) bad("sign must be + or -");
      if (s && *s < 1) bad("s must be >= 1");
      // -1 has order 2, so it only acts as a pro-p automorphism when p = 2.
      if (p != 2 && sign == -1) bad("sign - requires p = 2");
      if (p == 2 && sign == 1 && s && *s < 2) bad("p = 2 with sign + requires s >= 2");
      break;
    case Family::MaximalClass3:
      if (p != 3) bad("maxclass3 requires p = 3");
      break;
    case Family::HeredPowerful: {
      if (torsion.empty()) bad("heredpowerful needs a torsion list");
      for (int e : torsion)
        if (e < 1) bad("torsion exponents must be >= 1");
      if (s && *s < (p == 2 ? 2 : 1)) bad(p == 2 ? "s must be >= 2 when p = 2" : "s must be >= 1");
      int emax = *std::max_element(torsion.begin(), torsion.end());
      if (s && *s + level < emax) bad("b must have order at least that of 1 + p^s (need s + n >= max e)");
      break;
    }
  }
}

int TowerSpec::dim() const {
  switch (family) {
    case Family::Abelian:
    case Family::ScalarMetabelian: return d;
    case Family::MaximalClass3: return 2;
    case Family::HeredPowerful: return 1 + static_cast<int>(torsion.size());
  }
  return 0;
}

bool TowerSpec::torsion_free() const { return family == Family::Abelian || family == Family::ScalarMetabelian; }

int TowerSpec::log_order() const {
  switch (family) {
    case Family::Abelian:
    case Family::ScalarMetabelian: return d * level;
    case Family::MaximalClass3: return 2 * level + 1;
    case Family::HeredPowerful: {
      int t = level;
      for (int e : torsion) t += e;
      return t;
    }
  }
  return 0;
}

TowerSpec TowerSpec::at_level(int n) const {
  TowerSpec t = *this;
  t.level = n;
  return t;
}

std::string TowerSpec::to_string() const {
  std::ostringstream os;
  os << pgroup::to_string(family) << ":" << p << ":";
  if (family == Family::HeredPowerful) {
    for (std::size_t i = 0; i < torsion.size(); ++i) os << (i ? "," : "") << torsion[i];
  } else if (family == Family::MaximalClass3) {
    os << "-";
  } else {
    os << d;
  }
  os << ":";
  if (family == Family::ScalarMetabelian || family == Family::HeredPowerful)
    os << (s ? std::to_string(*s) : "inf");
  else
    os << "-";
  os << ":" << (family == Family::ScalarMetabelian ? (sign == 1 ? "+" : "-") : "-");
  os << ":" << level;
  return os.str();
}

TowerSpec TowerSpec::parse(const std::string& text) {
  std::string body = text;
  auto trim = [](std::string& x) {
    x.erase(0, x.find_first_not_of(" \t\r\n"));
    x.erase(x.find_last_not_of(" \t\r\n") + 1);
  };
  trim(body);
  if (body.rfind("tower", 0) == 0 && body.size() > 5 && (body[5] == ' ' || body[5] == '\t')) {
    body = body.substr(6);
    trim(body);
  }
  auto f = split(body, ':');
  if (f.size() != 6) throw std::invalid_argument("tower spec: expected <family>:<p>:<d>:<s>:<sign>:<n>, got '" + text + "'");
  TowerSpec spec;
  if (f[0] == "abelian") spec.family = Family::Abelian;
  else if (f[0] == "scalar") spec.family = Family::ScalarMetabelian;
  else if (f[0] == "maxclass3") spec.family = Family::MaximalClass3;
  else if (f[0] == "heredpowerful") spec.family = Family::HeredPowerful;
  else throw std::invalid_argument("tower spec: unknown family '" + f[0] + "'");
  spec.p = parse_int(f[1], "p");
  if (spec.family == Family::HeredPowerful) {
    for (const auto& e : split(f[2], ',')) spec.torsion.push_back(parse_int(e, "torsion exponent"));
  } else if (spec.family != Family::MaximalClass3) {
    spec.d = parse_int(f[2], "d");
  } else {
    spec.d = 2;
  }
  if (f[3] == "inf" || f[3] == "-") spec.s.reset();
  else spec.s = parse_int(f[3], "s");
  if (spec.family == Family::ScalarMetabelian) {
    if (f[4] == "+" || f[4] == "+1" || f[4] == "1") spec.sign = 1;
    else if (f[4] == "-" || f[4] == "-1") spec.sign = -1;
    else throw std::invalid_argument("tower spec: bad sign '" + f[4] + "'");
  }
  spec.level = parse_int(f[5], "n");
  spec.validate();
  return spec;
}

std::vector<TowerSpec> parse_tower_file(const std::string& text) {
  std::vector<TowerSpec> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(TowerSpec::parse(line));
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

struct Layout {
  std::vector<std::string> labels;
  std::map<std::string, int> index;
  int add(std::string label) {
    index[label] = static_cast<int>(labels.size());
    labels.push_back(std::move(label));
    return static_cast<int>(labels.size()) - 1;
  }
};

// <b> A with b of order p^nb acting on A = sum Z/p^e_i as lambda, generators
// ordered layer by layer: b_t then a_{i,t}.
TowerQuotient build_cyclic_by_abelian(const TowerSpec& spec, const std::string& bname, const std::string& aname,
                                      int a_first, int nb, const std::vector<int>& e, int sign, std::optional<int> s,
                                      const Limits& limits) {
  const int p = spec.p;
  int layers = nb;
  for (int x : e) layers = std::max(layers, x);
  Layout lay;
  std::vector<int> b_idx(nb);
  std::vector<std::vector<int>> a_idx(e.size());
  for (int t = 0; t < layers; ++t) {
    if (t < nb) b_idx[t] = lay.add(bname + "_" + std::to_string(t));
    for (std::size_t i = 0; i < e.size(); ++i)
      if (t < e[i]) a_idx[i].push_back(lay.add(aname + std::to_string(a_first + static_cast<int>(i)) + "_" + std::to_string(t)));
  }
  const int n = static_cast<int>(lay.labels.size());
  if (checked_pow(p, n) > limits.enum_cap)
    throw CapExceeded("tower quotient " + spec.to_string() + " has order " + std::to_string(p) + "^" +
                      std::to_string(n) + ", above the enumeration cap");
  PcPresentation pres(spec.to_string(), p, n);
  for (int t = 0; t + 1 < nb; ++t) pres.set_power(b_idx[t], {{b_idx[t + 1], 1}});
  for (std::size_t i = 0; i < e.size(); ++i)
    for (int t = 0; t + 1 < e[i]; ++t) pres.set_power(a_idx[i][t], {{a_idx[i][t + 1], 1}});

  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::int64_t mod = ipow(p, e[i]);
    std::int64_t lambda = s ? (1 + ipow(p, std::min(*s, e[i]))) % mod : 1;
    if (sign < 0) lambda = (mod - lambda) % mod;
    std::int64_t lam_l = lambda;  // lambda^(p^l)
    for (int l = 0; l < nb; ++l) {
      for (int k = 0; k < e[i]; ++k) {
        // [a_{i,k}, b_l] = a_{i,k}^(lambda^(p^l) - 1)
        std::int64_t ex = mulmod(ipow(p, k), ((lam_l - 1) % mod + mod) % mod, mod);
        int ai = a_idx[i][k], bl = b_idx[l];
        if (ai < bl) ex = (mod - ex) % mod;  // stored as [b_l, a_{i,k}]
        Word w;
        for (int t = 0; ex != 0; ++t, ex /= p)
          if (ex % p) w.push_back({a_idx[i][t], static_cast<int>(ex % p)});
        if (w.empty()) continue;
        if (ai > bl) pres.set_commutator(ai, bl, w);
        else pres.set_commutator(bl, ai, w);
      }
      std::int64_t next = 1;
      for (int r = 0; r < p; ++r) next = mulmod(next, lam_l, mod);
      lam_l = next;
    }
  }

  TowerQuotient q{spec, Group::create(pres, limits), lay.labels, Subgroup(nullptr), {}, Subgroup(nullptr)};
  const auto& g = q.group;
  q.designated = g->generator(b_idx[0]);
  std::vector<GroupElement> gens;
  if (spec.family == Family::Abelian) {
    q.marked = agemo(Subgroup::whole(g));
  } else {
    if (spec.family == Family::ScalarMetabelian && nb > 1) gens.push_back(g->generator(b_idx[1]));
    for (const auto& idx : a_idx)
      for (int x : idx) gens.push_back(g->generator(x));
    q.marked = closure(g, gens);
  }
  gens.clear();
  for (int x = 0; x < n; ++x) {
    const auto& label = lay.labels[x];
    if (label.substr(label.rfind('_') + 1) == std::to_string(layers - 1)) gens.push_back(g->generator(x));
  }
  q.power_layer = closure(g, gens);
  return q;
}

TowerQuotient build_maximal_class3(const TowerSpec& spec, const Limits& limits) {
  const int n = 2 * spec.level;  // c_0 .. c_{2n-1}, c_k the element pi^k of Z_3[omega]
  if (checked_pow(3, n + 1) > limits.enum_cap)
    throw CapExceeded("tower quotient " + spec.to_string() + " exceeds the enumeration cap");
  PcPresentation pres(spec.to_string(), 3, n + 1);
  std::vector<std::string> labels{"w"};
  for (int k = 0; k < n; ++k) labels.push_back("c" + std::to_string(k));
  auto c = [](int k) { return k + 1; };
  for (int k = 0; k < n; ++k) {
    // 3 = 2 pi^2 + pi^3
    Word w;
    if (k + 2 < n) w.push_back({c(k + 2), 2});
    if (k + 3 < n) w.push_back({c(k + 3), 1});
    pres.set_power(c(k), w);
    // c_k^w = omega pi^k = pi^k + pi^(k+1)
    if (k + 1 < n) pres.set_commutator(c(k), 0, {{c(k + 1), 1}});
  }
  TowerQuotient q{spec, Group::create(pres, limits), labels, Subgroup(nullptr), {}, Subgroup(nullptr)};
  const auto& g = q.group;
  q.designated = g->generator(0);
  std::vector<GroupElement> gens;
  for (int k = 0; k < n; ++k) gens.push_back(g->generator(c(k)));
  q.marked = closure(g, gens);
  std::vector<GroupElement> deep{g->generator(c(n - 2)), g->generator(c(n - 1))};
  q.power_layer = closure(g, deep);
  return q;
}

}  // namespace

TowerQuotient build_tower(const TowerSpec& spec, const Limits& limits) {
  spec.validate();
  const int n = spec.level;
  switch (spec.family) {
    case Family::Abelian:
      return build_cyclic_by_abelian(spec, "x1", "x", 2, n, std::vector<int>(spec.d - 1, n), 1, std::nullopt, limits);
    case Family::ScalarMetabelian:
      return build_cyclic_by_abelian(spec, "y", "a", 1, n, std::vector<int>(spec.d - 1, n), spec.sign, spec.s, limits);
    case Family::MaximalClass3:
      return build_maximal_class3(spec, limits);
    case Family::HeredPowerful:
      return build_cyclic_by_abelian(spec, "b", "a", 1, n, spec.torsion, 1, spec.s, limits);
  }
  throw std::invalid_argument("unknown family");
}

bool verify_quotient_map(const TowerQuotient& upper, const TowerQuotient& lower) {
  const Group& gu = *upper.group;
  const Group& gl = *lower.group;
  if (gu.prime() != gl.prime()) return false;
  std::map<std::string, int> lower_index;
  for (std::size_t i = 0; i < lower.labels.size(); ++i) lower_index[lower.labels[i]] = static_cast<int>(i);
  std::vector<GroupElement> image;
  std::set<int> hit;
  for (const auto& label : upper.labels) {
    auto it = lower_index.find(label);
    if (it == lower_index.end()) {
      image.push_back(gl.identity());
    } else {
      image.push_back(gl.generator(it->second));
      hit.insert(it->second);
    }
  }
  if (static_cast<int>(hit.size()) != gl.ngens()) return false;
  auto map_word = [&](const Word& w) {
    GroupElement r = gl.identity();
    for (const auto& l : w) r = gl.multiply(r, gl.power(image[l.gen], l.exp));
    return r;
  };
  const auto& pres = gu.presentation();
  const int n = gu.ngens();
  for (int i = 0; i < n; ++i) {
    if (!(gl.power(image[i], gu.prime()) == map_word(pres.power(i)))) return false;
    for (int j = i + 1; j < n; ++j)
      if (!(gl.commutator(image[j], image[i]) == map_word(pres.commutator(j, i)))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

// Whether the hypotheses of the torsion-free checks hold: a torsion-free
// family whose marked subgroup is powerful.
bool torsion_free_powerful(const TowerQuotient& q) { return q.spec.torsion_free() && is_powerful(q.marked); }

Status judge(bool hypotheses, bool holds) {
  if (holds) return Status::Pass;
  return hypotheses ? Status::Fail : Status::ExpectedNegative;
}

Status combine(const std::vector<Status>& all) {
  if (all.empty()) return Status::Skipped;
  if (std::count(all.begin(), all.end(), Status::Fail)) return Status::Fail;
  if (std::count(all.begin(), all.end(), Status::ExpectedNegative)) return Status::ExpectedNegative;
  if (std::count(all.begin(), all.end(), Status::Pass)) return Status::Pass;
  return Status::Skipped;
}

std::vector<GroupElement> sorted_unique(std::vector<GroupElement> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

OmegaTowerReport omega1_tower_check(const TowerSpec& spec, int n_max, const Limits& limits) {
  OmegaTowerReport report{spec, {}, Status::Skipped};
  // Eq. (2.2) is about uniform groups; sign -1 at p = 2 is torsion-free
  // but not powerful.
  const bool hypotheses = spec.family == Family::Abelian || (spec.family == Family::ScalarMetabelian && spec.sign == 1);
  std::vector<Status> all;
  for (int n = 2; n <= n_max; ++n) {
    auto q = build_tower(spec.at_level(n), limits);
    auto om = omega1(Subgroup::whole(q.group));
    OmegaTowerRow row;
    row.level = n;
    row.omega_log = om.subgroup.log_order();
    row.expected_log = spec.dim();
    row.equals_power_layer = om.subgroup == q.power_layer;
    row.status = judge(hypotheses, row.omega_log == row.expected_log && row.equals_power_layer);
    all.push_back(row.status);
    report.rows.push_back(row);
  }
  report.status = combine(all);
  return report;
}

CosetPowerReport coset_power_check(const TowerQuotient& q, std::uint64_t sample, std::uint64_t seed) {
  const Group& g = *q.group;
  const int p = g.prime();
  const Subgroup& nsub = q.marked;
  CosetPowerReport r;
  const bool hypotheses = torsion_free_powerful(q);

  // Coset representatives: exponent vectors vanishing at the depths of N's igs.
  std::vector<int> free_pos;
  for (int i = 0; i < g.ngens(); ++i)
    if (!std::binary_search(nsub.depths().begin(), nsub.depths().end(), i)) free_pos.push_back(i);
  r.cosets_total = checked_pow(p, static_cast<int>(free_pos.size()));
  auto rep_of = [&](std::uint64_t code) {
    GroupElement x = g.identity();
    for (int pos : free_pos) {
      x.exps[pos] = static_cast<int>(code % p);
      code /= p;
    }
    return x;
  };
  std::vector<std::uint64_t> codes;
  if (r.cosets_total <= sample) {
    for (std::uint64_t c = 0; c < r.cosets_total; ++c) codes.push_back(c);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> d(0, r.cosets_total - 1);
    std::set<std::uint64_t> chosen;
    while (chosen.size() < sample) chosen.insert(d(rng));
    codes.assign(chosen.begin(), chosen.end());
  }

  const auto n_elems = nsub.elements();
  const auto np_elems = agemo(nsub).elements();
  for (auto code : codes) {
    GroupElement x = rep_of(code);
    std::vector<GroupElement> lhs, rhs;
    lhs.reserve(n_elems.size());
    for (const auto& u : n_elems) lhs.push_back(g.power(g.multiply(x, u), p));
    GroupElement xp = g.power(x, p);
    for (const auto& v : np_elems) rhs.push_back(g.multiply(xp, v));
    if (sorted_unique(std::move(lhs)) != sorted_unique(std::move(rhs))) r.failing_cosets.push_back(x);
    ++r.cosets_checked;
  }

  r.power_image_size = pth_power_image_size(Subgroup::whole(q.group));
  r.expected_power_image_size = checked_pow(p, g.ngens() - q.spec.dim());
  r.power_image_ok = r.power_image_size == r.expected_power_image_size;
  std::vector<Status> all{judge(hypotheses, r.failing_cosets.empty())};
  if (q.spec.level >= 2) all.push_back(judge(hypotheses, r.power_image_ok));
  r.status = combine(all);
  return r;
}

PowerEscapeReport power_escape_check(const TowerQuotient& q, const GroupElement& z) {
  if (q.marked.contains(z)) throw std::invalid_argument("lemma 2.5 check needs z outside the marked subgroup");
  const Group& g = *q.group;
  const Subgroup np = agemo(q.marked);
  PowerEscapeReport r;
  const std::uint64_t order = g.element_order(z);
  GroupElement y = z;
  for (std::uint64_t m = 1; m <= order; ++m, y = g.multiply(y, z)) {
    if (q.marked.contains(y) && !np.contains(y)) {
      r.found = true;
      r.witness_exponent = m;
      break;
    }
  }
  const bool hypotheses = torsion_free_powerful(q) && q.spec.level >= 2;
  r.status = judge(hypotheses, r.found);
  return r;
}

ConstantDReport constant_d_check(const TowerQuotient& q, int j, std::size_t max_count) {
  // Phi(H) must contain the level-n kernel.  A level of the maximal class
  // tower is two pi-layers deep, and H^3 reaches pi^(j+2) B.
  const int bound = q.spec.family == Family::MaximalClass3 ? 2 * q.spec.level - 2 : q.spec.level - 2;
  if (j > bound)
    throw std::invalid_argument("constant-d check needs j <= " + std::to_string(bound) +
                                " so that d(H) is resolved at this level");
  ConstantDReport r;
  r.max_index_exp = j;
  auto subs = subgroups_of_index_at_most(Subgroup::whole(q.group), j, max_count);
  r.subgroups = subs.size();
  std::set<int> ds;
  for (const auto& h : subs) ds.insert(min_gens(h));
  r.d_spectrum.assign(ds.begin(), ds.end());
  const bool hypotheses = q.spec.family == Family::Abelian || q.spec.family == Family::MaximalClass3 ||
                          (q.spec.family == Family::ScalarMetabelian && q.spec.sign == 1);
  r.status = judge(hypotheses, r.d_spectrum == std::vector<int>{q.spec.dim()});
  return r;
}

HereditaryReport hereditary_check(const TowerQuotient& q) {
  if (q.group->ngens() > 6) throw CapExceeded("hereditary check needs |G| <= p^6");
  HereditaryReport r;
  r.verdict = is_hereditarily_powerful(Subgroup::whole(q.group));
  const auto& s = q.spec;
  switch (s.family) {
    case Family::Abelian: r.expected = true; break;
    case Family::ScalarMetabelian:
    case Family::HeredPowerful: r.expected = s.sign == 1; break;  // validate() already bounds s
    case Family::MaximalClass3: r.expected = false; break;
  }
  // A sign -1 quotient can still be hereditarily powerful (at level 2 over
  // Z_2 the action -3 is trivial), so only maximal class demands False.
  const bool strict = r.expected || s.family == Family::MaximalClass3;
  if (r.verdict == Verdict::Indeterminate) r.status = Status::Skipped;
  else if (strict && (r.verdict == Verdict::True) != r.expected) r.status = Status::Fail;
  else r.status = judge(r.expected, r.verdict == Verdict::True);
  return r;
}

}  // namespace pgroup

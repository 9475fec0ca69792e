#include "pgroup/pc.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace pgroup {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_int(std::string_view s, long long& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string word_to_text(const Word& w) {
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    out += std::to_string(l.gen + 1) + "^" + std::to_string(l.exp);
  }
  return out;
}

}  // namespace

std::uint64_t checked_pow(std::uint64_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > UINT64_MAX / p) return UINT64_MAX;
    r *= p;
  }
  return r;
}

// ---------------------------------------------------------------------------
// PcPresentation

PcPresentation::PcPresentation(std::string name, int p, int n)
    : name_(std::move(name)), p_(p), n_(n), powers_(n), comms_(static_cast<std::size_t>(n) * n) {
  if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
  if (n < 0) throw std::invalid_argument("negative number of generators");
}

void PcPresentation::set_power(int i, Word w) {
  if (i < 0 || i >= n_) throw std::invalid_argument("power relation index out of range");
  for (const auto& l : w)
    if (l.gen <= i || l.gen >= n_)
      throw std::invalid_argument("power relation for generator " + std::to_string(i + 1) +
                                  " mentions generator " + std::to_string(l.gen + 1));
  powers_[i] = std::move(w);
}

void PcPresentation::set_commutator(int j, int i, Word w) {
  if (i < 0 || j >= n_ || j <= i) throw std::invalid_argument("commutator relation requires j > i");
  for (const auto& l : w)
    if (l.gen <= j || l.gen >= n_)
      throw std::invalid_argument("commutator relation [" + std::to_string(j + 1) + "," +
                                  std::to_string(i + 1) + "] mentions generator " +
                                  std::to_string(l.gen + 1));
  comms_[index(j, i)] = std::move(w);
}

void PcPresentation::validate() const {
  for (int i = 0; i < n_; ++i)
    for (const auto& l : powers_[i])
      if (l.gen <= i || l.gen >= n_) throw std::invalid_argument("non-polycyclic power relation");
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < j; ++i)
      for (const auto& l : comms_[index(j, i)])
        if (l.gen <= j || l.gen >= n_)
          throw std::invalid_argument("non-polycyclic commutator relation");
}

std::string PcPresentation::to_text() const {
  std::ostringstream os;
  os << "group " << name_ << " p=" << p_ << " n=" << n_ << "\n";
  for (int i = 0; i < n_; ++i)
    if (!powers_[i].empty()) os << "pow " << i + 1 << ": " << word_to_text(powers_[i]) << "\n";
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < j; ++i)
      if (!comms_[index(j, i)].empty())
        os << "comm " << j + 1 << " " << i + 1 << ": " << word_to_text(comms_[index(j, i)]) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Parser {
  std::vector<PcPresentation> out;
  bool have_group = false;

  Word parse_word(std::string_view body, int line, const PcPresentation& pres) {
    Word w;
    for (auto tok : split_ws(body)) {
      auto caret = tok.find('^');
      if (caret == std::string_view::npos) throw ParseError(line, "expected <gen>^<exp>, got '" + std::string(tok) + "'");
      long long g = 0, e = 0;
      if (!parse_int(tok.substr(0, caret), g) || !parse_int(tok.substr(caret + 1), e))
        throw ParseError(line, "malformed token '" + std::string(tok) + "'");
      if (g < 1 || g > pres.ngens())
        throw ParseError(line, "generator index " + std::to_string(g) + " out of range");
      if (e < 0 || e >= pres.prime())
        throw ParseError(line, "exponent " + std::to_string(e) + " out of range [0, p)");
      if (e != 0) w.push_back({static_cast<int>(g - 1), static_cast<int>(e)});
    }
    return w;
  }

  void line(std::string_view raw, int lineno) {
    auto hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto colon = raw.find(':');
    auto head = split_ws(colon == std::string_view::npos ? raw : raw.substr(0, colon));
    if (head.empty()) {
      if (colon != std::string_view::npos) throw ParseError(lineno, "unexpected ':'");
      return;
    }
    if (head[0] == "group") {
      if (colon != std::string_view::npos || head.size() != 4)
        throw ParseError(lineno, "expected 'group <name> p=<prime> n=<ngens>'");
      long long p = 0, n = 0;
      if (!head[2].starts_with("p=") || !parse_int(head[2].substr(2), p))
        throw ParseError(lineno, "expected p=<prime>");
      if (!head[3].starts_with("n=") || !parse_int(head[3].substr(2), n))
        throw ParseError(lineno, "expected n=<ngens>");
      if (!is_prime(static_cast<int>(p)) || p > 1000) throw ParseError(lineno, "p is not a (small) prime");
      if (n < 0 || n > 64) throw ParseError(lineno, "ngens out of range");
      out.emplace_back(std::string(head[1]), static_cast<int>(p), static_cast<int>(n));
      have_group = true;
      return;
    }
    if (!have_group) throw ParseError(lineno, "relation before 'group' header");
    auto& pres = out.back();
    if (colon == std::string_view::npos) throw ParseError(lineno, "missing ':'");
    auto body = raw.substr(colon + 1);
    auto idx = [&](std::string_view s) {
      long long v = 0;
      if (!parse_int(s, v)) throw ParseError(lineno, "malformed generator index '" + std::string(s) + "'");
      if (v < 1 || v > pres.ngens())
        throw ParseError(lineno, "generator index " + std::to_string(v) + " out of range");
      return static_cast<int>(v - 1);
    };
    if (head[0] == "pow") {
      if (head.size() != 2) throw ParseError(lineno, "expected 'pow <i>: <word>'");
      int i = idx(head[1]);
      Word w = parse_word(body, lineno, pres);
      for (const auto& l : w)
        if (l.gen <= i)
          throw ParseError(lineno, "non-polycyclic relation: power of generator " + std::to_string(i + 1) +
                                       " mentions generator " + std::to_string(l.gen + 1));
      pres.set_power(i, std::move(w));
    } else if (head[0] == "comm") {
      if (head.size() != 3) throw ParseError(lineno, "expected 'comm <j> <i>: <word>'");
      int j = idx(head[1]);
      int i = idx(head[2]);
      if (j <= i) throw ParseError(lineno, "non-polycyclic relation: comm requires j > i");
      Word w = parse_word(body, lineno, pres);
      for (const auto& l : w)
        if (l.gen <= j)
          throw ParseError(lineno, "non-polycyclic relation: commutator [" + std::to_string(j + 1) + "," +
                                       std::to_string(i + 1) + "] mentions generator " +
                                       std::to_string(l.gen + 1));
      pres.set_commutator(j, i, std::move(w));
    } else {
      throw ParseError(lineno, "unknown directive '" + std::string(head[0]) + "'");
    }
  }
};

}  // namespace

std::vector<PcPresentation> parse_pcp_file(std::string_view text) {
  Parser parser;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    parser.line(line, ++lineno);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return std::move(parser.out);
}

PcPresentation parse_pcp(std::string_view text) {
  auto all = parse_pcp_file(text);
  if (all.size() != 1)
    throw ParseError(1, "expected exactly one group, found " + std::to_string(all.size()));
  return std::move(all.front());
}

// ---------------------------------------------------------------------------
// Collection

Group::Group(PcPresentation pres, const Limits& limits) : pres_(std::move(pres)), limits_(limits) {}

GroupElement Group::identity() const { return GroupElement{std::vector<int>(ngens(), 0)}; }

GroupElement Group::generator(int i) const {
  auto e = identity();
  e.exps.at(i) = 1;
  return e;
}

// Collection from the left.  `pending` is a stack of (generator, count)
// items; the back is multiplied onto v next.  Multiplying
//   v = g0^v0 ... gn^vn   by gi
// moves gi across the tail T = g(i+1)^v(i+1)...: v gi = prefix gi^(vi+1) T^gi
// with gj^gi = gj [gj, gi].
void Group::collect_into(std::vector<int>& v, std::vector<std::pair<int, int>> pending) const {
  const int n = ngens();
  const int p = prime();
  std::uint64_t steps = 0;
  auto push_element = [&](const GroupElement& e) {
    for (int k = n - 1; k >= 0; --k)
      if (e.exps[k] != 0) pending.emplace_back(k, e.exps[k]);
  };
  while (!pending.empty()) {
    if (++steps > limits_.collect_budget)
      throw CollectBudgetExceeded("collection step budget exceeded in " + name());
    auto [g, count] = pending.back();
    if (count == 0) {
      pending.pop_back();
      continue;
    }
    int last = n - 1;
    while (last > g && v[last] == 0) --last;
    if (last == g) {
      pending.pop_back();
      int s = v[g] + count;
      v[g] = s % p;
      for (int q = s / p; q > 0; --q) push_element(power_nf_[g]);
      continue;
    }
    if (--pending.back().second == 0) pending.pop_back();
    std::vector<int> tail(v.begin() + g + 1, v.end());
    std::fill(v.begin() + g + 1, v.end(), 0);
    bool overflow = ++v[g] == p;
    if (overflow) v[g] = 0;
    for (int j = n - 1; j > g; --j) {
      int t = tail[j - g - 1];
      if (t == 0) continue;
      const auto& c = comm_nf_[static_cast<std::size_t>(j) * n + g];
      if (c.is_identity()) {
        pending.emplace_back(j, t);
        continue;
      }
      for (int r = 0; r < t; ++r) {
        push_element(c);
        pending.emplace_back(j, 1);
      }
    }
    if (overflow) push_element(power_nf_[g]);
  }
}

void Group::prepare() {
  const int n = ngens();
  const int p = prime();
  power_nf_.assign(n, identity());
  comm_nf_.assign(static_cast<std::size_t>(n) * n, identity());
  gen_inverse_.assign(n, identity());
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) comm_nf_[static_cast<std::size_t>(j) * n + i] = collect(pres_.commutator(j, i));
    power_nf_[i] = collect(pres_.power(i));
    // gi^-1 = gi^(p-1) (gi^p)^-1, built by stripping exponents left to right.
    std::vector<int> c = identity().exps;
    c[i] = 1;
    GroupElement x = identity();
    for (int t = i; t < n; ++t) {
      int e = (p - c[t]) % p;
      if (e == 0) continue;
      collect_into(c, {{t, e}});
      x.exps[t] = e;
    }
    gen_inverse_[i] = std::move(x);
  }
}

GroupElement Group::collect(const Word& w) const {
  std::vector<int> v(ngens(), 0);
  std::vector<std::pair<int, int>> pending;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (it->gen < 0 || it->gen >= ngens()) throw std::invalid_argument("word mentions unknown generator");
    if (it->exp > 0) {
      pending.emplace_back(it->gen, it->exp);
    } else if (it->exp < 0) {
      const auto& inv = gen_inverse_[it->gen];
      for (int r = 0; r < -it->exp; ++r)
        for (int k = ngens() - 1; k >= 0; --k)
          if (inv.exps[k] != 0) pending.emplace_back(k, inv.exps[k]);
    }
  }
  collect_into(v, std::move(pending));
  return GroupElement{std::move(v)};
}

GroupElement Group::multiply(const GroupElement& a, const GroupElement& b) const {
  std::vector<int> v = a.exps;
  std::vector<std::pair<int, int>> pending;
  for (int k = ngens() - 1; k >= 0; --k)
    if (b.exps[k] != 0) pending.emplace_back(k, b.exps[k]);
  collect_into(v, std::move(pending));
  return GroupElement{std::move(v)};
}

GroupElement Group::inverse(const GroupElement& a) const {
  const int p = prime();
  std::vector<int> c = a.exps;
  GroupElement x = identity();
  for (int t = 0; t < ngens(); ++t) {
    int e = (p - c[t]) % p;
    if (e == 0) continue;
    collect_into(c, {{t, e}});
    x.exps[t] = e;
  }
  return x;
}

GroupElement Group::power(const GroupElement& a, std::int64_t k) const {
  GroupElement base = k < 0 ? inverse(a) : a;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  GroupElement result = identity();
  while (e > 0) {
    if (e & 1) result = multiply(result, base);
    e >>= 1;
    if (e > 0) base = multiply(base, base);
  }
  return result;
}

GroupElement Group::commutator(const GroupElement& a, const GroupElement& b) const {
  return multiply(inverse(multiply(b, a)), multiply(a, b));
}

GroupElement Group::conjugate(const GroupElement& a, const GroupElement& b) const {
  return multiply(multiply(inverse(b), a), b);
}

std::uint64_t Group::element_order(const GroupElement& a) const {
  std::uint64_t order = 1;
  GroupElement x = a;
  while (!x.is_identity()) {
    x = power(x, prime());
    order *= static_cast<std::uint64_t>(prime());
  }
  return order;
}

std::uint64_t Group::rank(const GroupElement& a) const {
  std::uint64_t r = 0;
  for (int e : a.exps) r = r * static_cast<std::uint64_t>(prime()) + static_cast<std::uint64_t>(e);
  return r;
}

GroupElement Group::unrank(std::uint64_t r) const {
  GroupElement e = identity();
  for (int i = ngens() - 1; i >= 0; --i) {
    e.exps[i] = static_cast<int>(r % static_cast<std::uint64_t>(prime()));
    r /= static_cast<std::uint64_t>(prime());
  }
  return e;
}

void Group::for_each_element(const std::function<void(const GroupElement&)>& fn) const {
  std::uint64_t total = checked_pow(static_cast<std::uint64_t>(prime()), ngens());
  if (total > limits_.enum_cap)
    throw CapExceeded("|" + name() + "| = " + std::to_string(prime()) + "^" + std::to_string(ngens()) +
                      " exceeds enumeration cap " + std::to_string(limits_.enum_cap));
  GroupElement e = identity();
  for (std::uint64_t r = 0; r < total; ++r) {
    fn(e);
    for (int i = ngens() - 1; i >= 0; --i) {
      if (++e.exps[i] < prime()) break;
      e.exps[i] = 0;
    }
  }
}

std::vector<GroupElement> Group::enumerate_elements() const {
  std::vector<GroupElement> out;
  for_each_element([&](const GroupElement& e) { out.push_back(e); });
  return out;
}

Word Group::to_word(const GroupElement& a) const {
  Word w;
  for (int i = 0; i < ngens(); ++i)
    if (a.exps[i] != 0) w.push_back({i, a.exps[i]});
  return w;
}

// ---------------------------------------------------------------------------
// Consistency

ConsistencyReport check_consistency(const PcPresentation& pres, const Limits& limits) {
  pres.validate();
  ConsistencyReport report;
  Group g(pres, limits);
  g.prepare();
  const int n = g.ngens();
  const int p = g.prime();
  auto gen = [&](int i) { return g.generator(i); };
  auto gpow = [&](int i, int e) {
    auto x = g.identity();
    std::vector<int> v = x.exps;
    g.collect_into(v, {{i, e}});
    return GroupElement{v};
  };
  auto mul = [&](const GroupElement& a, const GroupElement& b) { return g.multiply(a, b); };
  auto record = [&](std::string test, GroupElement lhs, GroupElement rhs) {
    if (lhs != rhs) report.failures.push_back({std::move(test), std::move(lhs), std::move(rhs)});
  };
  auto name = [](int i) { return "g" + std::to_string(i + 1); };

  // Overlaps for a weighted presentation with all relative orders p.
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < j; ++i)
        record("(" + name(k) + " " + name(j) + ") " + name(i) + " = " + name(k) + " (" + name(j) + " " + name(i) + ")",
               mul(mul(gen(k), gen(j)), gen(i)), mul(gen(k), mul(gen(j), gen(i))));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      record("(" + name(j) + "^p) " + name(i) + " = " + name(j) + "^(p-1) (" + name(j) + " " + name(i) + ")",
             mul(g.power_nf_[j], gen(i)), mul(gpow(j, p - 1), mul(gen(j), gen(i))));
      record(name(j) + " (" + name(i) + "^p) = (" + name(j) + " " + name(i) + ") " + name(i) + "^(p-1)",
             mul(gen(j), g.power_nf_[i]), mul(mul(gen(j), gen(i)), gpow(i, p - 1)));
    }
  for (int i = 0; i < n; ++i)
    record("(" + name(i) + "^p) " + name(i) + " = " + name(i) + " (" + name(i) + "^p)", mul(g.power_nf_[i], gen(i)),
           mul(gen(i), g.power_nf_[i]));
  return report;
}

std::shared_ptr<const Group> Group::create(PcPresentation pres, const Limits& limits) {
  auto report = check_consistency(pres, limits);
  if (!report.ok()) {
    std::string msg = "presentation '" + pres.name() + "' is inconsistent: " + report.failures.front().test;
    if (report.failures.size() > 1) msg += " (+" + std::to_string(report.failures.size() - 1) + " more)";
    throw InconsistentPresentation(msg);
  }
  std::shared_ptr<Group> g(new Group(std::move(pres), limits));
  g->prepare();
  return g;
}

}  // namespace pgroup

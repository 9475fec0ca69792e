#include "pgroup/subgroup.hpp"

#include <deque>
#include <optional>

namespace pgroup {

namespace {

int inverse_mod(int a, int p) {
  for (int x = 1; x < p; ++x)
    if ((a * x) % p == 1) return x;
  throw std::logic_error("no inverse mod p");
}

}  // namespace

// Incremental sifting closure.  A new residue r is normalised to leading
// exponent 1 and its p-th power and commutators with the current igs (and
// with the conjugators) are queued; when the queue drains the sequence is an
// induced pcgs of the generated subgroup.
class IgsBuilder {
 public:
  explicit IgsBuilder(const GroupPtr& group) : group_(group), slots_(group->ngens()), inv_(group->ngens()) {}

  GroupElement sift(GroupElement x) const {
    const Group& g = *group_;
    for (int d = x.depth(); d < g.ngens(); d = x.depth()) {
      if (!slots_[d]) return x;
      x = g.multiply(g.power(*inv_[d], x.exps[d]), x);
    }
    return x;
  }

  void add(std::span<const GroupElement> gens, std::span<const GroupElement> conjugators) {
    const Group& g = *group_;
    std::deque<GroupElement> queue(gens.begin(), gens.end());
    while (!queue.empty()) {
      GroupElement r = sift(std::move(queue.front()));
      queue.pop_front();
      if (r.is_identity()) continue;
      int d = r.depth();
      r = g.power(r, inverse_mod(r.exps[d], g.prime()));
      queue.push_back(g.power(r, g.prime()));
      for (const auto& h : slots_)
        if (h) queue.push_back(g.commutator(r, *h));
      for (const auto& c : conjugators) queue.push_back(g.commutator(r, c));
      inv_[d] = g.inverse(r);
      slots_[d] = std::move(r);
    }
  }

  Subgroup finish() && {
    const Group& g = *group_;
    std::vector<GroupElement> igs;
    std::vector<int> depths;
    for (int d = 0; d < g.ngens(); ++d)
      if (slots_[d]) {
        igs.push_back(*slots_[d]);
        depths.push_back(d);
      }
    // Reduce: clear entries of each element at the depths of later ones.
    for (std::size_t a = 0; a < igs.size(); ++a)
      for (std::size_t b = a + 1; b < igs.size(); ++b) {
        int e = igs[a].exps[depths[b]];
        if (e != 0) igs[a] = g.multiply(igs[a], g.power(*inv_[depths[b]], e));
      }
    return Subgroup(group_, std::move(igs));
  }

 private:
  GroupPtr group_;
  std::vector<std::optional<GroupElement>> slots_;
  std::vector<std::optional<GroupElement>> inv_;
};

Subgroup::Subgroup(GroupPtr group) : group_(std::move(group)) {}

Subgroup::Subgroup(GroupPtr group, std::vector<GroupElement> igs) : group_(std::move(group)), igs_(std::move(igs)) {
  const Group& g = *group_;
  for (const auto& h : igs_) {
    depths_.push_back(h.depth());
    inverse_igs_.push_back(g.inverse(h));
  }
  normal_ = true;
  for (const auto& h : igs_) {
    for (int k = 0; k < g.ngens() && normal_; ++k)
      if (!contains(g.conjugate(h, g.generator(k)))) normal_ = false;
    if (!normal_) break;
  }
}

Subgroup Subgroup::whole(GroupPtr group) {
  std::vector<GroupElement> igs;
  for (int i = 0; i < group->ngens(); ++i) igs.push_back(group->generator(i));
  return Subgroup(group, std::move(igs));
}

std::uint64_t Subgroup::order() const { return checked_pow(static_cast<std::uint64_t>(group_->prime()), log_order()); }

GroupElement Subgroup::sift(const GroupElement& x) const {
  const Group& g = *group_;
  GroupElement r = x;
  std::size_t k = 0;
  for (int d = r.depth(); d < g.ngens(); d = r.depth()) {
    while (k < depths_.size() && depths_[k] < d) ++k;
    if (k == depths_.size() || depths_[k] != d) return r;
    r = g.multiply(g.power(inverse_igs_[k], r.exps[d]), r);
  }
  return r;
}

bool Subgroup::contains(const Subgroup& other) const {
  for (const auto& h : other.igs_)
    if (!contains(h)) return false;
  return true;
}

void Subgroup::for_each_element(const std::function<void(const GroupElement&)>& fn) const {
  const Group& g = *group_;
  if (order() > g.limits().enum_cap)
    throw CapExceeded("subgroup of order " + std::to_string(g.prime()) + "^" + std::to_string(log_order()) +
                      " exceeds enumeration cap " + std::to_string(g.limits().enum_cap));
  const std::size_t m = igs_.size();
  std::vector<int> digits(m, 0);
  // prefix[k] = h0^e0 ... hk^ek
  std::vector<GroupElement> prefix(m + 1, g.identity());
  while (true) {
    fn(prefix[m]);
    std::size_t k = m;
    while (k > 0) {
      --k;
      if (++digits[k] < g.prime()) break;
      digits[k] = 0;
      if (k == 0) return;
    }
    if (m == 0) return;
    // prefix index k+1 holds the product through position k.
    prefix[k + 1] = g.multiply(prefix[k + 1], igs_[k]);
    for (std::size_t j = k + 2; j <= m; ++j) prefix[j] = prefix[k + 1];
  }
}

std::vector<GroupElement> Subgroup::elements() const {
  std::vector<GroupElement> out;
  for_each_element([&](const GroupElement& e) { out.push_back(e); });
  return out;
}

std::string Subgroup::key() const {
  std::string k;
  for (const auto& h : igs_) {
    for (int e : h.exps) k += static_cast<char>('0' + e);
    k += '|';
  }
  return k;
}

Subgroup closure(const GroupPtr& group, std::span<const GroupElement> gens) { return closure(group, gens, {}); }

Subgroup closure(const GroupPtr& group, std::span<const GroupElement> gens, std::span<const GroupElement> conjugators) {
  IgsBuilder b(group);
  b.add(gens, conjugators);
  return std::move(b).finish();
}

Subgroup normal_closure(const GroupPtr& group, std::span<const GroupElement> gens) {
  std::vector<GroupElement> conj;
  for (int k = 0; k < group->ngens(); ++k) conj.push_back(group->generator(k));
  return closure(group, gens, conj);
}

Subgroup normal_closure_in(const Subgroup& within, std::span<const GroupElement> gens) {
  return closure(within.group_ptr(), gens, within.igs());
}

Subgroup join(const Subgroup& a, const Subgroup& b) {
  std::vector<GroupElement> gens = a.igs();
  gens.insert(gens.end(), b.igs().begin(), b.igs().end());
  return closure(a.group_ptr(), gens);
}

Subgroup join(const Subgroup& a, const GroupElement& x) {
  std::vector<GroupElement> gens = a.igs();
  gens.push_back(x);
  return closure(a.group_ptr(), gens);
}

}  // namespace pgroup

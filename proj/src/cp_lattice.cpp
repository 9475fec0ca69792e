#include "pgroup/cp_lattice.hpp"

#include <string>

namespace pgroup {

namespace {

void require_precision(int k) {
  if (k < 2)
    throw DecompositionError(DecompositionError::Kind::PrecisionTooLow,
                             "precision k >= 2 needed to separate divisor p from divisor 0");
}

// Lift of the columns of V whose divisor vanishes at this precision: a basis
// of the saturated kernel.
std::vector<int> kernel_positions(const SmithForm& snf, int k) {
  std::vector<int> pos;
  for (std::size_t i = 0; i < snf.exponents.size(); ++i)
    if (snf.exponents[i] >= k) pos.push_back(static_cast<int>(i));
  return pos;
}

// log_p |ker(f) / im(g)| where g maps into ker(f), f and g commuting d x d
// matrices with f g = 0.
int subquotient_log(const ModPkMatrix& f, const ModPkMatrix& g) {
  const int k = f.precision();
  auto snf = smith_normal_form(f);
  auto ker = kernel_positions(snf, k);
  if (ker.empty()) return 0;
  // Coordinates of g's columns with respect to the basis given by V.
  ModPkMatrix coords = snf.right.inverse() * g;
  ModPkMatrix c(f.prime(), k, static_cast<int>(ker.size()), g.cols());
  for (std::size_t r = 0; r < ker.size(); ++r)
    for (int j = 0; j < g.cols(); ++j) c.set(static_cast<int>(r), j, coords.at(ker[r], j));
  auto csnf = smith_normal_form(c);
  int total = 0;
  for (int e : csnf.exponents) total += e;
  return total;
}

}  // namespace

CpLatticeAction CpLatticeAction::from_matrix(const ModPkMatrix& a) {
  using Kind = DecompositionError::Kind;
  require_precision(a.precision());
  if (a.rows() != a.cols() || a.rows() == 0) throw DecompositionError(Kind::BadShape, "action matrix must be square and non-empty");
  CpLatticeAction act{a.prime(), a.precision(), a.rows(), a};
  ModPkMatrix pw = ModPkMatrix::identity(act.p, act.k, act.d);
  for (int i = 0; i < act.p; ++i) pw = pw * a;
  if (!(pw == ModPkMatrix::identity(act.p, act.k, act.d)))
    throw DecompositionError(Kind::NotOrderP, "A^p != I modulo " + std::to_string(act.p) + "^" + std::to_string(act.k));
  return act;
}

ModPkMatrix CpLatticeAction::norm() const {
  ModPkMatrix id = ModPkMatrix::identity(p, k, d);
  ModPkMatrix sum = id, pw = id;
  for (int i = 1; i < p; ++i) {
    pw = pw * a;
    sum = sum + pw;
  }
  return sum;
}

DecompositionResult decompose(const CpLatticeAction& act) {
  using Kind = DecompositionError::Kind;
  require_precision(act.k);
  const int p = act.p, k = act.k;
  ModPkMatrix id = ModPkMatrix::identity(p, k, act.d);
  auto s1 = smith_normal_form(act.a - id);
  auto sn = smith_normal_form(act.norm());
  for (const auto* exps : {&s1.exponents, &sn.exponents})
    for (int e : *exps)
      if (e != 0 && e != 1 && e != k)
        throw DecompositionError(Kind::Inconsistent, "divisor p^" + std::to_string(e) +
                                                         " cannot occur for a C_p-lattice");
  DecompositionResult res;
  res.a_minus_i_exponents = s1.exponents;
  res.norm_exponents = sn.exponents;
  // Zero divisors (exponent k) and divisors exactly p.
  const int z1 = s1.zero_count(), e1 = s1.count(1);
  const int zn = sn.zero_count(), en = sn.count(1);
  res.m2 = e1;
  res.m1 = en;
  res.m3 = z1 - en;
  if (res.m3 < 0 || zn != (p - 1) * (res.m2 + res.m3) || res.dimension(p) != act.d)
    throw DecompositionError(Kind::Inconsistent,
                             "divisor counts (A-I: " + std::to_string(z1) + " zero, " + std::to_string(e1) +
                                 " p; N: " + std::to_string(zn) + " zero, " + std::to_string(en) +
                                 " p) admit no non-negative solution");
  return res;
}

int min_module_generators(const DecompositionResult& res) { return res.m1 + res.m2 + res.m3; }

CohomologyOrders cohomology_orders(const CpLatticeAction& act) {
  require_precision(act.k);
  ModPkMatrix a_minus_i = act.a - ModPkMatrix::identity(act.p, act.k, act.d);
  ModPkMatrix n = act.norm();
  return {subquotient_log(a_minus_i, n), subquotient_log(n, a_minus_i)};
}

ModPkMatrix block_diagonal(const std::vector<ModPkMatrix>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("no blocks");
  int n = 0;
  for (const auto& b : blocks) n += b.rows();
  ModPkMatrix out(blocks[0].prime(), blocks[0].precision(), n, n);
  int off = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) out.set(off + i, off + j, b.at(i, j));
    off += b.rows();
  }
  return out;
}

ModPkMatrix cyclotomic_companion(int p, int k) {
  ModPkMatrix c(p, k, p - 1, p - 1);
  for (int i = 1; i < p - 1; ++i) c.set(i, i - 1, 1);
  for (int i = 0; i < p - 1; ++i) c.set(i, p - 2, -1);
  return c;
}

ModPkMatrix cyclic_permutation(int p, int k) {
  ModPkMatrix c(p, k, p, p);
  for (int i = 0; i < p; ++i) c.set((i + 1) % p, i, 1);
  return c;
}

}  // namespace pgroup

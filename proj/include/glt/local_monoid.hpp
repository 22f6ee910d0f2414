#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "glt/abelian.hpp"
#include "glt/admissible.hpp"
#include "glt/rational.hpp"

namespace glt {

// Carry-cocycle presentation of a local monoid: a fine sharp monoid D with an
// integral inclusion N -> D and finite quotient X = D^gp/Z.  Elements are
// pairs (a, theta) with a in N und theta in X, added with a carry:
//   (a, theta) + (a', theta') = (a + a' + c[theta][theta'], theta + theta').
class LocalMonoid {
 public:
  using Element = std::pair<Int, FiniteAbelianGroup::Element>;

  LocalMonoid(FiniteAbelianGroup x, std::vector<std::vector<Int>> carry)
      : x_(std::move(x)), carry_(std::move(carry)) {
    const std::size_t n = x_.order().get_ui();
    if (carry_.size() != n) throw error("carry table size mismatch");
    for (const auto& row : carry_)
      if (row.size() != n) throw error("carry table row size mismatch");
  }

  // Builds from the serialized upper triangle over nonzero elements, in
  // element enumeration order: c11, c12, ..., c1k, c22, ..., ckk.
  static LocalMonoid from_upper_triangle(FiniteAbelianGroup x, const IntVec& flat) {
    const std::size_t n = x.order().get_ui();
    if (n == 0) throw error("carry table for empty group");
    const std::size_t k = n - 1;
    if (flat.size() != k * (k + 1) / 2) throw error("upper triangle length mismatch");
    std::vector<std::vector<Int>> carry(n, std::vector<Int>(n, Int(0)));
    std::size_t pos = 0;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        carry[i][j] = flat[pos];
        carry[j][i] = flat[pos];
        ++pos;
      }
    return LocalMonoid(std::move(x), std::move(carry));
  }

  IntVec upper_triangle() const {
    const std::size_t n = carry_.size();
    IntVec flat;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) flat.push_back(carry_[i][j]);
    return flat;
  }

  const FiniteAbelianGroup& quotient_group() const { return x_; }
  const std::vector<std::vector<Int>>& carry() const { return carry_; }

  const Int& carry_of(const FiniteAbelianGroup::Element& a,
                      const FiniteAbelianGroup::Element& b) const {
    return carry_[x_.element_index(a)][x_.element_index(b)];
  }

  struct Violation {
    std::string axiom;  // "identity" | "commutativity" | "associativity" | "sharpness"
    std::vector<std::size_t> tuple;
  };

  // Checks the four cocycle axioms; reports the first violating tuple.
  std::optional<Violation> validate() const {
    const auto elems = x_.elements();
    const std::size_t n = elems.size();
    for (std::size_t j = 0; j < n; ++j)
      if (carry_[0][j] != 0) return Violation{"identity", {0, j}};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        if (carry_[i][j] != carry_[j][i]) return Violation{"commutativity", {i, j}};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const auto ij = x_.element_index(x_.add(elems[i], elems[j]));
          const auto jk = x_.element_index(x_.add(elems[j], elems[k]));
          if (carry_[i][j] + carry_[ij][k] != carry_[i][jk] + carry_[j][k])
            return Violation{"associativity", {i, j, k}};
        }
    for (std::size_t i = 1; i < n; ++i) {
      const auto ni = x_.element_index(x_.neg(elems[i]));
      if (carry_[i][ni] == 0) return Violation{"sharpness", {i}};
    }
    return std::nullopt;
  }

  Element add(const Element& a, const Element& b) const {
    if (a.first < 0 || b.first < 0) throw error("monoid elements have nonnegative height");
    return Element{a.first + b.first + carry_of(a.second, b.second),
                   x_.add(a.second, b.second)};
  }

  bool operator==(const LocalMonoid& o) const {
    return x_ == o.x_ && carry_ == o.carry_;
  }
  bool operator!=(const LocalMonoid& o) const { return !(*this == o); }

 private:
  FiniteAbelianGroup x_;
  std::vector<std::vector<Int>> carry_;  // full symmetric table, element indices
};

// D = N (+)_{N^n} N with the left map summation: X is the stabilizer quotient
// of the admissible monoid and the carry counts coordinatewise fractional
// overflows of the canonical representatives.
inline LocalMonoid pushout_to_local(const AdmissibleMonoid& m) {
  auto s = m.group().stabilizer_data();
  auto reps = m.group().element_representatives(s);
  const std::size_t n = reps.size();
  std::vector<std::vector<Int>> carry(n, std::vector<Int>(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Int c = 0;
      for (std::size_t k = 0; k < m.rank(); ++k) c += floor_rat(reps[i][k] + reps[j][k]);
      carry[i][j] = c;
    }
  return LocalMonoid(s.group, std::move(carry));
}

// Rank-one carry table of a character: entry 1 exactly when the canonical
// representatives of chi(theta) and chi(theta') overflow.
inline std::vector<std::vector<Int>> carry_of_character(const Character& chi) {
  const auto elems = chi.group().elements();
  const std::size_t n = elems.size();
  std::vector<Rat> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = chi.value(elems[i]);
  std::vector<std::vector<Int>> t(n, std::vector<Int>(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (vals[i] + vals[j] >= 1) t[i][j] = 1;
  return t;
}

struct PushoutWitness {
  AdmissibleMonoid monoid;
  // multiplicity per nonzero character, in character enumeration order
  std::vector<std::pair<FiniteAbelianGroup::Element, Int>> multiplicities;
};

struct PrunedBranch {
  IntVec multiplicity_prefix;          // multiplicities fixed so far
  std::vector<std::size_t> violated_pair;  // element indices (i, j) of the pair equation
};

struct DecideResult {
  bool feasible = false;       // final answer: multiplicities exist and separate points
  bool raw_feasible = false;   // condition (i) alone, ignoring separation
  std::optional<PushoutWitness> witness;
  std::vector<PrunedBranch> certificate;  // for NO answers: violated pair equations
  Int search_bound = 0;                   // sum of per-character multiplicity caps
};

namespace detail {

inline bool separates(const FiniteAbelianGroup& x,
                      const std::vector<Character>& chars,
                      const IntVec& mult) {
  // the joint kernel of the supported characters must be trivial
  for (const auto& e : x.elements()) {
    if (x.is_zero(e)) continue;
    bool killed = true;
    for (std::size_t k = 0; k < chars.size() && killed; ++k)
      if (mult[k] > 0 && chars[k].value(e) != 0) killed = false;
    if (killed) return false;
  }
  return true;
}

}  // namespace detail

// Decision procedure for pushout-representability: searches multiplicities
// m_chi over the nonzero characters with
//   (i) sum of m_chi * carry_of_character(chi) equal to the carry table, and
//   (ii) the supported characters jointly separating points of X.
// On success the witness monoid lives in Q^n, n = sum m_chi, with one
// coordinate per character copy; generators are the value vectors of the
// nonzero elements of X.  `pad_with_free` appends that many free coordinates
// to the witness (off by default; zero columns add nothing).
inline DecideResult decide_pushout(const LocalMonoid& d, std::size_t pad_with_free = 0,
                                   std::size_t certificate_cap = 4096) {
  if (auto v = d.validate())
    throw error("invalid cocycle: " + v->axiom + " axiom fails");
  const auto& x = d.quotient_group();
  const auto elems = x.elements();
  const std::size_t n = elems.size();

  std::vector<Character> chars;
  for (std::size_t i = 1; i < n; ++i) chars.emplace_back(x, elems[i]);
  std::vector<std::vector<std::vector<Int>>> tables;
  for (const auto& c : chars) tables.push_back(carry_of_character(c));

  // per-character cap: min over inverse pairs hit by the character
  DecideResult res;
  IntVec caps(chars.size(), Int(0));
  for (std::size_t k = 0; k < chars.size(); ++k) {
    bool first = true;
    for (std::size_t i = 1; i < n; ++i) {
      const std::size_t ni = x.element_index(x.neg(elems[i]));
      if (tables[k][i][ni] == 1) {
        const Int& c = d.carry()[i][ni];
        if (first || c < caps[k]) caps[k] = c;
        first = false;
      }
    }
    res.search_bound += caps[k];
  }

  // pairs (i <= j) over nonzero elements
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);

  std::vector<std::vector<Int>> residual = d.carry();
  IntVec mult(chars.size(), Int(0));
  std::optional<IntVec> raw_solution;
  std::optional<IntVec> separated_solution;

  // depth-first over characters in enumeration order, multiplicities ascending
  auto rec = [&](auto&& self, std::size_t k) -> bool {
    // prune: a positive residual pair no remaining character can decrease
    for (const auto& [i, j] : pairs) {
      if (residual[i][j] == 0) continue;
      bool reachable = false;
      for (std::size_t l = k; l < chars.size() && !reachable; ++l)
        if (tables[l][i][j] == 1) reachable = true;
      if (!reachable) {
        if (res.certificate.size() < certificate_cap) {
          PrunedBranch b;
          b.multiplicity_prefix.assign(mult.begin(), mult.begin() + static_cast<std::ptrdiff_t>(k));
          b.violated_pair = {i, j};
          res.certificate.push_back(std::move(b));
        }
        return false;
      }
    }
    if (k == chars.size()) {
      for (const auto& [i, j] : pairs)
        if (residual[i][j] != 0) return false;  // unreachable: pruned above
      if (!raw_solution) raw_solution = mult;
      if (detail::separates(x, chars, mult)) {
        separated_solution = mult;
        return true;
      }
      return false;
    }
    Int cap = caps[k];
    for (const auto& [i, j] : pairs)
      if (tables[k][i][j] == 1 && residual[i][j] < cap) cap = residual[i][j];
    for (Int m = 0; m <= cap; ++m) {
      if (m > 0)
        for (const auto& [i, j] : pairs)
          if (tables[k][i][j] == 1) {
            residual[i][j] -= 1;
            if (i != j) residual[j][i] -= 1;
          }
      mult[k] = m;
      if (self(self, k + 1)) return true;
    }
    // undo the full cap worth of subtractions
    for (const auto& [i, j] : pairs)
      if (tables[k][i][j] == 1) {
        residual[i][j] += cap;
        if (i != j) residual[j][i] += cap;
      }
    mult[k] = 0;
    return false;
  };
  rec(rec, 0);

  res.raw_feasible = raw_solution.has_value();
  res.feasible = separated_solution.has_value();
  if (res.feasible) {
    const IntVec& m = *separated_solution;
    std::vector<std::size_t> coord_char;
    for (std::size_t k = 0; k < chars.size(); ++k)
      for (Int c = 0; c < m[k]; ++c) coord_char.push_back(k);
    const std::size_t rank = coord_char.size() + pad_with_free;
    std::vector<RatVec> gens;
    for (std::size_t i = 1; i < n; ++i) {
      RatVec g(rank, Rat(0));
      for (std::size_t c = 0; c < coord_char.size(); ++c)
        g[c] = chars[coord_char[c]].value(elems[i]);
      gens.push_back(std::move(g));
    }
    PushoutWitness w{AdmissibleMonoid(rank, gens), {}};
    for (std::size_t k = 0; k < chars.size(); ++k)
      if (m[k] > 0) w.multiplicities.emplace_back(elems[k + 1], m[k]);
    res.witness = std::move(w);
    res.certificate.clear();
  }
  return res;
}

// Exact soundness predicate: recompute carries from explicit natural
// representatives (value vectors of each element of X) and compare.
inline bool pushout_matches_reps(const LocalMonoid& d, const AdmissibleMonoid& witness,
                                 const std::vector<RatVec>& natural_reps) {
  const auto& x = d.quotient_group();
  const auto elems = x.elements();
  if (natural_reps.size() != elems.size()) return false;
  if (witness.stabilizer_group().order() != x.order()) return false;
  for (const auto& r : natural_reps)
    if (!witness.group().contains(r)) return false;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j) {
      Int c = 0;
      for (std::size_t k = 0; k < witness.rank(); ++k)
        c += floor_rat(natural_reps[i][k] + natural_reps[j][k]);
      if (c != d.carry()[i][j]) return false;
    }
  return true;
}

// Natural representatives of a decide_pushout witness: value vectors of each
// element of X in the coordinate characters.
inline std::vector<RatVec> witness_natural_reps(const LocalMonoid& d,
                                                const PushoutWitness& w) {
  const auto& x = d.quotient_group();
  std::vector<RatVec> reps;
  for (const auto& e : x.elements()) {
    RatVec r;
    for (const auto& [chi_elem, m] : w.multiplicities) {
      Character chi(x, chi_elem);
      for (Int c = 0; c < m; ++c) r.push_back(chi.value(e));
    }
    r.resize(w.monoid.rank(), Rat(0));  // padding coordinates, if any
    reps.push_back(std::move(r));
  }
  return reps;
}

// Isomorphism of presentations: same invariant factors and the carry tables
// match under some automorphism of X.
inline bool isomorphic(const LocalMonoid& a, const LocalMonoid& b) {
  const auto& x = a.quotient_group();
  if (x != b.quotient_group()) return false;
  const auto elems = x.elements();
  const std::size_t n = elems.size();
  const auto& da = x.invariant_factors();
  // enumerate automorphisms by generator images
  std::vector<std::size_t> img(da.size(), 0);
  auto check_tuple = [&]() -> bool {
    std::vector<FiniteAbelianGroup::Element> images;
    for (std::size_t j = 0; j < da.size(); ++j) images.push_back(elems[img[j]]);
    for (std::size_t j = 0; j < da.size(); ++j)
      if (!x.is_zero(x.scale(da[j], images[j]))) return false;  // not well-defined
    // bijectivity: images of all elements pairwise distinct
    std::set<std::size_t> seen;
    std::vector<std::size_t> phi(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto v = x.zero();
      for (std::size_t j = 0; j < da.size(); ++j)
        v = x.add(v, x.scale(elems[i][j], images[j]));
      phi[i] = x.element_index(v);
      if (!seen.insert(phi[i]).second) return false;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (a.carry()[i][j] != b.carry()[phi[i]][phi[j]]) return false;
    return true;
  };
  if (da.empty()) return a.carry() == b.carry();
  for (;;) {
    if (check_tuple()) return true;
    std::size_t j = da.size();
    for (;;) {
      if (j == 0) return false;
      --j;
      if (++img[j] < n) break;
      img[j] = 0;
    }
  }
}

// Builder for paper-style presentations D inside N (+) A: generators plus the
// designated image delta of 1 in N.  Produces the carry-cocycle presentation
// by exhaustive minimal-lift search over bounded height.
struct SubmonoidPresentation {
  FiniteAbelianGroup ambient;  // the finite part A
  std::vector<std::pair<Int, FiniteAbelianGroup::Element>> generators;
  std::pair<Int, FiniteAbelianGroup::Element> unit;  // delta
};

inline LocalMonoid local_monoid_from_submonoid(const SubmonoidPresentation& p,
                                               Int height_cap = 4096) {
  const auto& a = p.ambient;
  const std::size_t k = a.generator_count();
  if (p.unit.first <= 0) throw error("designated unit must have positive height");
  std::vector<std::pair<Int, FiniteAbelianGroup::Element>> gens;
  for (const auto& g : p.generators) {
    if (g.first < 0) throw error("generator height negative");
    if (g.first == 0) {
      if (!a.is_zero(g.second)) throw error("not sharp: torsion unit among generators");
      continue;  // identity contributes nothing
    }
    gens.push_back({g.first, a.reduce(g.second)});
  }
  if (gens.empty()) throw error("no generators");

  // D^gp and <delta> as lattices in Z^{1+k} (A presented as Z^k mod d_j e_j)
  const auto& d = a.invariant_factors();
  auto embed = [&](const std::pair<Int, FiniteAbelianGroup::Element>& e) {
    IntVec v(1 + k, Int(0));
    v[0] = e.first;
    for (std::size_t i = 0; i < k; ++i) v[1 + i] = e.second[i];
    return v;
  };
  IntMatrix dcols(1 + k, gens.size() + k);
  for (std::size_t j = 0; j < gens.size(); ++j) {
    auto v = embed(gens[j]);
    for (std::size_t i = 0; i < 1 + k; ++i) dcols.at(i, j) = v[i];
  }
  for (std::size_t j = 0; j < k; ++j) dcols.at(1 + j, gens.size() + j) = d[j];
  IntMatrix dbasis = hermite_normal_form(dcols);

  IntMatrix ucols(1 + k, 1 + k);
  auto uv = embed({p.unit.first, a.reduce(p.unit.second)});
  for (std::size_t i = 0; i < 1 + k; ++i) ucols.at(i, 0) = uv[i];
  for (std::size_t j = 0; j < k; ++j) ucols.at(1 + j, 1 + j) = d[j];
  IntMatrix ubasis = hermite_normal_form(ucols);

  if (dbasis.cols() != 1 + k) throw error("quotient infinite: D^gp has deficient rank");
  // delta must lie in D^gp
  for (std::size_t j = 0; j < ubasis.cols(); ++j)
    if (!lattice_contains(dbasis, ubasis.column(j)))
      throw error("designated unit lies outside the monoid's group");

  IntMatrix c(1 + k, ubasis.cols());
  for (std::size_t j = 0; j < ubasis.cols(); ++j) {
    auto col = solve_integer(dbasis, ubasis.column(j));
    for (std::size_t i = 0; i < 1 + k; ++i) c.at(i, j) = (*col)[i];
  }
  auto cok = cokernel(c);
  if (cok.free_rank > 0) throw error("quotient infinite: D^gp/<delta> has positive rank");
  FiniteAbelianGroup x(cok.invariant_factors);

  SmithForm sf = smith_normal_form(c);
  std::vector<std::size_t> factor_rows;
  for (std::size_t i = 0; i < 1 + k; ++i)
    if (sf.d.at(i, i) > 1) factor_rows.push_back(i);
  auto class_of = [&](const std::pair<Int, FiniteAbelianGroup::Element>& e) {
    auto col = solve_integer(dbasis, embed(e));
    if (!col) throw error("element outside D^gp");
    IntVec y = sf.u * *col;
    FiniteAbelianGroup::Element res(factor_rows.size());
    for (std::size_t t = 0; t < factor_rows.size(); ++t) res[t] = y[factor_rows[t]];
    return x.reduce(std::move(res));
  };

  const auto xelems = x.elements();
  const std::size_t xn = xelems.size();
  Int bound = 4 * (p.unit.first + 1);
  for (const auto& g : gens) bound += 4 * g.first;

  for (; bound <= height_cap; bound *= 2) {
    // reachable (height, A-part) pairs up to the bound
    std::set<std::pair<Int, IntVec>> reach;
    std::vector<std::pair<Int, IntVec>> work;
    auto zero = std::make_pair(Int(0), a.zero());
    reach.insert(zero);
    work.push_back(zero);
    while (!work.empty()) {
      auto cur = work.back();
      work.pop_back();
      for (const auto& g : gens) {
        std::pair<Int, IntVec> nxt{cur.first + g.first, a.add(cur.second, g.second)};
        if (nxt.first > bound) continue;
        if (reach.insert(nxt).second) work.push_back(nxt);
      }
    }

    // minimal lift per class; duplicates at minimal height are a structure error
    std::vector<std::optional<std::pair<Int, IntVec>>> lift(xn);
    bool dup = false;
    for (const auto& e : reach) {
      auto cls = x.element_index(class_of(e));
      if (!lift[cls] || e.first < lift[cls]->first) {
        lift[cls] = e;
      } else if (e.first == lift[cls]->first && e.second != lift[cls]->second) {
        dup = true;
      }
    }
    if (dup) throw error("fiber has two minimal elements: inclusion is not integral");
    bool all = true;
    for (const auto& l : lift)
      if (!l) all = false;
    if (!all) continue;  // enlarge the bound

    // every reachable element must be lift + m*delta within its class
    for (const auto& e : reach) {
      auto cls = x.element_index(class_of(e));
      Int diff = e.first - lift[cls]->first;
      if (diff % p.unit.first != 0)
        throw error("fiber is not a torsor over the designated unit");
      Int m = diff / p.unit.first;
      auto expect = lift[cls]->second;
      expect = a.add(expect, a.scale(m, a.reduce(p.unit.second)));
      if (expect != e.second)
        throw error("fiber is not a torsor over the designated unit");
    }

    std::vector<std::vector<Int>> carry(xn, std::vector<Int>(xn, Int(0)));
    bool stable = true;
    for (std::size_t i = 0; i < xn && stable; ++i)
      for (std::size_t j = 0; j < xn && stable; ++j) {
        std::pair<Int, IntVec> s{lift[i]->first + lift[j]->first,
                                 a.add(lift[i]->second, lift[j]->second)};
        auto cls = x.element_index(x.add(xelems[i], xelems[j]));
        Int diff = s.first - lift[cls]->first;
        if (diff < 0 || diff % p.unit.first != 0) {
          stable = false;  // a smaller lift exists beyond the bound
          break;
        }
        carry[i][j] = diff / p.unit.first;
        auto expect = a.add(lift[cls]->second,
                            a.scale(carry[i][j], a.reduce(p.unit.second)));
        if (expect != s.second) throw error("addition leaves the described monoid");
      }
    if (!stable) continue;

    LocalMonoid out(x, std::move(carry));
    if (auto v = out.validate())
      throw error("presentation violates the " + v->axiom + " axiom");
    return out;
  }
  throw error("height bound exhausted while searching minimal lifts");
}

}  // namespace glt

#pragma once

#include <cstddef>
#include <vector>

#include "glt/lattice.hpp"
#include "glt/rational.hpp"

namespace glt {

// Finite abelian group in invariant-factor form d_1 | d_2 | ... | d_k with
// every d_i >= 2; the trivial group is the empty list.  Elements are residue
// vectors with x_i in [0, d_i).  This canonical form is the unique normal
// form: two groups are isomorphic exactly when the lists coincide.
class FiniteAbelianGroup {
 public:
  using Element = IntVec;

  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<Int> factors) : factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i] < 2) throw error("invariant factor below 2");
      if (i > 0 && factors_[i] % factors_[i - 1] != 0)
        throw error("invariant factors must form a divisibility chain");
    }
  }

  // Canonicalizes an arbitrary direct sum of cyclic groups Z/n_i.
  static FiniteAbelianGroup from_orders(const std::vector<Int>& orders) {
    IntMatrix d(orders.size(), orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (orders[i] <= 0) throw error("cyclic order must be positive");
      d.at(i, i) = orders[i];
    }
    auto c = cokernel(d);
    return FiniteAbelianGroup(c.invariant_factors);
  }

  static FiniteAbelianGroup trivial() { return FiniteAbelianGroup(); }

  const std::vector<Int>& invariant_factors() const { return factors_; }
  std::size_t generator_count() const { return factors_.size(); }
  bool is_trivial() const { return factors_.empty(); }

  Int order() const {
    Int n = 1;
    for (const auto& d : factors_) n *= d;
    return n;
  }

  Int exponent() const { return factors_.empty() ? Int(1) : factors_.back(); }

  Element zero() const { return Element(factors_.size(), Int(0)); }

  Element reduce(Element e) const {
    if (e.size() != factors_.size()) throw error("element rank mismatch");
    for (std::size_t i = 0; i < e.size(); ++i) {
      mpz_fdiv_r(e[i].get_mpz_t(), e[i].get_mpz_t(), factors_[i].get_mpz_t());
    }
    return e;
  }

  Element add(const Element& a, const Element& b) const {
    Element r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return reduce(std::move(r));
  }

  Element neg(const Element& a) const {
    Element r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = -r[i];
    return reduce(std::move(r));
  }

  Element scale(const Int& k, const Element& a) const {
    Element r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] *= k;
    return reduce(std::move(r));
  }

  Int order_of(const Element& a) const {
    Int o = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      // order of a_i in Z/d_i is d_i / gcd(a_i, d_i)
      o = lcm_int(o, factors_[i] / gcd_int(a[i], factors_[i]));
    }
    return o;
  }

  bool is_zero(const Element& a) const {
    for (const auto& x : a)
      if (x != 0) return false;
    return true;
  }

  // All elements, odometer order with the last coordinate fastest; the zero
  // element comes first.  This is the fixed enumeration order used by carry
  // tables and serialization.
  std::vector<Element> elements() const {
    std::vector<Element> out;
    Element cur = zero();
    for (;;) {
      out.push_back(cur);
      std::size_t i = cur.size();
      while (i > 0) {
        --i;
        cur[i] += 1;
        if (cur[i] < factors_[i]) break;
        cur[i] = 0;
        if (i == 0) return out;
      }
      if (cur.size() == 0) return out;  // trivial group
    }
  }

  std::size_t element_index(const Element& e) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      idx = idx * factors_[i].get_ui() + e[i].get_ui();
    return idx;
  }

  bool operator==(const FiniteAbelianGroup& o) const { return factors_ == o.factors_; }
  bool operator!=(const FiniteAbelianGroup& o) const { return !(*this == o); }

 private:
  std::vector<Int> factors_;
};

// Homomorphism between finite abelian groups given by generator images.
// Well-definedness requires d_i * images[i] = 0 in the target.
class GroupHom {
 public:
  GroupHom(FiniteAbelianGroup source, FiniteAbelianGroup target,
           std::vector<FiniteAbelianGroup::Element> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_.generator_count())
      throw error("generator image count mismatch");
    const auto& d = source_.invariant_factors();
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (!target_.is_zero(target_.scale(d[i], images_[i])))
        throw error("generator image order does not divide generator order");
    }
  }

  const FiniteAbelianGroup& source() const { return source_; }
  const FiniteAbelianGroup& target() const { return target_; }

  FiniteAbelianGroup::Element apply(const FiniteAbelianGroup::Element& e) const {
    auto r = target_.zero();
    for (std::size_t i = 0; i < e.size(); ++i)
      r = target_.add(r, target_.scale(e[i], images_[i]));
    return r;
  }

 private:
  FiniteAbelianGroup source_, target_;
  std::vector<FiniteAbelianGroup::Element> images_;
};

// Ext^1(a, Z^r) = a^r: each invariant factor repeated r times (already a
// divisibility chain after sorting the repeats in place).
inline FiniteAbelianGroup ext1_to_Z(const FiniteAbelianGroup& a, std::size_t r = 1) {
  std::vector<Int> factors;
  for (const auto& d : a.invariant_factors())
    for (std::size_t i = 0; i < r; ++i) factors.push_back(d);
  return FiniteAbelianGroup(std::move(factors));
}

// A character of X, i.e. an element of Hom(X, Q/Z), stored by generator
// values in [0,1) whose orders divide the generator orders.
class Character {
 public:
  Character(const FiniteAbelianGroup& x, FiniteAbelianGroup::Element residues)
      : group_(x), residues_(x.reduce(std::move(residues))) {}

  // chi(e) as the canonical representative in [0,1).
  Rat value(const FiniteAbelianGroup::Element& e) const {
    Rat s(0);
    const auto& d = group_.invariant_factors();
    for (std::size_t i = 0; i < e.size(); ++i) s += make_rat(e[i] * residues_[i], d[i]);
    return frac_rat(s);
  }

  const FiniteAbelianGroup::Element& residues() const { return residues_; }
  const FiniteAbelianGroup& group() const { return group_; }

  bool is_zero() const { return group_.is_zero(residues_); }

 private:
  FiniteAbelianGroup group_;
  FiniteAbelianGroup::Element residues_;
};

// All characters of x, in the element enumeration order of x.
inline std::vector<Character> characters(const FiniteAbelianGroup& x) {
  std::vector<Character> out;
  for (auto& e : x.elements()) out.emplace_back(x, e);
  return out;
}

}  // namespace glt

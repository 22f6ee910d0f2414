#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glt/abelian.hpp"
#include "glt/lattice.hpp"
#include "glt/rational.hpp"

namespace glt {

// Finitely generated subgroup of Q^n containing Z^n.  The complete invariant
// is the finite quotient G/Z^n inside (Q/Z)^n; we store it as the minimal
// scale M (the exponent of G/Z^n) together with the Hermite basis of the
// integer lattice M*G.  All equality, containment and membership questions
// are decided on this canonical form.
class AdmissibleGroup {
 public:
  explicit AdmissibleGroup(std::size_t rank) : AdmissibleGroup(rank, {}) {}

  AdmissibleGroup(std::size_t rank, const std::vector<RatVec>& generators) : rank_(rank) {
    Int m0 = 1;
    for (const auto& g : generators) {
      if (g.size() != rank_) throw error("generator rank mismatch");
      m0 = lcm_int(m0, den_lcm(g));
    }
    // lattice m0*G = <m0*generators, m0*Z^n>
    IntMatrix cols(rank_, generators.size() + rank_);
    for (std::size_t j = 0; j < generators.size(); ++j)
      for (std::size_t i = 0; i < rank_; ++i) {
        Rat scaled = Rat(m0) * generators[j][i];
        cols.at(i, j) = scaled.get_num();  // integral: m0 kills denominators
      }
    for (std::size_t i = 0; i < rank_; ++i) cols.at(i, generators.size() + i) = m0;
    IntMatrix h0 = hermite_normal_form(cols);
    // minimal scale: smallest M with M*G inside Z^n
    Int m = 1;
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = 0; j < h0.cols(); ++j)
        m = lcm_int(m, m0 / gcd_int(h0.at(i, j), m0));
    if (m == m0) {
      scale_ = m0;
      basis_ = h0;
    } else {
      IntMatrix rescaled(rank_, h0.cols());
      for (std::size_t i = 0; i < rank_; ++i)
        for (std::size_t j = 0; j < h0.cols(); ++j)
          rescaled.at(i, j) = h0.at(i, j) * m / m0;
      scale_ = m;
      basis_ = hermite_normal_form(rescaled);
    }
  }

  std::size_t rank() const { return rank_; }
  const Int& scale() const { return scale_; }
  const IntMatrix& basis() const { return basis_; }

  bool contains(const RatVec& v) const {
    if (v.size() != rank_) throw error("vector rank mismatch");
    IntVec w(rank_);
    for (std::size_t i = 0; i < rank_; ++i) {
      Rat scaled = Rat(scale_) * v[i];
      if (!is_integral(scaled)) return false;
      w[i] = scaled.get_num();
    }
    return lattice_contains(basis_, w);
  }

  bool operator==(const AdmissibleGroup& o) const {
    return rank_ == o.rank_ && scale_ == o.scale_ && basis_ == o.basis_;
  }
  bool operator!=(const AdmissibleGroup& o) const { return !(*this == o); }

  bool is_subgroup_of(const AdmissibleGroup& o) const {
    if (rank_ != o.rank_) throw error("ambient rank mismatch");
    for (const auto& g : group_generators())
      if (!o.contains(g)) return false;
    return true;
  }

  // Rational generators beyond Z^n: the canonical basis columns divided by
  // the scale, fractional parts taken, zero vectors dropped.
  std::vector<RatVec> group_generators() const {
    std::vector<RatVec> gens;
    for (std::size_t j = 0; j < basis_.cols(); ++j) {
      RatVec g(rank_);
      bool nonzero = false;
      for (std::size_t i = 0; i < rank_; ++i) {
        g[i] = frac_rat(make_rat(basis_.at(i, j), scale_));
        if (g[i] != 0) nonzero = true;
      }
      if (nonzero) gens.push_back(std::move(g));
    }
    return gens;
  }

  AdmissibleGroup quotient(const std::vector<std::size_t>& idx) const {
    check_index_set(idx);
    std::vector<RatVec> gens;
    for (const auto& g : group_generators()) {
      RatVec p(idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k) p[k] = g[idx[k]];
      gens.push_back(std::move(p));
    }
    return AdmissibleGroup(idx.size(), gens);
  }

  struct Pushout {
    FiniteAbelianGroup torsion;
    std::size_t free_rank = 0;
  };

  // Abelian-group pushout Z^I (+)_{Z^n} G; may have torsion (the quotient by
  // which is the quotient group from `quotient`).
  Pushout pushout(const std::vector<std::size_t>& idx) const {
    check_index_set(idx);
    // columns of basis_ form a basis of the lattice M*G, hence basis_/M is a
    // basis of G; express each e_i in it.
    IntMatrix rel(idx.size() + rank_, rank_);
    for (std::size_t i = 0; i < rank_; ++i) {
      IntVec me(rank_, Int(0));
      me[i] = scale_;
      auto c = solve_integer(basis_, me);
      if (!c) throw error("internal: Z^n not inside the lattice");
      for (std::size_t k = 0; k < idx.size(); ++k) rel.at(k, i) = idx[k] == i ? 1 : 0;
      for (std::size_t k = 0; k < rank_; ++k) rel.at(idx.size() + k, i) = -(*c)[k];
    }
    auto c = cokernel(rel);
    return Pushout{FiniteAbelianGroup(c.invariant_factors), c.free_rank};
  }

  struct StabilizerData {
    FiniteAbelianGroup group;                 // G/Z^n in invariant-factor form
    std::vector<RatVec> generator_reps;       // fractional representative per generator
  };

  // The finite quotient G/Z^n (the character group of the diagonalizable
  // stabilizer), with a canonical fractional representative in [0,1)^n for
  // each invariant-factor generator.
  StabilizerData stabilizer_data() const {
    IntMatrix c(rank_, rank_);
    for (std::size_t i = 0; i < rank_; ++i) {
      IntVec me(rank_, Int(0));
      me[i] = scale_;
      auto col = solve_integer(basis_, me);
      if (!col) throw error("internal: Z^n not inside the lattice");
      for (std::size_t k = 0; k < rank_; ++k) c.at(k, i) = (*col)[k];
    }
    SmithForm f = smith_normal_form(c);
    StabilizerData out;
    std::vector<Int> factors;
    IntMatrix uinv = unimodular_inverse(f.u);
    for (std::size_t k = 0; k < rank_; ++k) {
      const Int& d = f.d.at(k, k);
      if (d <= 1) continue;
      factors.push_back(d);
      // generator = basis_ * uinv e_k, divided by the scale, mod Z^n
      RatVec rep(rank_);
      IntVec lattice_vec = basis_ * uinv.column(k);
      for (std::size_t i = 0; i < rank_; ++i)
        rep[i] = frac_rat(make_rat(lattice_vec[i], scale_));
      out.generator_reps.push_back(std::move(rep));
    }
    out.group = FiniteAbelianGroup(std::move(factors));
    return out;
  }

  FiniteAbelianGroup stabilizer_group() const { return stabilizer_data().group; }

  // Canonical representative in [0,1)^n of each element of G/Z^n, indexed in
  // the element enumeration order of the stabilizer group.
  std::vector<RatVec> element_representatives(const StabilizerData& s) const {
    std::vector<RatVec> reps;
    for (const auto& e : s.group.elements()) {
      RatVec r(rank_, Rat(0));
      for (std::size_t j = 0; j < e.size(); ++j)
        for (std::size_t i = 0; i < rank_; ++i)
          r[i] += Rat(e[j]) * s.generator_reps[j][i];
      for (auto& q : r) q = frac_rat(q);
      reps.push_back(std::move(r));
    }
    return reps;
  }

 private:
  void check_index_set(const std::vector<std::size_t>& idx) const {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] >= rank_) throw error("index out of range");
      for (std::size_t l = k + 1; l < idx.size(); ++l)
        if (idx[k] == idx[l]) throw error("repeated index");
    }
  }

  std::size_t rank_;
  Int scale_;        // exponent of G/Z^n
  IntMatrix basis_;  // Hermite basis of the lattice scale_*G (rank_ columns)
};

// Admissible submonoid of Q^n_{>=0}: the nonnegative cone of an admissible
// group (lem:monoid-vs-group makes this a bijection, so the group is the
// whole representation).
class AdmissibleMonoid {
 public:
  explicit AdmissibleMonoid(AdmissibleGroup g) : group_(std::move(g)) {}
  AdmissibleMonoid(std::size_t rank, const std::vector<RatVec>& generators)
      : group_(rank, generators) {
    for (const auto& g : generators)
      for (const auto& q : g)
        if (q < 0) throw error("monoid generators must be nonnegative");
  }

  static AdmissibleMonoid free(std::size_t rank) { return AdmissibleMonoid(rank, {}); }

  std::size_t rank() const { return group_.rank(); }
  const AdmissibleGroup& group() const { return group_; }

  bool contains(const RatVec& v) const {
    if (v.size() != rank()) throw error("vector rank mismatch");
    for (const auto& q : v)
      if (q < 0) return false;
    return group_.contains(v);
  }

  AdmissibleMonoid quotient(const std::vector<std::size_t>& idx) const {
    return AdmissibleMonoid(group_.quotient(idx));
  }

  bool operator==(const AdmissibleMonoid& o) const { return group_ == o.group_; }
  bool operator!=(const AdmissibleMonoid& o) const { return !(*this == o); }

  bool is_contained_in(const AdmissibleMonoid& o) const {
    return group_.is_subgroup_of(o.group_);
  }

  FiniteAbelianGroup stabilizer_group() const { return group_.stabilizer_group(); }

  // Monoid generators: fractional representatives of every nonzero element
  // of G/Z^n together with the unit vectors.  Not minimal, but canonical and
  // always a generating set of the monoid.
  std::vector<RatVec> monoid_generators() const {
    auto s = group_.stabilizer_data();
    auto reps = group_.element_representatives(s);
    std::vector<RatVec> gens;
    for (auto& r : reps) {
      bool nonzero = false;
      for (const auto& q : r)
        if (q != 0) nonzero = true;
      if (nonzero) gens.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < rank(); ++i) {
      RatVec e(rank(), Rat(0));
      e[i] = 1;
      gens.push_back(std::move(e));
    }
    return gens;
  }

  struct FreeEnvelope {
    std::vector<Int> orders;  // m_1..m_n
    AdmissibleMonoid envelope;
  };

  // Coordinatewise quotients are (1/m_i)N in rank one; their direct sum is
  // the canonical free admissible monoid containing this one.
  FreeEnvelope free_envelope() const {
    std::vector<Int> orders(rank());
    std::vector<RatVec> gens;
    for (std::size_t i = 0; i < rank(); ++i) {
      AdmissibleGroup qi = group_.quotient({i});
      orders[i] = qi.scale();
      RatVec g(rank(), Rat(0));
      g[i] = make_rat(1, orders[i]);
      gens.push_back(std::move(g));
    }
    return FreeEnvelope{std::move(orders), AdmissibleMonoid(rank(), gens)};
  }

 private:
  AdmissibleGroup group_;
};

inline AdmissibleGroup group_from_monoid(const AdmissibleMonoid& m) { return m.group(); }
inline AdmissibleMonoid monoid_from_group(const AdmissibleGroup& g) {
  return AdmissibleMonoid(g);
}

// Stalk data of an admissible sheaf over a geometric point: each marked
// point carries the set of marking indices through it and an admissible
// monoid of matching rank.  The marking sets partition {1..n}.
struct StalkAssignment {
  struct Stalk {
    std::string point;
    std::vector<unsigned> markings;  // sorted 1-based marking indices
    AdmissibleMonoid monoid;
  };
  unsigned n_markings = 0;
  std::vector<Stalk> stalks;

  void validate() const {
    std::vector<bool> seen(n_markings, false);
    for (const auto& s : stalks) {
      if (s.monoid.rank() != s.markings.size())
        throw error("stalk rank does not match marking set");
      for (auto i : s.markings) {
        if (i < 1 || i > n_markings) throw error("marking index out of range");
        if (seen[i - 1]) throw error("marking index repeated across points");
        seen[i - 1] = true;
      }
    }
    for (unsigned i = 0; i < n_markings; ++i)
      if (!seen[i]) throw error("marking index missing");
  }
};

}  // namespace glt

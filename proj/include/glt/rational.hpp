#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace glt {

// Exact arithmetic backbone. Int is an arbitrary-precision integer and Rat a
// rational kept in lowest terms with positive denominator (mpq_class
// canonicalizes on construction from integers; results of arithmetic are
// canonical as well).
using Int = mpz_class;
using Rat = mpq_class;

using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;

class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw error("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p", "-p" or "p/q"; q must be nonzero.
inline Rat parse_rat(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    return make_rat(num, den);
  } catch (const std::invalid_argument&) {
    throw error("malformed rational: '" + text + "'");
  }
}

// Lowest-terms rendering, "p" when the denominator is 1, else "p/q".
inline std::string rat_str(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Int floor_rat(const Rat& q) {
  Int f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return f;
}

// Fractional part in [0, 1).
inline Rat frac_rat(const Rat& q) { return q - Rat(floor_rat(q)); }

inline Int gcd_int(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm_int(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Int den_lcm(const RatVec& v) {
  Int m = 1;
  for (const auto& q : v) m = lcm_int(m, q.get_den());
  return m;
}

inline bool is_integral(const Rat& q) { return q.get_den() == 1; }

inline RatVec parse_rat_vec(const std::vector<std::string>& parts) {
  RatVec v;
  v.reserve(parts.size());
  for (const auto& p : parts) v.push_back(parse_rat(p));
  return v;
}

}  // namespace glt

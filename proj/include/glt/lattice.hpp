#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "glt/rational.hpp"

namespace glt {

// Dense integer matrix, row-major.  Everything downstream (canonical forms of
// admissible groups, stabilizer computations, Picard kernels) reduces to a
// handful of exact normal-form computations on these.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
      : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_) throw error("entry count mismatch");
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw error("matrix product shape mismatch");
    IntMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& aik = at(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += aik * o.at(k, j);
      }
    return r;
  }

  IntVec operator*(const IntVec& v) const {
    if (cols_ != v.size()) throw error("matrix-vector shape mismatch");
    IntVec r(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
    return r;
  }

  IntVec column(std::size_t j) const {
    IntVec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
  }

  void swap_rows(std::size_t i, std::size_t k) {
    for (std::size_t j = 0; j < cols_; ++j) std::swap(at(i, j), at(k, j));
  }
  void swap_cols(std::size_t j, std::size_t k) {
    for (std::size_t i = 0; i < rows_; ++i) std::swap(at(i, j), at(i, k));
  }
  // row i -= q * row k
  void add_row(std::size_t i, std::size_t k, const Int& q) {
    for (std::size_t j = 0; j < cols_; ++j) at(i, j) -= q * at(k, j);
  }
  void add_col(std::size_t j, std::size_t k, const Int& q) {
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) -= q * at(i, k);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) at(i, j) = -at(i, j);
  }
  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) = -at(i, j);
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> a_;
};

struct SmithForm {
  IntMatrix u;  // unimodular, rows x rows
  IntMatrix d;  // diagonal with divisibility chain, rows x cols
  IntMatrix v;  // unimodular, cols x cols
};

// Smith normal form with U*m*V = D.  Pivot choice: smallest nonzero absolute
// value, ties broken by lowest row then lowest column index, so transforms
// are reproducible across runs.
inline SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  SmithForm f{IntMatrix::identity(rows), m, IntMatrix::identity(cols)};
  IntMatrix& d = f.d;

  const std::size_t t = rows < cols ? rows : cols;
  for (std::size_t k = 0; k < t; ++k) {
    for (;;) {
      // pick pivot among d[k.., k..]
      bool found = false;
      std::size_t pi = k, pj = k;
      Int best;
      for (std::size_t i = k; i < rows; ++i)
        for (std::size_t j = k; j < cols; ++j) {
          const Int& e = d.at(i, j);
          if (e == 0) continue;
          Int a = abs(e);
          if (!found || a < best) {
            found = true;
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (!found) goto done;  // all remaining entries zero
      if (pi != k) {
        d.swap_rows(k, pi);
        f.u.swap_rows(k, pi);
      }
      if (pj != k) {
        d.swap_cols(k, pj);
        f.v.swap_cols(k, pj);
      }
      bool clean = true;
      for (std::size_t i = k + 1; i < rows; ++i) {
        if (d.at(i, k) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), d.at(i, k).get_mpz_t(), d.at(k, k).get_mpz_t());
        d.add_row(i, k, q);
        f.u.add_row(i, k, q);
        if (d.at(i, k) != 0) clean = false;
      }
      for (std::size_t j = k + 1; j < cols; ++j) {
        if (d.at(k, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), d.at(k, j).get_mpz_t(), d.at(k, k).get_mpz_t());
        d.add_col(j, k, q);
        f.v.add_col(j, k, q);
        if (d.at(k, j) != 0) clean = false;
      }
      if (!clean) continue;
      // pivot divides every remaining entry?
      bool divides = true;
      for (std::size_t i = k + 1; i < rows && divides; ++i)
        for (std::size_t j = k + 1; j < cols && divides; ++j) {
          if (d.at(i, j) % d.at(k, k) != 0) {
            // fold offending row into row k and restart this pivot
            d.add_row(k, i, Int(-1));
            f.u.add_row(k, i, Int(-1));
            divides = false;
          }
        }
      if (divides) break;
    }
    if (d.at(k, k) < 0) {
      d.negate_row(k);
      f.u.negate_row(k);
    }
  }
done:
  return f;
}

struct CokernelDecomposition {
  std::vector<Int> invariant_factors;  // each > 1, divisibility chain
  std::size_t free_rank = 0;
};

// Cokernel of m : Z^cols -> Z^rows.
inline CokernelDecomposition cokernel(const IntMatrix& m) {
  SmithForm f = smith_normal_form(m);
  CokernelDecomposition c;
  const std::size_t t = m.rows() < m.cols() ? m.rows() : m.cols();
  std::size_t rank = 0;
  for (std::size_t k = 0; k < t; ++k) {
    const Int& d = f.d.at(k, k);
    if (d == 0) break;
    ++rank;
    if (d > 1) c.invariant_factors.push_back(d);
  }
  c.free_rank = m.rows() - rank;
  return c;
}

// One solution of m*x = b over the integers, if any.
inline std::optional<IntVec> solve_integer(const IntMatrix& m, const IntVec& b) {
  if (b.size() != m.rows()) throw error("solve shape mismatch");
  SmithForm f = smith_normal_form(m);
  IntVec ub = f.u * b;
  IntVec y(m.cols(), Int(0));
  const std::size_t t = m.rows() < m.cols() ? m.rows() : m.cols();
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const Int d = k < t ? f.d.at(k, k) : Int(0);
    if (d == 0) {
      if (ub[k] != 0) return std::nullopt;
    } else {
      if (ub[k] % d != 0) return std::nullopt;
      y[k] = ub[k] / d;
    }
  }
  return f.v * y;
}

// Basis (as columns) of the integer kernel of m.
inline IntMatrix kernel_basis(const IntMatrix& m) {
  SmithForm f = smith_normal_form(m);
  const std::size_t t = m.rows() < m.cols() ? m.rows() : m.cols();
  std::size_t rank = 0;
  for (std::size_t k = 0; k < t; ++k)
    if (f.d.at(k, k) != 0) ++rank;
  IntMatrix ker(m.cols(), m.cols() - rank);
  for (std::size_t j = rank; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.cols(); ++i) ker.at(i, j - rank) = f.v.at(i, j);
  return ker;
}

// Solves m*x == target mod moduli (componentwise), moduli positive.
inline std::optional<IntVec> solve_congruences(const IntMatrix& m, const IntVec& target,
                                               const IntVec& moduli) {
  if (target.size() != m.rows() || moduli.size() != m.rows())
    throw error("congruence shape mismatch");
  for (const auto& md : moduli)
    if (md <= 0) throw error("congruence moduli must be positive");
  IntMatrix aug(m.rows(), m.cols() + m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols() + i) = moduli[i];
  }
  auto sol = solve_integer(aug, target);
  if (!sol) return std::nullopt;
  IntVec x(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(m.cols()));
  return x;
}

// Column-style Hermite normal form of the lattice spanned by the columns of
// a: pivot rows strictly increase, pivots are positive, and in a pivot row
// every entry of an earlier column lies in [0, pivot).  Zero columns are
// dropped; the result is the canonical basis of the column lattice.
inline IntMatrix hermite_normal_form(IntMatrix a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t pc = 0;  // next pivot column slot
  for (std::size_t r = 0; r < rows && pc < cols; ++r) {
    for (;;) {
      bool found = false;
      std::size_t bj = pc;
      Int best;
      for (std::size_t j = pc; j < cols; ++j) {
        const Int& e = a.at(r, j);
        if (e == 0) continue;
        Int v = abs(e);
        if (!found || v < best) {
          found = true;
          best = v;
          bj = j;
        }
      }
      if (!found) break;
      if (bj != pc) a.swap_cols(pc, bj);
      bool clean = true;
      for (std::size_t j = pc + 1; j < cols; ++j) {
        if (a.at(r, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a.at(r, j).get_mpz_t(), a.at(r, pc).get_mpz_t());
        a.add_col(j, pc, q);
        if (a.at(r, j) != 0) clean = false;
      }
      if (clean) {
        if (a.at(r, pc) < 0) a.negate_col(pc);
        for (std::size_t j = 0; j < pc; ++j) {
          Int q;
          mpz_fdiv_q(q.get_mpz_t(), a.at(r, j).get_mpz_t(), a.at(r, pc).get_mpz_t());
          a.add_col(j, pc, q);
        }
        ++pc;
        break;
      }
    }
  }
  IntMatrix h(rows, pc);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < pc; ++j) h.at(i, j) = a.at(i, j);
  return h;
}

inline bool lattice_contains(const IntMatrix& basis, const IntVec& v) {
  return solve_integer(basis, v).has_value();
}

// Basis of the intersection of the two column lattices.
inline IntMatrix lattice_intersection(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw error("lattice rank mismatch");
  IntMatrix cat(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) cat.at(i, j) = a.at(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) cat.at(i, a.cols() + j) = -b.at(i, j);
  }
  IntMatrix ker = kernel_basis(cat);
  IntMatrix top(a.cols(), ker.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < ker.cols(); ++j) top.at(i, j) = ker.at(i, j);
  return hermite_normal_form(a * top);
}

// Inverse of a unimodular matrix (integral by assumption).
inline IntMatrix unimodular_inverse(const IntMatrix& u) {
  if (u.rows() != u.cols()) throw error("inverse of non-square matrix");
  IntMatrix inv(u.rows(), u.cols());
  for (std::size_t j = 0; j < u.cols(); ++j) {
    IntVec e(u.rows(), Int(0));
    e[j] = 1;
    auto col = solve_integer(u, e);
    if (!col) throw error("matrix is not unimodular");
    for (std::size_t i = 0; i < u.rows(); ++i) inv.at(i, j) = (*col)[i];
  }
  return inv;
}

inline Int det(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw error("determinant of non-square matrix");
  // via SNF: |det| is the product of the diagonal; sign tracked separately is
  // not needed anywhere, so this returns the absolute value.
  SmithForm f = smith_normal_form(m);
  Int p = 1;
  for (std::size_t k = 0; k < m.rows(); ++k) p *= f.d.at(k, k);
  return p;
}

}  // namespace glt

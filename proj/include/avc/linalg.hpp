#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "avc/exterior.hpp"
#include "avc/ring.hpp"

namespace avc {

using RMatrix = std::vector<RVec>;

namespace detail {

inline RingElem unit_inverse(const RingElem& u) {
  const auto& t = u.terms()[0];
  Exponents inv{};
  for (int v = 0; v < kMaxVars; ++v) inv[v] = static_cast<std::int16_t>(-t.exp[v]);
  return RingElem::monomial(u.ring(), inv, Scalar(1) / t.coeff);
}

/// Scale a vector by a unit and strip its common monomial factor.
inline void normalize(RVec& row) {
  const RingElem* lead = nullptr;
  RingPtr ring;
  for (const auto& x : row) {
    if (x.is_zero()) continue;
    if (!lead) lead = &x;
    ring = RingElem::merge_rings(ring, x.ring());
  }
  if (!lead) return;
  const int nv = ring ? ring->num_vars() : 0;
  Exponents lo{};
  bool first = true;
  for (const auto& x : row) {
    for (const auto& t : x.terms()) {
      for (int v = 0; v < nv; ++v)
        lo[v] = first ? t.exp[v] : std::min(lo[v], t.exp[v]);
      first = false;
    }
  }
  for (int v = 0; v < nv; ++v) lo[v] = static_cast<std::int16_t>(-lo[v]);
  Scalar inv = Scalar(1) / lead->leading().coeff;
  for (auto& x : row) {
    if (x.is_zero()) continue;
    x = x.shifted(lo).scaled(inv);
  }
}

inline long pivot_score(const RingElem& x) {
  if (x.is_unit()) return 0;
  return 1000L * static_cast<long>(x.size()) + x.total_degree();
}

}  // namespace detail

/// Fraction-free reduced echelon form: each pivot column is zero outside its
/// pivot row. Pivots are searched only in the first pivot_cols columns.
struct Echelon {
  RMatrix rows;
  std::vector<int> pivots;
  int rank() const { return static_cast<int>(pivots.size()); }
};

inline Echelon rref(RMatrix m, int pivot_cols = -1) {
  const int nrows = static_cast<int>(m.size());
  const int ncols = nrows ? static_cast<int>(m[0].size()) : 0;
  if (pivot_cols < 0 || pivot_cols > ncols) pivot_cols = ncols;
  Echelon e;
  int r = 0;
  for (int c = 0; c < pivot_cols && r < nrows; ++c) {
    int best = -1;
    long best_score = std::numeric_limits<long>::max();
    for (int q = r; q < nrows; ++q) {
      if (m[q][c].is_zero()) continue;
      long s = detail::pivot_score(m[q][c]);
      if (s < best_score) {
        best = q;
        best_score = s;
      }
    }
    if (best < 0) continue;
    std::swap(m[r], m[best]);
    if (m[r][c].is_unit()) {
      RingElem inv = detail::unit_inverse(m[r][c]);
      for (auto& x : m[r]) x *= inv;
    }
    const RingElem a = m[r][c];
    const bool monic = a.is_unit();
    for (int q = 0; q < nrows; ++q) {
      if (q == r || m[q][c].is_zero()) continue;
      const RingElem b = m[q][c];
      for (int k = 0; k < ncols; ++k) {
        if (monic) {
          if (!m[r][k].is_zero()) m[q][k] -= b * m[r][k];
        } else {
          m[q][k] = a * m[q][k] - b * m[r][k];
        }
      }
      detail::normalize(m[q]);
    }
    e.pivots.push_back(c);
    ++r;
  }
  e.rows = std::move(m);
  return e;
}

inline int rank(const RMatrix& m) { return rref(m).rank(); }

/// Basis of the right kernel over the fraction field, with ring entries.
inline std::vector<RVec> kernel(const RMatrix& m, int ncols) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(ncols, false);
  for (int c : e.pivots) is_pivot[c] = true;
  std::vector<RVec> out;
  for (int f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    RVec x(ncols);
    RingElem lcm = 1;
    for (int i = 0; i < e.rank(); ++i)
      if (!e.rows[i][f].is_zero()) lcm *= e.rows[i][e.pivots[i]];
    x[f] = lcm;
    for (int i = 0; i < e.rank(); ++i) {
      if (e.rows[i][f].is_zero()) continue;
      RingElem others = 1;
      for (int j = 0; j < e.rank(); ++j)
        if (j != i && !e.rows[j][f].is_zero()) others *= e.rows[j][e.pivots[j]];
      x[e.pivots[i]] = -(e.rows[i][f] * others);
    }
    detail::normalize(x);
    out.push_back(std::move(x));
  }
  return out;
}

/// b = sum_i (num[i] / den[i]) gens[i].
struct SpanSolution {
  RVec num;
  RVec den;
};

inline std::optional<SpanSolution> solve_in_span(const std::vector<RVec>& gens, const RVec& b) {
  const int n = static_cast<int>(b.size());
  const int k = static_cast<int>(gens.size());
  RMatrix m(n, RVec(k + 1));
  for (int row = 0; row < n; ++row) {
    for (int g = 0; g < k; ++g) m[row][g] = gens[g].at(row);
    m[row][k] = b[row];
  }
  Echelon e = rref(std::move(m), k);
  for (int row = e.rank(); row < n; ++row)
    if (!e.rows[row][k].is_zero()) return std::nullopt;
  SpanSolution s{RVec(k), RVec(k, RingElem(1))};
  for (int i = 0; i < e.rank(); ++i) {
    s.num[e.pivots[i]] = e.rows[i][k];
    s.den[e.pivots[i]] = e.rows[i][e.pivots[i]];
  }
  return s;
}

/// Whether num/den has a reduced denominator dividing a power of the product
/// of the declared denominators.
inline bool denominator_allowed(const RingElem& num, const RingElem& den,
                                const std::vector<RingElem>& declared) {
  if (den.is_unit() || num.is_zero()) return true;
  if (divides(den, num)) return true;
  RingElem prod(den.ring(), 1);
  for (const auto& d : declared) prod *= d;
  if (prod.is_unit()) return false;
  RingElem acc = num;
  for (int k = 0; k < den.total_degree(); ++k) {
    acc *= prod;
    if (divides(den, acc)) return true;
  }
  return false;
}

/// Determinant by expansion over column subsets.
inline RingElem determinant(const RMatrix& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return RingElem(1);
  std::vector<RingElem> minors(std::size_t{1} << n);
  minors[0] = RingElem(1);
  for (Mask s = 1; s < (Mask{1} << n); ++s) {
    int row = mask_degree(s) - 1;
    RingElem acc;
    for (Mask rest = s; rest; rest &= rest - 1) {
      int c = lowest_index(rest);
      const RingElem& entry = m[row][c];
      int after = count_above(s, c);
      if (!entry.is_zero()) {
        RingElem term = entry * minors[s & ~bit(c)];
        if (after & 1) {
          acc -= term;
        } else {
          acc += term;
        }
      }
    }
    minors[s] = acc;
  }
  return minors[(Mask{1} << n) - 1];
}

inline RMatrix minor_matrix(const RMatrix& m, int skip_row, int skip_col) {
  RMatrix r;
  for (int i = 0; i < static_cast<int>(m.size()); ++i) {
    if (i == skip_row) continue;
    RVec row;
    for (int j = 0; j < static_cast<int>(m[i].size()); ++j)
      if (j != skip_col) row.push_back(m[i][j]);
    r.push_back(std::move(row));
  }
  return r;
}

/// adj(m) with m * adj(m) = det(m) * I.
inline RMatrix adjugate(const RMatrix& m) {
  const int n = static_cast<int>(m.size());
  RMatrix adj(n, RVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RingElem c = determinant(minor_matrix(m, i, j));
      adj[j][i] = ((i + j) & 1) ? -c : c;
    }
  return adj;
}

inline RMatrix identity_matrix(int n, const RingPtr& ring = nullptr) {
  RMatrix m(n, RVec(n, RingElem(ring, 0)));
  for (int i = 0; i < n; ++i) m[i][i] = RingElem(ring, 1);
  return m;
}

inline RMatrix matmul(const RMatrix& a, const RMatrix& b) {
  const std::size_t n = a.size();
  const std::size_t k = b.size();
  const std::size_t m = k ? b[0].size() : 0;
  RMatrix r(n, RVec(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (!b[l][j].is_zero()) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

inline RMatrix transpose(const RMatrix& a) {
  if (a.empty()) return {};
  RMatrix r(a[0].size(), RVec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j];
  return r;
}

// ---------------------------------------------------------------------------
// Matrices over the Gaussian rationals.

using QMatrix = std::vector<std::vector<Scalar>>;

struct QEchelon {
  QMatrix rows;
  std::vector<int> pivots;
  int rank() const { return static_cast<int>(pivots.size()); }
};

inline QEchelon rref(QMatrix m) {
  const int nrows = static_cast<int>(m.size());
  const int ncols = nrows ? static_cast<int>(m[0].size()) : 0;
  QEchelon e;
  int r = 0;
  for (int c = 0; c < ncols && r < nrows; ++c) {
    int p = r;
    while (p < nrows && m[p][c].is_zero()) ++p;
    if (p == nrows) continue;
    std::swap(m[r], m[p]);
    Scalar inv = Scalar(1) / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (int q = 0; q < nrows; ++q) {
      if (q == r || m[q][c].is_zero()) continue;
      Scalar f = m[q][c];
      for (int k = 0; k < ncols; ++k) m[q][k] -= f * m[r][k];
    }
    e.pivots.push_back(c);
    ++r;
  }
  e.rows = std::move(m);
  return e;
}

inline int rank(const QMatrix& m) { return rref(m).rank(); }

inline std::vector<std::vector<Scalar>> kernel(const QMatrix& m, int ncols) {
  QEchelon e = rref(m);
  std::vector<bool> is_pivot(ncols, false);
  for (int c : e.pivots) is_pivot[c] = true;
  std::vector<std::vector<Scalar>> out;
  for (int f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> x(ncols);
    x[f] = 1;
    for (int i = 0; i < e.rank(); ++i) x[e.pivots[i]] = -e.rows[i][f];
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace avc

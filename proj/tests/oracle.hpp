#pragma once

// Brute-force reference evaluations used to cross-check the library.

#include <algorithm>
#include <numeric>
#include <vector>

#include "avc/exterior.hpp"

namespace oracle {

using namespace avc;

/// w(e_{idx[0]}, ..., e_{idx[k-1]}) in one coefficient slot.
inline RingElem eval(const AForm& w, const std::vector<int>& idx, int slot = 0) {
  int s = sort_sign(idx);
  if (s == 0) return RingElem();
  std::vector<int> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  RingElem c = w.coeff(mask_from_indices(sorted), slot);
  return s > 0 ? c : -c;
}

/// Rebuild a form of degree k from its values on increasing index tuples.
template <class F>
AForm from_values(int rank_a, int rank_v, int k, F value) {
  AForm r(rank_a, rank_v);
  for (Mask m : masks_of_degree(rank_a, k)) {
    auto idx = mask_indices(m);
    for (int s = 0; s < r.width(); ++s) r.add(m, s, value(idx, s));
  }
  return r;
}

/// Shuffle-sum definition of the wedge product of homogeneous forms, one of
/// them scalar.
inline AForm wedge(const AForm& a, int p, const AForm& b, int q) {
  const int rv = a.is_valued() ? a.rank_v() : b.rank_v();
  return from_values(a.rank_a(), rv, p + q, [&](const std::vector<int>& idx, int s) {
    RingElem acc;
    const int n = p + q;
    for (Mask pick : masks_of_degree(n, p)) {
      std::vector<int> left;
      std::vector<int> right;
      std::vector<int> order;
      for (int t = 0; t < n; ++t) (pick & bit(t) ? left : right).push_back(idx[t]);
      for (int t = 0; t < n; ++t)
        if (pick & bit(t)) order.push_back(t);
      for (int t = 0; t < n; ++t)
        if (!(pick & bit(t))) order.push_back(t);
      RingElem term = eval(a, left, a.is_valued() ? s : 0) * eval(b, right, b.is_valued() ? s : 0);
      acc += sort_sign(order) > 0 ? term : -term;
    }
    return acc;
  });
}

/// (i_X w)(Y...) = w(X, Y...).
inline AForm contract(const RVec& x, const AForm& w, int k) {
  return from_values(w.rank_a(), w.rank_v(), k - 1, [&](const std::vector<int>& idx, int s) {
    RingElem acc;
    for (int i = 0; i < w.rank_a(); ++i) {
      if (x[i].is_zero()) continue;
      std::vector<int> full{i};
      full.insert(full.end(), idx.begin(), idx.end());
      acc += x[i] * eval(w, full, s);
    }
    return acc;
  });
}


/// Rank of a dense rational matrix by plain Gaussian elimination.
inline int rank(std::vector<std::vector<mpq_class>> m) {
  int r = 0;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (int q = r + 1; q < rows; ++q) {
      if (m[q][c] == 0) continue;
      mpq_class f = m[q][c] / m[r][c];
      for (int k = c; k < cols; ++k) m[q][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

/// Lie algebra with structure constants bracket[i][j][k] and a one-dimensional
/// representation weight[i].
struct PointAlgebra {
  int dim = 0;
  std::vector<std::vector<std::vector<mpq_class>>> bracket;
  std::vector<mpq_class> weight;
};

/// dim H^k from the Chevalley-Eilenberg formula evaluated on index tuples.
inline int ce_dim(const PointAlgebra& g, int k) {
  const int n = g.dim;
  auto cochains = [&](int deg) {
    std::vector<std::vector<int>> out;
    for (Mask m : masks_of_degree(n, deg)) out.push_back(mask_indices(m));
    return out;
  };
  // matrix of d: C^deg -> C^(deg+1); rows indexed by (deg+1)-tuples
  auto dmatrix = [&](int deg) {
    auto src = cochains(deg);
    auto dst = cochains(deg + 1);
    std::vector<std::vector<mpq_class>> m(dst.size(), std::vector<mpq_class>(src.size()));
    for (std::size_t s = 0; s < src.size(); ++s) {
      // alpha = the dual basis cochain of src[s]
      auto alpha = [&](const std::vector<int>& idx) -> mpq_class {
        std::vector<int> sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != src[s]) return 0;
        return sort_sign(idx);
      };
      for (std::size_t t = 0; t < dst.size(); ++t) {
        const auto& x = dst[t];
        mpq_class acc = 0;
        for (int i = 0; i <= deg; ++i) {
          std::vector<int> rest;
          for (int l = 0; l <= deg; ++l)
            if (l != i) rest.push_back(x[l]);
          mpq_class term = g.weight[x[i]] * alpha(rest);
          acc += (i % 2) ? -term : term;
        }
        for (int i = 0; i <= deg; ++i)
          for (int j = i + 1; j <= deg; ++j)
            for (int c = 0; c < n; ++c) {
              const mpq_class& coef = g.bracket[x[i]][x[j]][c];
              if (coef == 0) continue;
              std::vector<int> args{c};
              for (int l = 0; l <= deg; ++l)
                if (l != i && l != j) args.push_back(x[l]);
              mpq_class term = coef * alpha(args);
              acc += ((i + j) % 2) ? -term : term;
            }
        m[t][s] = acc;
      }
    }
    return m;
  };
  if (k < 0 || k > n) return 0;
  int dim_k = static_cast<int>(cochains(k).size());
  int out = k < n ? rank(dmatrix(k)) : 0;
  int in = k > 0 ? rank(dmatrix(k - 1)) : 0;
  return dim_k - out - in;
}

/// Right derivative by the odd coordinate of e_i on grade-0 multivectors.
inline Multivector right_deriv(const Multivector& p, int i) {
  Multivector r(p.rank_a());
  for (const auto& [m, c] : p.terms()) {
    if (!(m & bit(i))) continue;
    r.add(m & ~bit(i), count_above(m, i) % 2 ? -c : c);
  }
  return r;
}

inline Multivector coord_deriv(const Multivector& p, int i) {
  Multivector r(p.rank_a());
  for (const auto& [m, c] : p.terms()) r.add(m, partial(c.part(0), i));
  return r;
}

/// Schouten bracket of homogeneous multivector fields on coordinate space,
/// in odd-variable form.
inline Multivector schouten(const Multivector& p, int dp, const Multivector& q, int dq) {
  Multivector r(p.rank_a());
  bool plus = ((dp - 1) * (dq - 1)) % 2 != 0;
  for (int i = 0; i < p.rank_a(); ++i) {
    r += wedge(right_deriv(p, i), coord_deriv(q, i));
    Multivector t = wedge(right_deriv(q, i), coord_deriv(p, i));
    if (plus) r += t; else r -= t;
  }
  return r;
}

}  // namespace oracle

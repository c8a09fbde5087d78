#pragma once

#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "avc/exterior.hpp"
#include "avc/linalg.hpp"
#include "avc/ring.hpp"

namespace avc {

/// One identity checked over a finite family of inputs. The witness is the
/// first failing input in the checking order, as 1-based frame indices.
struct Check {
  Check() = default;
  explicit Check(std::string n) : name(std::move(n)) {}

  std::string name;
  bool pass = true;
  std::size_t checked = 0;
  std::vector<int> witness;
  std::string residual;

  void fail(std::vector<int> w, std::string r) {
    if (!pass) return;
    pass = false;
    witness = std::move(w);
    residual = std::move(r);
  }
};

struct ValidationReport {
  std::vector<Check> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline std::vector<int> one_based(std::initializer_list<int> idx) {
  std::vector<int> out;
  for (int i : idx) out.push_back(i + 1);
  return out;
}

/// Lie algebroid in a local frame: anchor(e_i) = sum_j anchor[i][j] d/dx_j and
/// [e_i, e_j] = sum_k c_ij^k e_k.
class LieAlgebroid {
 public:
  LieAlgebroid() = default;
  LieAlgebroid(RingPtr ring, int rank, RMatrix anchor)
      : ring_(std::move(ring)), rank_(rank), anchor_(std::move(anchor)) {
    if (rank < 0 || rank > kMaxRank) throw std::out_of_range("rank of A");
    if (static_cast<int>(anchor_.size()) != rank)
      throw std::invalid_argument("anchor needs one row per frame element");
    for (auto& row : anchor_) {
      if (static_cast<int>(row.size()) != ring_->num_coords())
        throw std::invalid_argument("anchor row needs one entry per coordinate");
      for (auto& x : row) x = x.with_ring(ring_);
    }
    structure_.assign(static_cast<std::size_t>(rank) * rank * rank, RingElem(ring_, 0));
    sparse_.assign(static_cast<std::size_t>(rank) * rank, {});
  }

  static LieAlgebroid tangent(const RingPtr& ring) {
    int n = ring->num_coords();
    return LieAlgebroid(ring, n, identity_matrix(n, ring));
  }

  /// Sets c_ij^k only; the antisymmetric partner is left untouched.
  void set_structure(int i, int j, int k, const RingElem& c) {
    structure_.at(index(i, j, k)) = c.with_ring(ring_);
    rebuild(i, j);
  }
  /// Sets [e_i, e_j] = comps and [e_j, e_i] = -comps.
  void set_bracket(int i, int j, const RVec& comps) {
    if (static_cast<int>(comps.size()) != rank_) throw std::invalid_argument("bracket size");
    for (int k = 0; k < rank_; ++k) {
      structure_.at(index(i, j, k)) = comps[k].with_ring(ring_);
      structure_.at(index(j, i, k)) = (-comps[k]).with_ring(ring_);
    }
    rebuild(i, j);
    rebuild(j, i);
  }

  const RingPtr& ring() const { return ring_; }
  int rank() const { return rank_; }
  int num_coords() const { return ring_->num_coords(); }
  const RMatrix& anchor() const { return anchor_; }
  const RingElem& anchor(int i, int j) const { return anchor_[i][j]; }
  const RingElem& structure(int i, int j, int k) const { return structure_[index(i, j, k)]; }
  const std::vector<std::pair<int, RingElem>>& frame_bracket(int i, int j) const {
    return sparse_[static_cast<std::size_t>(i) * rank_ + j];
  }

  RingElem zero() const { return RingElem(ring_, 0); }
  RVec zero_section() const { return RVec(rank_, zero()); }
  RVec frame(int i) const {
    RVec v = zero_section();
    v.at(i) = RingElem(ring_, 1);
    return v;
  }

  /// anchor(e_i) applied to f.
  RingElem anchor_apply(int i, const RingElem& f) const {
    RingElem r(ring_, 0);
    if (f.is_constant()) return r;
    for (int j = 0; j < num_coords(); ++j)
      if (!anchor_[i][j].is_zero()) r += anchor_[i][j] * partial(f.with_ring(ring_), j);
    return r;
  }
  RingElem act(std::span<const RingElem> x, const RingElem& f) const {
    RingElem r(ring_, 0);
    if (f.is_constant()) return r;
    for (int i = 0; i < rank_; ++i)
      if (!x[i].is_zero()) r += x[i] * anchor_apply(i, f);
    return r;
  }

  RVec bracket(std::span<const RingElem> x, std::span<const RingElem> y) const {
    RVec out = zero_section();
    for (int i = 0; i < rank_; ++i) {
      if (x[i].is_zero()) continue;
      for (int j = 0; j < rank_; ++j) {
        if (y[j].is_zero()) continue;
        const auto& br = frame_bracket(i, j);
        if (br.empty()) continue;
        RingElem xy = x[i] * y[j];
        for (const auto& [k, c] : br) out[k] += xy * c;
      }
    }
    for (int k = 0; k < rank_; ++k) {
      out[k] += act(x, y[k]);
      out[k] -= act(y, x[k]);
    }
    return out;
  }

 private:
  std::size_t index(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= rank_ || j >= rank_ || k >= rank_)
      throw std::out_of_range("frame index");
    return (static_cast<std::size_t>(i) * rank_ + j) * rank_ + k;
  }
  void rebuild(int i, int j) {
    auto& s = sparse_[static_cast<std::size_t>(i) * rank_ + j];
    s.clear();
    for (int k = 0; k < rank_; ++k)
      if (!structure(i, j, k).is_zero()) s.emplace_back(k, structure(i, j, k));
  }

  RingPtr ring_;
  int rank_ = 0;
  RMatrix anchor_;
  std::vector<RingElem> structure_;
  std::vector<std::vector<std::pair<int, RingElem>>> sparse_;
};

/// A-module structure on V in a local frame u_1..u_v:
/// L_{e_i} u_b = sum_a theta(i, b, a) u_a.
class AModule {
 public:
  AModule() = default;
  AModule(int rank_a, int rank_v, const RingPtr& ring = nullptr)
      : rank_a_(rank_a), rank_v_(rank_v),
        theta_(static_cast<std::size_t>(rank_a) * rank_v * rank_v, RingElem(ring, 0)) {}

  int rank_a() const { return rank_a_; }
  int rank_v() const { return rank_v_; }
  const RingElem& theta(int i, int b, int a) const { return theta_.at(index(i, b, a)); }
  void set_theta(int i, int b, int a, const RingElem& c) { theta_.at(index(i, b, a)) = c; }

 private:
  std::size_t index(int i, int b, int a) const {
    if (i < 0 || i >= rank_a_ || b < 0 || b >= rank_v_ || a < 0 || a >= rank_v_)
      throw std::out_of_range("module index");
    return (static_cast<std::size_t>(i) * rank_v_ + b) * rank_v_ + a;
  }

  int rank_a_ = 0;
  int rank_v_ = 0;
  std::vector<RingElem> theta_;
};

/// Differential, contraction and Lie derivative on forms with values in V (or
/// in the functions, for scalar forms) and on graded forms.
class Cartan {
 public:
  Cartan(const LieAlgebroid& a, const AModule& v) : a_(a), v_(v) {
    if (v.rank_a() != a.rank()) throw std::invalid_argument("module rank does not match A");
  }
  Cartan(LieAlgebroid&&, const AModule&) = delete;
  Cartan(const LieAlgebroid&, AModule&&) = delete;
  Cartan(LieAlgebroid&&, AModule&&) = delete;

  const LieAlgebroid& algebroid() const { return a_; }
  const AModule& module() const { return v_; }

  /// L_{e_j} on a coefficient vector. weight 0: functions; weight 1: V;
  /// weight k: the k-th tensor power of a line bundle V.
  RVec frame_act(int j, const RVec& s, int weight) const {
    RVec out(s.size(), a_.zero());
    for (std::size_t b = 0; b < s.size(); ++b) out[b] = a_.anchor_apply(j, s[b]);
    if (weight == 0) return out;
    if (weight != 1 && v_.rank_v() != 1) throw std::invalid_argument("weights need V of rank 1");
    const int w = static_cast<int>(s.size());
    for (int b = 0; b < w; ++b) {
      if (s[b].is_zero()) continue;
      for (int c = 0; c < w; ++c) {
        const RingElem& t = v_.theta(j, b, c);
        if (!t.is_zero()) out[c] += RingElem(weight) * s[b] * t;
      }
    }
    return out;
  }

  /// L_X on a section of V.
  RVec act_on_v(std::span<const RingElem> x, const RVec& s) const {
    RVec out(s.size(), a_.zero());
    for (int i = 0; i < a_.rank(); ++i) {
      if (x[i].is_zero()) continue;
      RVec t = frame_act(i, s, 1);
      for (std::size_t b = 0; b < s.size(); ++b) out[b] += x[i] * t[b];
    }
    return out;
  }

  AForm d(const AForm& w) const { return d_weighted(w, w.is_valued() ? 1 : 0); }

  AForm lie(std::span<const RingElem> x, const AForm& w) const {
    return lie_weighted(x, w, w.is_valued() ? 1 : 0);
  }

  AForm iota(std::span<const RingElem> x, const AForm& w) const { return contract(x, w); }

  /// A acting on the graded coefficients.
  GradedCoeff act(std::span<const RingElem> x, const GradedCoeff& c) const {
    GradedCoeff out;
    for (const auto& [g, f] : c.parts()) {
      RVec s{f};
      for (int i = 0; i < a_.rank(); ++i) {
        if (x[i].is_zero()) continue;
        out.add(g, x[i] * frame_act(i, s, g)[0]);
      }
    }
    return out;
  }

  GradedForm d(const GradedForm& w) const {
    GradedForm out(a_.rank());
    for (int g : grades(w)) out += regrade(d_weighted(grade_part(w, g), g), g);
    return out;
  }

  GradedForm lie(std::span<const RingElem> x, const GradedForm& w) const {
    GradedForm out(a_.rank());
    for (int g : grades(w)) out += regrade(lie_weighted(x, grade_part(w, g), g), g);
    return out;
  }

 private:
  static std::set<int> grades(const GradedForm& w) {
    std::set<int> gs;
    for (const auto& [m, c] : w.terms())
      for (const auto& [g, f] : c.parts()) gs.insert(g);
    return gs;
  }
  AForm grade_part(const GradedForm& w, int g) const {
    AForm r(a_.rank(), 1);
    for (const auto& [m, c] : w.terms()) r.add(m, 0, c.part(g));
    return r;
  }
  GradedForm regrade(const AForm& w, int g) const {
    GradedForm r(a_.rank());
    for (const auto& [m, c] : w.terms()) r.add(m, g, c[0]);
    return r;
  }

  static std::set<int> degrees(const AForm& w) {
    std::set<int> ks;
    for (const auto& [m, c] : w.terms()) ks.insert(mask_degree(m));
    return ks;
  }

  static void axpy(RVec& acc, const RingElem& f, const RVec& x) {
    for (std::size_t s = 0; s < x.size(); ++s)
      if (!x[s].is_zero()) acc[s] += f * x[s];
  }

  // Koszul formula on frame elements.
  AForm d_weighted(const AForm& w, int weight) const {
    const int r = a_.rank();
    AForm out(r, w.rank_v());
    for (int k : degrees(w)) {
      for (Mask jm : masks_of_degree(r, k + 1)) {
        auto idx = mask_indices(jm);
        RVec acc(w.width(), a_.zero());
        for (int i = 0; i <= k; ++i) {
          auto it = w.terms().find(jm & ~bit(idx[i]));
          if (it == w.terms().end()) continue;
          axpy(acc, RingElem((i & 1) ? -1 : 1), frame_act(idx[i], it->second, weight));
        }
        for (int p = 0; p <= k; ++p) {
          for (int q = p + 1; q <= k; ++q) {
            Mask rest = jm & ~bit(idx[p]) & ~bit(idx[q]);
            for (const auto& [l, c] : a_.frame_bracket(idx[p], idx[q])) {
              if (rest & bit(l)) continue;
              auto it = w.terms().find(rest | bit(l));
              if (it == w.terms().end()) continue;
              int parity = p + q + count_below(rest, l);
              axpy(acc, (parity & 1) ? -c : c, it->second);
            }
          }
        }
        out.add(jm, acc);
      }
    }
    return out;
  }

  // (L_X w)(Y_1..Y_k) = L_X(w(Y..)) - sum_m w(.., [X, Y_m], ..).
  AForm lie_weighted(std::span<const RingElem> x, const AForm& w, int weight) const {
    const int r = a_.rank();
    AForm out(r, w.rank_v());
    std::vector<RVec> x_with_frame(r);
    for (int j = 0; j < r; ++j) x_with_frame[j] = a_.bracket(x, a_.frame(j));
    for (int k : degrees(w)) {
      for (Mask jm : masks_of_degree(r, k)) {
        RVec acc(w.width(), a_.zero());
        auto it = w.terms().find(jm);
        if (it != w.terms().end()) {
          for (int i = 0; i < r; ++i)
            if (!x[i].is_zero()) axpy(acc, x[i], frame_act(i, it->second, weight));
        }
        auto idx = mask_indices(jm);
        for (int p = 0; p < k; ++p) {
          Mask rest = jm & ~bit(idx[p]);
          const RVec& br = x_with_frame[idx[p]];
          for (int l = 0; l < r; ++l) {
            if (br[l].is_zero() || (rest & bit(l))) continue;
            auto jt = w.terms().find(rest | bit(l));
            if (jt == w.terms().end()) continue;
            int q = count_below(rest, l);
            int parity = (p > q ? p - q : q - p) + 1;
            axpy(acc, (parity & 1) ? -br[l] : br[l], jt->second);
          }
        }
        out.add(jm, acc);
      }
    }
    return out;
  }

  const LieAlgebroid& a_;
  const AModule& v_;
};

// ---------------------------------------------------------------------------

inline ValidationReport validate_algebroid(const LieAlgebroid& a) {
  const int r = a.rank();
  ValidationReport rep;

  Check anti{"antisymmetry"};
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j)
      for (int k = 0; k < r; ++k) {
        ++anti.checked;
        RingElem s = a.structure(i, j, k) + a.structure(j, i, k);
        if (i == j) s = a.structure(i, i, k);
        if (!s.is_zero()) anti.fail(one_based({i, j, k}), s.str());
      }
  rep.checks.push_back(anti);

  Check hom{"anchor-homomorphism"};
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      ++hom.checked;
      for (int m = 0; m < a.num_coords(); ++m) {
        RingElem lhs(a.ring(), 0);
        for (const auto& [k, c] : a.frame_bracket(i, j)) lhs += c * a.anchor(k, m);
        RingElem rhs = a.anchor_apply(i, a.anchor(j, m)) - a.anchor_apply(j, a.anchor(i, m));
        RingElem diff = lhs - rhs;
        if (!diff.is_zero()) {
          hom.fail(one_based({i, j}), "d/d" + a.ring()->coords()[m] + ": " + diff.str());
          break;
        }
      }
    }
  rep.checks.push_back(hom);

  Check jac{"jacobi"};
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      for (int k = j + 1; k < r; ++k) {
        ++jac.checked;
        RVec ei = a.frame(i), ej = a.frame(j), ek = a.frame(k);
        RVec s = a.bracket(a.bracket(ei, ej), ek);
        RVec t = a.bracket(a.bracket(ej, ek), ei);
        RVec u = a.bracket(a.bracket(ek, ei), ej);
        RVec sum(r);
        for (int l = 0; l < r; ++l) sum[l] = s[l] + t[l] + u[l];
        if (!is_zero_vec(sum)) {
          std::string res;
          for (int l = 0; l < r; ++l)
            if (!sum[l].is_zero())
              res += (res.empty() ? "" : " + ") + ("(" + sum[l].str() + ")*e_" + std::to_string(l + 1));
          jac.fail(one_based({i, j, k}), res);
        }
      }
  rep.checks.push_back(jac);
  return rep;
}

/// Flatness: L_{e_i} L_{e_j} - L_{e_j} L_{e_i} - L_{[e_i,e_j]} vanishes on the frame of V.
inline ValidationReport validate_module(const LieAlgebroid& a, const AModule& v) {
  Cartan cart(a, v);
  ValidationReport rep;
  Check flat{"flatness"};
  const int r = a.rank();
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      for (int b = 0; b < v.rank_v(); ++b) {
        ++flat.checked;
        RVec ub(v.rank_v(), a.zero());
        ub[b] = RingElem(a.ring(), 1);
        RVec lhs = cart.frame_act(i, cart.frame_act(j, ub, 1), 1);
        RVec rhs = cart.frame_act(j, cart.frame_act(i, ub, 1), 1);
        RVec br = cart.act_on_v(a.bracket(a.frame(i), a.frame(j)), ub);
        std::string res;
        for (int c = 0; c < v.rank_v(); ++c) {
          RingElem diff = lhs[c] - rhs[c] - br[c];
          if (!diff.is_zero())
            res += (res.empty() ? "" : " + ") + ("(" + diff.str() + ")*u_" + std::to_string(c + 1));
        }
        if (!res.empty()) flat.fail(one_based({i, j, b}), res);
      }
  rep.checks.push_back(flat);
  return rep;
}

// ---------------------------------------------------------------------------

struct CohomologyResult {
  int degree = 0;
  int dim = 0;
  int cochain_dim = 0;
  int rank_in = 0;   // rank of d_{k-1}
  int rank_out = 0;  // rank of d_k
  std::vector<AForm> cocycles;
};

namespace detail {

// Columns indexed by (mask, slot) in lexicographic mask order.
inline QMatrix differential_matrix(const Cartan& cart, int rank_a, int rank_v, int k) {
  auto src = masks_of_degree(rank_a, k);
  auto dst = masks_of_degree(rank_a, k + 1);
  QMatrix m(dst.size() * rank_v, std::vector<Scalar>(src.size() * rank_v));
  for (std::size_t s = 0; s < src.size(); ++s) {
    for (int b = 0; b < rank_v; ++b) {
      AForm w(rank_a, rank_v);
      w.add(src[s], b, RingElem(cart.algebroid().ring(), 1));
      AForm dw = cart.d(w);
      for (std::size_t t = 0; t < dst.size(); ++t)
        for (int a = 0; a < rank_v; ++a) {
          auto c = dw.coeff(dst[t], a).constant_value();
          if (!c) throw std::invalid_argument("cohomology needs constant structure data");
          m[t * rank_v + a][s * rank_v + b] = *c;
        }
    }
  }
  return m;
}

}  // namespace detail

/// Chevalley-Eilenberg cohomology of a Lie algebra (a Lie algebroid over a
/// point) with coefficients in a module, exactly over the rationals.
inline CohomologyResult cohomology_point(const LieAlgebroid& g, const AModule& v, int k) {
  if (g.num_coords() != 0) throw std::invalid_argument("cohomology_point needs a point base");
  if (k < 0) throw std::out_of_range("cohomology degree must be non-negative");
  Cartan cart(g, v);
  const int r = g.rank();
  const int w = v.rank_v();
  CohomologyResult res;
  res.degree = k;
  auto basis = masks_of_degree(r, k);
  res.cochain_dim = static_cast<int>(basis.size()) * w;
  if (res.cochain_dim == 0) return res;
  QMatrix dk = detail::differential_matrix(cart, r, w, k);
  res.rank_out = dk.empty() ? 0 : rank(dk);
  QMatrix dprev;
  if (k > 0) {
    dprev = detail::differential_matrix(cart, r, w, k - 1);
    res.rank_in = rank(dprev);
  }
  res.dim = res.cochain_dim - res.rank_out - res.rank_in;

  // cocycles completing the image of d_{k-1}
  auto z = dk.empty() ? std::vector<std::vector<Scalar>>{} : kernel(dk, res.cochain_dim);
  if (dk.empty()) {
    for (int c = 0; c < res.cochain_dim; ++c) {
      std::vector<Scalar> e(res.cochain_dim);
      e[c] = 1;
      z.push_back(e);
    }
  }
  QMatrix span;
  if (k > 0) {
    for (std::size_t c = 0; c < dprev[0].size(); ++c) {
      std::vector<Scalar> col(res.cochain_dim);
      for (int row = 0; row < res.cochain_dim; ++row) col[row] = dprev[row][c];
      span.push_back(col);
    }
  }
  int current = span.empty() ? 0 : rank(span);
  for (const auto& vec : z) {
    span.push_back(vec);
    int next = rank(span);
    if (next == current) {
      span.pop_back();
      continue;
    }
    current = next;
    AForm rep(r, w);
    for (std::size_t s = 0; s < basis.size(); ++s)
      for (int b = 0; b < w; ++b)
        rep.add(basis[s], b, RingElem(g.ring(), vec[s * w + b]));
    res.cocycles.push_back(rep);
  }
  return res;
}

}  // namespace avc

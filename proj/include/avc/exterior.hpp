#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "avc/ring.hpp"

namespace avc {

/// Strictly increasing index set, one bit per frame index.
using Mask = std::uint32_t;
inline constexpr int kMaxRank = 16;

inline Mask bit(int i) { return Mask{1} << i; }
inline int mask_degree(Mask m) { return std::popcount(m); }
inline int lowest_index(Mask m) { return std::countr_zero(m); }

inline std::vector<int> mask_indices(Mask m) {
  std::vector<int> out;
  for (; m; m &= m - 1) out.push_back(lowest_index(m));
  return out;
}

inline Mask mask_from_indices(std::span<const int> idx) {
  Mask m = 0;
  int prev = -1;
  for (int i : idx) {
    if (i <= prev) throw std::invalid_argument("index set must be strictly increasing");
    if (i >= kMaxRank) throw std::out_of_range("frame index too large");
    m |= bit(i);
    prev = i;
  }
  return m;
}
inline Mask mask_of(std::initializer_list<int> idx) {
  return mask_from_indices(std::span<const int>(idx.begin(), idx.size()));
}

inline int count_below(Mask m, int i) { return std::popcount(m & (bit(i) - 1)); }
inline int count_above(Mask m, int i) { return std::popcount(m & ~((bit(i) << 1) - 1)); }

/// e_A ^ e_B = wedge_sign(A, B) e_{A|B}; zero when A and B overlap.
inline int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int n = 0;
  for (Mask r = b; r; r &= r - 1) n += count_above(a, lowest_index(r));
  return (n & 1) ? -1 : 1;
}

/// Sign of the permutation sorting idx, 0 on repeats.
inline int sort_sign(std::span<const int> idx) {
  int n = 0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      if (idx[a] == idx[b]) return 0;
      if (idx[a] > idx[b]) ++n;
    }
  return (n & 1) ? -1 : 1;
}

/// Lexicographic order on the increasing index sequences.
struct LexLess {
  bool operator()(Mask a, Mask b) const {
    while (a && b) {
      int la = lowest_index(a);
      int lb = lowest_index(b);
      if (la != lb) return la < lb;
      a &= a - 1;
      b &= b - 1;
    }
    return a == 0 && b != 0;
  }
};

/// All index sets of size k in {0..n-1}, lexicographically.
inline std::vector<Mask> masks_of_degree(int n, int k) {
  std::vector<Mask> out;
  if (k < 0 || k > n) return out;
  for (Mask m = 0; m < (Mask{1} << n); ++m)
    if (mask_degree(m) == k) out.push_back(m);
  std::sort(out.begin(), out.end(), LexLess{});
  return out;
}

inline std::string mask_str(Mask m) {
  std::string s;
  for (int i : mask_indices(m)) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
  return s;
}

// ---------------------------------------------------------------------------

using RVec = std::vector<RingElem>;

inline bool is_zero_vec(const RVec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

/// V-valued form on A. rank_v == 0 marks a scalar form (one coefficient slot).
class AForm {
 public:
  using Coeff = RVec;
  using TermMap = std::map<Mask, Coeff, LexLess>;

  AForm() = default;
  AForm(int rank_a, int rank_v) : rank_a_(rank_a), rank_v_(rank_v) {
    if (rank_a < 0 || rank_a > kMaxRank) throw std::out_of_range("rank of A");
    if (rank_v < 0) throw std::out_of_range("rank of V");
  }
  static AForm scalar(int rank_a) { return AForm(rank_a, 0); }

  int rank_a() const { return rank_a_; }
  int rank_v() const { return rank_v_; }
  int width() const { return rank_v_ == 0 ? 1 : rank_v_; }
  bool is_valued() const { return rank_v_ > 0; }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::optional<int> degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = mask_degree(terms_.begin()->first);
    for (const auto& [m, c] : terms_)
      if (mask_degree(m) != d) return std::nullopt;
    return d;
  }
  bool is_homogeneous(int k) const {
    for (const auto& [m, c] : terms_)
      if (mask_degree(m) != k) return false;
    return true;
  }

  Coeff coeff(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coeff(width()) : it->second;
  }
  RingElem coeff(Mask m, int slot) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? RingElem() : it->second[slot];
  }

  void add(Mask m, const Coeff& c) {
    check_mask(m);
    if (static_cast<int>(c.size()) != width())
      throw std::invalid_argument("coefficient vector has wrong length");
    if (is_zero_vec(c)) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
      for (int s = 0; s < width(); ++s) it->second[s] += c[s];
      if (is_zero_vec(it->second)) terms_.erase(it);
    }
  }
  void add(Mask m, int slot, const RingElem& f) {
    if (f.is_zero()) return;
    Coeff c(width());
    c.at(slot) = f;
    add(m, c);
  }

  AForm& operator+=(const AForm& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  AForm& operator-=(const AForm& o) { return *this += -o; }
  AForm operator-() const {
    AForm r = *this;
    for (auto& [m, c] : r.terms_)
      for (auto& x : c) x = -x;
    return r;
  }
  friend AForm operator+(AForm a, const AForm& b) { return a += b; }
  friend AForm operator-(AForm a, const AForm& b) { return a -= b; }
  friend AForm operator*(const RingElem& f, const AForm& w) {
    AForm r(w.rank_a_, w.rank_v_);
    if (f.is_zero()) return r;
    for (const auto& [m, c] : w.terms_) {
      Coeff k(c.size());
      for (std::size_t s = 0; s < c.size(); ++s) k[s] = f * c[s];
      r.add(m, k);
    }
    return r;
  }
  friend bool operator==(const AForm& a, const AForm& b) {
    if (a.rank_a_ != b.rank_a_ || a.rank_v_ != b.rank_v_) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    auto it = b.terms_.begin();
    for (const auto& [m, c] : a.terms_) {
      if (it->first != m || it->second != c) return false;
      ++it;
    }
    return true;
  }

  AForm conj() const {
    AForm r = *this;
    for (auto& [m, c] : r.terms_)
      for (auto& x : c) x = x.conj();
    return r;
  }

  AForm homogeneous_part(int k) const {
    AForm r(rank_a_, rank_v_);
    for (const auto& [m, c] : terms_)
      if (mask_degree(m) == k) r.terms_.emplace(m, c);
    return r;
  }

  void check_compatible(const AForm& o) const {
    if (rank_a_ != o.rank_a_ || rank_v_ != o.rank_v_)
      throw std::invalid_argument("form ranks do not match");
  }

 private:
  void check_mask(Mask m) const {
    if (m >> rank_a_) throw std::out_of_range("form index exceeds rank of A");
  }

  int rank_a_ = 0;
  int rank_v_ = 0;
  TermMap terms_;
};

inline std::string to_string(const AForm& w) {
  if (w.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : w.terms()) {
    if (!s.empty()) s += " + ";
    s += "[";
    for (std::size_t k = 0; k < c.size(); ++k) s += (k ? ", " : "") + c[k].str();
    s += "]*e^{" + mask_str(m) + "}";
  }
  return s;
}

/// Exterior product; at most one factor may be V-valued.
inline AForm wedge(const AForm& a, const AForm& b) {
  if (a.rank_a() != b.rank_a()) throw std::invalid_argument("form ranks do not match");
  if (a.is_valued() && b.is_valued())
    throw std::invalid_argument("cannot wedge two V-valued forms");
  AForm r(a.rank_a(), a.is_valued() ? a.rank_v() : b.rank_v());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      AForm::Coeff c(r.width());
      for (int k = 0; k < r.width(); ++k) {
        const RingElem& x = a.is_valued() ? ca[k] : ca[0];
        const RingElem& y = b.is_valued() ? cb[k] : cb[0];
        c[k] = s > 0 ? x * y : -(x * y);
      }
      r.add(ma | mb, c);
    }
  }
  return r;
}

/// Interior product with a section given by frame components.
inline AForm contract(std::span<const RingElem> x, const AForm& w) {
  if (static_cast<int>(x.size()) != w.rank_a())
    throw std::invalid_argument("section has wrong rank");
  AForm r(w.rank_a(), w.rank_v());
  for (const auto& [m, c] : w.terms()) {
    for (Mask rest = m; rest; rest &= rest - 1) {
      int i = lowest_index(rest);
      if (x[i].is_zero()) continue;
      RingElem f = (count_below(m, i) & 1) ? -x[i] : x[i];
      AForm::Coeff k(c.size());
      for (std::size_t s = 0; s < c.size(); ++s) k[s] = f * c[s];
      r.add(m & ~bit(i), k);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

/// Element of the Laurent ring generated over the functions by a local frame
/// of the line bundle V: a finite sum of (grade, function) pairs.
class GradedCoeff {
 public:
  GradedCoeff() = default;
  GradedCoeff(int grade, const RingElem& f) { add(grade, f); }
  GradedCoeff(const RingElem& f) { add(0, f); }  // NOLINT(google-explicit-constructor)

  const std::map<int, RingElem>& parts() const { return parts_; }
  bool is_zero() const { return parts_.empty(); }
  RingElem part(int grade) const {
    auto it = parts_.find(grade);
    return it == parts_.end() ? RingElem() : it->second;
  }
  std::optional<int> grade() const {
    if (parts_.size() != 1) return std::nullopt;
    return parts_.begin()->first;
  }

  void add(int grade, const RingElem& f) {
    if (f.is_zero()) return;
    auto [it, fresh] = parts_.try_emplace(grade, f);
    if (!fresh) {
      it->second += f;
      if (it->second.is_zero()) parts_.erase(it);
    }
  }

  GradedCoeff& operator+=(const GradedCoeff& o) {
    for (const auto& [g, f] : o.parts_) add(g, f);
    return *this;
  }
  GradedCoeff& operator-=(const GradedCoeff& o) {
    for (const auto& [g, f] : o.parts_) add(g, -f);
    return *this;
  }
  GradedCoeff operator-() const {
    GradedCoeff r = *this;
    for (auto& [g, f] : r.parts_) f = -f;
    return r;
  }
  friend GradedCoeff operator+(GradedCoeff a, const GradedCoeff& b) { return a += b; }
  friend GradedCoeff operator-(GradedCoeff a, const GradedCoeff& b) { return a -= b; }
  friend GradedCoeff operator*(const GradedCoeff& a, const GradedCoeff& b) {
    GradedCoeff r;
    for (const auto& [ga, fa] : a.parts_)
      for (const auto& [gb, fb] : b.parts_) r.add(ga + gb, fa * fb);
    return r;
  }
  friend bool operator==(const GradedCoeff& a, const GradedCoeff& b) {
    return a.parts_ == b.parts_;
  }

  GradedCoeff conj() const {
    GradedCoeff r = *this;
    for (auto& [g, f] : r.parts_) f = f.conj();
    return r;
  }

  std::string str() const {
    if (parts_.empty()) return "0";
    std::string s;
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
      if (!s.empty()) s += " + ";
      if (it->first == 0) {
        s += "(" + it->second.str() + ")";
      } else {
        s += "u^" + std::to_string(it->first) + "*(" + it->second.str() + ")";
      }
    }
    return s;
  }

 private:
  std::map<int, RingElem> parts_;
};

/// Graded-coefficient multivectors (Up) or forms (Down) on A.
template <bool Up>
class GradedTensor {
 public:
  using TermMap = std::map<Mask, GradedCoeff, LexLess>;

  GradedTensor() = default;
  explicit GradedTensor(int rank_a) : rank_a_(rank_a) {
    if (rank_a < 0 || rank_a > kMaxRank) throw std::out_of_range("rank of A");
  }

  int rank_a() const { return rank_a_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::optional<int> degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = mask_degree(terms_.begin()->first);
    for (const auto& [m, c] : terms_)
      if (mask_degree(m) != d) return std::nullopt;
    return d;
  }
  bool is_homogeneous(int k) const {
    for (const auto& [m, c] : terms_)
      if (mask_degree(m) != k) return false;
    return true;
  }

  GradedCoeff coeff(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? GradedCoeff() : it->second;
  }

  void add(Mask m, const GradedCoeff& c) {
    if (m >> rank_a_) throw std::out_of_range("index exceeds rank of A");
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  void add(Mask m, int grade, const RingElem& f) { add(m, GradedCoeff(grade, f)); }

  GradedTensor& operator+=(const GradedTensor& o) {
    adopt_rank(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  GradedTensor& operator-=(const GradedTensor& o) {
    adopt_rank(o);
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  GradedTensor operator-() const {
    GradedTensor r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  friend GradedTensor operator+(GradedTensor a, const GradedTensor& b) { return a += b; }
  friend GradedTensor operator-(GradedTensor a, const GradedTensor& b) { return a -= b; }
  friend GradedTensor operator*(const GradedCoeff& f, const GradedTensor& t) {
    GradedTensor r(t.rank_a_);
    if (f.is_zero()) return r;
    for (const auto& [m, c] : t.terms_) r.add(m, f * c);
    return r;
  }
  friend GradedTensor operator*(const RingElem& f, const GradedTensor& t) {
    return GradedCoeff(f) * t;
  }
  friend bool operator==(const GradedTensor& a, const GradedTensor& b) {
    if (a.terms_.empty() && b.terms_.empty()) return true;
    return a.rank_a_ == b.rank_a_ && a.terms_ == b.terms_;
  }

  GradedTensor conj() const {
    GradedTensor r = *this;
    for (auto& [m, c] : r.terms_) c = c.conj();
    return r;
  }
  GradedTensor homogeneous_part(int k) const {
    GradedTensor r(rank_a_);
    for (const auto& [m, c] : terms_)
      if (mask_degree(m) == k) r.terms_.emplace(m, c);
    return r;
  }

  void adopt_rank(const GradedTensor& o) {
    if (rank_a_ == o.rank_a_) return;
    if (terms_.empty() && rank_a_ == 0) {
      rank_a_ = o.rank_a_;
      return;
    }
    if (o.terms_.empty() && o.rank_a_ == 0) return;
    throw std::invalid_argument("ranks of A do not match");
  }

 private:
  int rank_a_ = 0;
  TermMap terms_;
};

using Multivector = GradedTensor<true>;
using GradedForm = GradedTensor<false>;

template <bool Up>
std::string to_string(const GradedTensor<Up>& t) {
  if (t.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : t.terms()) {
    if (!s.empty()) s += " + ";
    s += c.str() + (Up ? "*e_{" : "*e^{") + mask_str(m) + "}";
  }
  return s;
}

template <bool Up>
GradedTensor<Up> wedge(const GradedTensor<Up>& a, const GradedTensor<Up>& b) {
  GradedTensor<Up> r(a.rank_a() ? a.rank_a() : b.rank_a());
  if (a.rank_a() && b.rank_a() && a.rank_a() != b.rank_a())
    throw std::invalid_argument("ranks of A do not match");
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      GradedCoeff c = ca * cb;
      r.add(ma | mb, s > 0 ? c : -c);
    }
  }
  return r;
}

/// Grade-0 degree-1 multivector with the given frame components.
inline Multivector vector_field(std::span<const RingElem> comps) {
  Multivector r(static_cast<int>(comps.size()));
  for (std::size_t i = 0; i < comps.size(); ++i) r.add(bit(static_cast<int>(i)), 0, comps[i]);
  return r;
}
inline Multivector vector_field(const RVec& comps) {
  return vector_field(std::span<const RingElem>(comps));
}

inline RVec vector_components(const Multivector& x) {
  RVec out(x.rank_a());
  for (const auto& [m, c] : x.terms()) {
    if (mask_degree(m) != 1) throw std::invalid_argument("expected a degree-1 multivector");
    for (const auto& [g, f] : c.parts())
      if (g != 0) throw std::invalid_argument("expected grade-0 coefficients");
    out[lowest_index(m)] = c.part(0);
  }
  return out;
}

inline Multivector frame_multivector(int rank_a, Mask m, const GradedCoeff& c = RingElem(1)) {
  Multivector r(rank_a);
  r.add(m, c);
  return r;
}

inline AForm contract(const Multivector& x, const AForm& w) {
  return contract(vector_components(x), w);
}

/// Scalar forms sit in grade 0; forms valued in a line bundle V sit in grade 1.
inline GradedForm to_graded(const AForm& w) {
  if (w.rank_v() > 1) throw std::invalid_argument("grading needs V of rank 1");
  int g = w.is_valued() ? 1 : 0;
  GradedForm r(w.rank_a());
  for (const auto& [m, c] : w.terms()) r.add(m, g, c[0]);
  return r;
}

inline AForm from_graded(const GradedForm& w, int rank_v) {
  if (rank_v > 1) throw std::invalid_argument("grading needs V of rank 1");
  int g = rank_v == 1 ? 1 : 0;
  AForm r(w.rank_a(), rank_v);
  for (const auto& [m, c] : w.terms()) {
    for (const auto& [grade, f] : c.parts())
      if (grade != g) throw std::invalid_argument("form has a coefficient of unexpected grade");
    r.add(m, 0, c.part(g));
  }
  return r;
}

/// Right contraction, dual to right multiplication:
/// <xi ^ eta, P> = <xi, breve_contract(eta, P)>.
inline Multivector breve_contract(const GradedForm& a, const Multivector& p) {
  Multivector r(p.rank_a());
  for (const auto& [mk, ck] : a.terms()) {
    for (const auto& [mj, cj] : p.terms()) {
      if ((mk & mj) != mk) continue;
      Mask rest = mj & ~mk;
      int s = wedge_sign(rest, mk);
      GradedCoeff c = ck * cj;
      r.add(rest, s > 0 ? c : -c);
    }
  }
  return r;
}
inline Multivector breve_contract(const AForm& a, const Multivector& p) {
  return breve_contract(to_graded(a), p);
}

/// Left contraction by a multivector: <xi, P ^ Q> = <interior(P, xi), Q>.
inline GradedForm interior(const Multivector& p, const GradedForm& w) {
  GradedForm r(w.rank_a());
  for (const auto& [mk, ck] : p.terms()) {
    for (const auto& [mj, cj] : w.terms()) {
      if ((mk & mj) != mk) continue;
      Mask rest = mj & ~mk;
      int s = wedge_sign(mk, rest);
      GradedCoeff c = ck * cj;
      r.add(rest, s > 0 ? c : -c);
    }
  }
  return r;
}

/// Determinant pairing; pieces of different degree pair to zero.
inline GradedCoeff pair_eval(const GradedForm& w, const Multivector& p) {
  GradedCoeff r;
  for (const auto& [m, c] : w.terms()) {
    auto it = p.terms().find(m);
    if (it != p.terms().end()) r += c * it->second;
  }
  return r;
}
inline GradedCoeff pair_eval(const AForm& w, const Multivector& p) {
  return pair_eval(to_graded(w), p);
}

}  // namespace avc

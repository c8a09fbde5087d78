#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "avc/scalar.hpp"

namespace avc {

inline constexpr int kMaxVars = 12;
using Exponents = std::array<std::int16_t, kMaxVars>;

enum class ScalarMode { Rational, Gaussian };

/// An exponential generator E with constant logarithmic derivatives:
/// dE/dx_j = row[j] * E.
struct ExpGenerator {
  std::string name;
  std::vector<mpq_class> row;
};

class RingSignature {
 public:
  explicit RingSignature(std::vector<std::string> coords,
                         std::vector<ExpGenerator> exps = {},
                         ScalarMode mode = ScalarMode::Rational)
      : coords_(std::move(coords)), exps_(std::move(exps)), mode_(mode) {
    if (coords_.size() + exps_.size() > static_cast<std::size_t>(kMaxVars))
      throw std::invalid_argument("too many ring variables");
    std::vector<std::string> names = coords_;
    for (const auto& e : exps_) {
      if (e.row.size() != coords_.size())
        throw std::invalid_argument("derivative row of " + e.name +
                                    " has wrong length");
      names.push_back(e.name);
    }
    for (const auto& n : names) {
      if (n.empty() || n == "i" ||
          !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_'))
        throw std::invalid_argument("invalid variable name '" + n + "'");
    }
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("duplicate variable name");
  }

  int num_coords() const { return static_cast<int>(coords_.size()); }
  int num_exps() const { return static_cast<int>(exps_.size()); }
  int num_vars() const { return num_coords() + num_exps(); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<ExpGenerator>& exps() const { return exps_; }
  ScalarMode mode() const { return mode_; }

  const std::string& var_name(int v) const {
    return v < num_coords() ? coords_[v] : exps_[v - num_coords()].name;
  }
  std::optional<int> var_index(std::string_view name) const {
    for (int v = 0; v < num_vars(); ++v)
      if (var_name(v) == name) return v;
    return std::nullopt;
  }

  friend bool operator==(const RingSignature& a, const RingSignature& b) {
    if (a.coords_ != b.coords_ || a.mode_ != b.mode_ ||
        a.exps_.size() != b.exps_.size())
      return false;
    for (std::size_t k = 0; k < a.exps_.size(); ++k)
      if (a.exps_[k].name != b.exps_[k].name || a.exps_[k].row != b.exps_[k].row)
        return false;
    return true;
  }

 private:
  std::vector<std::string> coords_;
  std::vector<ExpGenerator> exps_;
  ScalarMode mode_;
};

using RingPtr = std::shared_ptr<const RingSignature>;

inline RingPtr make_ring(std::vector<std::string> coords,
                         std::vector<ExpGenerator> exps = {},
                         ScalarMode mode = ScalarMode::Rational) {
  return std::make_shared<const RingSignature>(std::move(coords), std::move(exps), mode);
}

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Sparse polynomial in the coordinates, Laurent in the exponential
/// generators, with Gaussian rational coefficients. Terms are kept sorted by
/// exponent vector with no zero coefficients, so equality is structural.
///
/// A constant may carry no signature; it adopts the signature of whatever it
/// is combined with.
class RingElem {
 public:
  struct Term {
    Exponents exp{};
    Scalar coeff;
  };

  RingElem() = default;
  RingElem(Scalar c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) terms_.push_back({Exponents{}, std::move(c)});
  }
  RingElem(long c) : RingElem(Scalar(c)) {}  // NOLINT(google-explicit-constructor)
  RingElem(int c) : RingElem(Scalar(static_cast<long>(c))) {}  // NOLINT
  RingElem(RingPtr ring, Scalar c) : RingElem(std::move(c)) { ring_ = std::move(ring); }

  static RingElem monomial(RingPtr ring, const Exponents& e, Scalar c = 1) {
    RingElem r;
    r.ring_ = std::move(ring);
    if (!c.is_zero()) r.terms_.push_back({e, std::move(c)});
    return r;
  }
  static RingElem variable(const RingPtr& ring, std::string_view name) {
    auto v = ring->var_index(name);
    if (!v) throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
    Exponents e{};
    e[*v] = 1;
    return monomial(ring, e);
  }
  static RingElem variable(const RingPtr& ring, int v) {
    Exponents e{};
    e[v] = 1;
    return monomial(ring, e);
  }

  const RingPtr& ring() const { return ring_; }
  RingElem with_ring(RingPtr ring) const {
    RingElem r = *this;
    r.ring_ = std::move(ring);
    return r;
  }

  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exp == Exponents{});
  }
  std::optional<Scalar> constant_value() const {
    if (terms_.empty()) return Scalar(0);
    if (is_constant()) return terms_[0].coeff;
    return std::nullopt;
  }
  /// A single term with no coordinate factor: a nonzero constant times a
  /// Laurent monomial in the exponential generators.
  bool is_unit() const {
    if (terms_.size() != 1) return false;
    int nc = ring_ ? ring_->num_coords() : 0;
    for (int v = 0; v < nc; ++v)
      if (terms_[0].exp[v] != 0) return false;
    return true;
  }
  bool is_real() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Term& t) { return t.coeff.is_real(); });
  }
  int total_degree() const {
    int nc = ring_ ? ring_->num_coords() : 0;
    int best = 0;
    for (const auto& t : terms_) {
      int d = 0;
      for (int v = 0; v < nc; ++v) d += t.exp[v];
      best = std::max(best, d);
    }
    return best;
  }
  const Term& leading() const { return terms_.back(); }

  RingElem conj() const {
    RingElem r = *this;
    for (auto& t : r.terms_) t.coeff = t.coeff.conj();
    return r;
  }

  RingElem operator-() const {
    RingElem r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }
  RingElem& operator+=(const RingElem& o) { return *this = combine(*this, o, false); }
  RingElem& operator-=(const RingElem& o) { return *this = combine(*this, o, true); }
  RingElem& operator*=(const RingElem& o) { return *this = multiply(*this, o); }
  friend RingElem operator+(const RingElem& a, const RingElem& b) { return combine(a, b, false); }
  friend RingElem operator-(const RingElem& a, const RingElem& b) { return combine(a, b, true); }
  friend RingElem operator*(const RingElem& a, const RingElem& b) { return multiply(a, b); }
  friend bool operator==(const RingElem& a, const RingElem& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    if (!a.terms_.empty()) merge_rings(a.ring_, b.ring_);
    for (std::size_t k = 0; k < a.terms_.size(); ++k)
      if (a.terms_[k].exp != b.terms_[k].exp || !(a.terms_[k].coeff == b.terms_[k].coeff))
        return false;
    return true;
  }

  RingElem scaled(const Scalar& c) const {
    if (c.is_zero()) return RingElem(ring_, 0);
    RingElem r = *this;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
  }

  /// Multiply by x^e (e may be negative only in exponential slots).
  RingElem shifted(const Exponents& e) const {
    RingElem r = *this;
    for (auto& t : r.terms_)
      for (int v = 0; v < kMaxVars; ++v) t.exp[v] = static_cast<std::int16_t>(t.exp[v] + e[v]);
    return r;
  }

  std::string str() const;

  static RingPtr merge_rings(const RingPtr& a, const RingPtr& b) {
    if (!a) return b;
    if (!b || a == b) return a;
    if (*a == *b) return a;
    throw std::invalid_argument("ring signature mismatch");
  }

 private:
  static bool exp_less(const Exponents& a, const Exponents& b) { return a < b; }

  static RingElem combine(const RingElem& a, const RingElem& b, bool subtract) {
    RingElem r;
    r.ring_ = merge_rings(a.ring_, b.ring_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() ||
          (i < a.terms_.size() && exp_less(a.terms_[i].exp, b.terms_[j].exp))) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || exp_less(b.terms_[j].exp, a.terms_[i].exp)) {
        r.terms_.push_back(b.terms_[j++]);
        if (subtract) r.terms_.back().coeff = -r.terms_.back().coeff;
      } else {
        Scalar c = subtract ? a.terms_[i].coeff - b.terms_[j].coeff
                            : a.terms_[i].coeff + b.terms_[j].coeff;
        if (!c.is_zero()) r.terms_.push_back({a.terms_[i].exp, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  static RingElem multiply(const RingElem& a, const RingElem& b) {
    RingElem r;
    r.ring_ = merge_rings(a.ring_, b.ring_);
    if (a.terms_.empty() || b.terms_.empty()) return r;
    std::vector<Term> raw;
    raw.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) {
        Term p;
        for (int v = 0; v < kMaxVars; ++v)
          p.exp[v] = static_cast<std::int16_t>(s.exp[v] + t.exp[v]);
        p.coeff = s.coeff * t.coeff;
        raw.push_back(std::move(p));
      }
    }
    std::sort(raw.begin(), raw.end(),
              [](const Term& x, const Term& y) { return exp_less(x.exp, y.exp); });
    for (auto& t : raw) {
      if (!r.terms_.empty() && r.terms_.back().exp == t.exp) {
        r.terms_.back().coeff += t.coeff;
        if (r.terms_.back().coeff.is_zero()) r.terms_.pop_back();
      } else if (!t.coeff.is_zero()) {
        r.terms_.push_back(std::move(t));
      }
    }
    return r;
  }

  friend RingElem partial(const RingElem& f, int coord);
  friend std::optional<RingElem> exact_quotient(const RingElem& f, const RingElem& g);

  RingPtr ring_;
  std::vector<Term> terms_;
};

/// d f / d x_coord, exponential generators included.
inline RingElem partial(const RingElem& f, int coord) {
  if (f.is_zero() || !f.ring_) return RingElem(f.ring_, 0);
  const auto& sig = *f.ring_;
  if (coord < 0 || coord >= sig.num_coords()) throw std::out_of_range("coordinate index");
  const int nc = sig.num_coords();
  std::vector<RingElem::Term> raw;
  for (const auto& t : f.terms_) {
    if (t.exp[coord] != 0) {
      RingElem::Term p{t.exp, t.coeff * Scalar(static_cast<long>(t.exp[coord]))};
      --p.exp[coord];
      raw.push_back(std::move(p));
    }
    mpq_class log_rate = 0;
    for (int l = 0; l < sig.num_exps(); ++l)
      if (t.exp[nc + l] != 0) log_rate += sig.exps()[l].row[coord] * t.exp[nc + l];
    if (sgn(log_rate) != 0) raw.push_back({t.exp, t.coeff * Scalar(log_rate)});
  }
  RingElem r(f.ring_, 0);
  for (auto& t : raw) r += RingElem::monomial(f.ring_, t.exp, t.coeff);
  return r;
}

/// f / g when g divides f in the Laurent polynomial ring, otherwise nullopt.
inline std::optional<RingElem> exact_quotient(const RingElem& f, const RingElem& g) {
  if (g.is_zero()) throw std::domain_error("division by zero ring element");
  RingPtr ring = RingElem::merge_rings(f.ring_, g.ring_);
  if (f.is_zero()) return RingElem(ring, 0);
  const int nc = ring ? ring->num_coords() : 0;
  const int nv = ring ? ring->num_vars() : 0;
  // clear negative and common exponential powers; those factors are units
  auto low_exps = [&](const RingElem& p) {
    Exponents lo{};
    for (int v = nc; v < nv; ++v) {
      int m = p.terms_[0].exp[v];
      for (const auto& t : p.terms_) m = std::min<int>(m, t.exp[v]);
      lo[v] = static_cast<std::int16_t>(-m);
    }
    return lo;
  };
  Exponents fs = low_exps(f);
  Exponents gs = low_exps(g);
  RingElem p = f.shifted(fs).with_ring(ring);
  RingElem gn = g.shifted(gs).with_ring(ring);
  const auto& lt = gn.leading();
  RingElem q(ring, 0);
  while (!p.is_zero()) {
    const auto& lp = p.leading();
    Exponents m{};
    for (int v = 0; v < kMaxVars; ++v) {
      int d = lp.exp[v] - lt.exp[v];
      if (d < 0) return std::nullopt;
      m[v] = static_cast<std::int16_t>(d);
    }
    RingElem step = RingElem::monomial(ring, m, lp.coeff / lt.coeff);
    q += step;
    p -= step * gn;
  }
  Exponents back{};
  for (int v = nc; v < nv; ++v) back[v] = static_cast<std::int16_t>(gs[v] - fs[v]);
  return q.shifted(back);
}

inline bool divides(const RingElem& g, const RingElem& f) {
  return exact_quotient(f, g).has_value();
}

inline RingElem pow(const RingElem& base, int n) {
  if (n < 0) throw std::domain_error("negative power of a ring element");
  RingElem r(base.ring(), 1);
  for (int k = 0; k < n; ++k) r *= base;
  return r;
}

inline std::string RingElem::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    std::string factors;
    for (int v = 0; v < kMaxVars; ++v) {
      if (it->exp[v] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += ring_ ? ring_->var_name(v) : "?";
      if (it->exp[v] != 1) factors += "^" + std::to_string(it->exp[v]);
    }
    std::string term;
    if (factors.empty()) {
      term = it->coeff.str();
    } else if (it->coeff.is_one()) {
      term = factors;
    } else if (it->coeff == Scalar(-1)) {
      term = "-" + factors;
    } else {
      term = it->coeff.str() + "*" + factors;
    }
    if (out.empty()) {
      out = term;
    } else if (term[0] == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out;
}

namespace detail {

class ExprParser {
 public:
  ExprParser(const RingPtr& ring, std::string_view text) : ring_(ring), text_(text) {}

  RingElem parse() {
    RingElem r = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RingElem expr() {
    RingElem r = term();
    for (;;) {
      if (accept('+')) {
        r += term();
      } else if (accept('-')) {
        r -= term();
      } else {
        return r;
      }
    }
  }

  RingElem term() {
    RingElem r = unary();
    for (;;) {
      if (accept('*')) {
        r *= unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        RingElem d = unary();
        auto c = d.constant_value();
        if (!c || c->is_zero()) throw ParseError("divisor must be a nonzero constant", at);
        r = r.scaled(Scalar(1) / *c);
      } else {
        return r;
      }
    }
  }

  RingElem unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RingElem power() {
    std::size_t at = (skip_ws(), pos_);
    RingElem b = atom();
    if (!accept('^')) return b;
    bool neg = false;
    if (accept('-')) {
      neg = true;
    } else {
      accept('+');
    }
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    long n = std::stol(std::string(text_.substr(start, pos_ - start)));
    if (n > 1000) throw ParseError("exponent too large", start);
    if (!neg) return pow(b, static_cast<int>(n));
    if (!b.is_unit()) throw ParseError("negative power of a non-unit", at);
    // b = c * E^k, so b^-1 = c^-1 * E^-k
    const auto& t = b.terms()[0];
    Exponents inv{};
    for (int v = 0; v < kMaxVars; ++v) inv[v] = static_cast<std::int16_t>(-t.exp[v]);
    RingElem one_over = RingElem::monomial(ring_, inv, Scalar(1) / t.coeff);
    return pow(one_over, static_cast<int>(n));
  }

  RingElem atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RingElem r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      mpz_class z(std::string(text_.substr(start, pos_ - start)));
      return RingElem(ring_, Scalar(mpq_class(z)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "i") {
        if (ring_ && ring_->mode() == ScalarMode::Rational)
          throw ParseError("imaginary unit in a rational ring", start);
        return RingElem(ring_, Scalar::imag_unit());
      }
      if (!ring_) throw ParseError("unknown variable '" + name + "'", start);
      auto v = ring_->var_index(name);
      if (!v) throw ParseError("unknown variable '" + name + "'", start);
      return RingElem::variable(ring_, *v);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  RingPtr ring_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse sums of terms such as "3/2*x^2*E^-1 - (1/2+i)*y".
inline RingElem parse_ring_elem(const RingPtr& ring, std::string_view text) {
  RingElem r = detail::ExprParser(ring, text).parse();
  return r.is_zero() ? RingElem(ring, 0) : r.with_ring(ring);
}

}  // namespace avc

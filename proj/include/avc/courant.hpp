#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "avc/algebroid.hpp"
#include "avc/exterior.hpp"
#include "avc/random.hpp"

namespace avc {

/// X + xi in the split picture A + (V x A*).
struct CourantSection {
  RVec x;
  AForm xi;

  friend bool operator==(const CourantSection& a, const CourantSection& b) {
    return a.x == b.x && a.xi == b.xi;
  }
  CourantSection& operator+=(const CourantSection& o) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += o.x[i];
    xi += o.xi;
    return *this;
  }
  CourantSection& operator-=(const CourantSection& o) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= o.x[i];
    xi -= o.xi;
    return *this;
  }
  friend CourantSection operator+(CourantSection a, const CourantSection& b) { return a += b; }
  friend CourantSection operator-(CourantSection a, const CourantSection& b) { return a -= b; }
  friend CourantSection operator*(const RingElem& f, const CourantSection& s) {
    CourantSection r{s.x, f * s.xi};
    for (auto& c : r.x) c = f * c;
    return r;
  }
  bool is_zero() const { return is_zero_vec(x) && xi.is_zero(); }
  CourantSection conj() const {
    CourantSection r{x, xi.conj()};
    for (auto& c : r.x) c = c.conj();
    return r;
  }
};

inline std::string to_string(const CourantSection& s) {
  std::string out = "X: [";
  for (std::size_t i = 0; i < s.x.size(); ++i) out += (i ? ", " : "") + s.x[i].str();
  return out + "], xi: " + to_string(s.xi);
}

class NotClosedError : public std::invalid_argument {
 public:
  explicit NotClosedError(const std::string& residual)
      : std::invalid_argument("H is not closed: dH = " + residual) {}
};

/// The algebroid A + (V x A*) with the bracket twisted by a V-valued 3-form.
class CourantPresentation {
 public:
  CourantPresentation(LieAlgebroid a, AModule v, AForm h, bool force = false)
      : a_(std::move(a)), v_(std::move(v)), h_(std::move(h)) {
    if (v_.rank_a() != a_.rank()) throw std::invalid_argument("module rank does not match A");
    if (h_.is_zero()) h_ = AForm(a_.rank(), v_.rank_v());
    if (h_.rank_a() != a_.rank() || h_.rank_v() != v_.rank_v())
      throw std::invalid_argument("H has the wrong ranks");
    if (!h_.is_homogeneous(3)) throw std::invalid_argument("H must be a 3-form");
    dh_ = cartan().d(h_);
    if (!dh_.is_zero() && !force) throw NotClosedError(to_string(dh_));
  }

  const LieAlgebroid& algebroid() const { return a_; }
  const AModule& module() const { return v_; }
  const AForm& h() const { return h_; }
  const AForm& dh() const { return dh_; }
  bool closed() const { return dh_.is_zero(); }
  Cartan cartan() const { return Cartan(a_, v_); }
  const RingPtr& ring() const { return a_.ring(); }

  int rank_a() const { return a_.rank(); }
  int rank_v() const { return v_.rank_v(); }
  int rank() const { return rank_a() * (1 + rank_v()); }

  CourantSection zero() const { return {a_.zero_section(), AForm(rank_a(), rank_v())}; }
  CourantSection section(const RVec& x) const { return {x, AForm(rank_a(), rank_v())}; }
  CourantSection section(const AForm& xi) const { return {a_.zero_section(), xi}; }

  /// Frame of the whole bundle: e_1..e_r, then u_b x e^i ordered by i, then b.
  CourantSection frame(int n) const {
    CourantSection s = zero();
    if (n < rank_a()) {
      s.x[n] = RingElem(ring(), 1);
      return s;
    }
    n -= rank_a();
    if (n >= rank_a() * rank_v()) throw std::out_of_range("frame index");
    s.xi.add(bit(n / rank_v()), n % rank_v(), RingElem(ring(), 1));
    return s;
  }

 private:
  LieAlgebroid a_;
  AModule v_;
  AForm h_;
  AForm dh_;
};

/// [X + xi, Y + eta] = [X, Y] + L_X eta - i_Y d xi + i_X i_Y H.
inline CourantSection courant_bracket(const CourantPresentation& c, const CourantSection& e1,
                                      const CourantSection& e2) {
  if (static_cast<int>(e1.x.size()) != c.rank_a() || static_cast<int>(e2.x.size()) != c.rank_a())
    throw std::invalid_argument("section rank mismatch");
  Cartan cart = c.cartan();
  CourantSection r{c.algebroid().bracket(e1.x, e2.x), AForm(c.rank_a(), c.rank_v())};
  r.xi += cart.lie(e1.x, e2.xi);
  r.xi -= contract(e2.x, cart.d(e1.xi));
  r.xi += contract(e1.x, contract(e2.x, c.h()));
  return r;
}

/// <X + xi, Y + eta> = i_X eta + i_Y xi, a section of V.
inline RVec pairing(const CourantPresentation& c, const CourantSection& e1,
                    const CourantSection& e2) {
  AForm s = contract(e1.x, e2.xi) + contract(e2.x, e1.xi);
  RVec out = s.coeff(0);
  for (auto& x : out) x = x.with_ring(c.ring());
  return out;
}

/// (i_X1 i_X2 i_X3 dH) embedded as a section of V x A*.
inline CourantSection jacobi_defect(const CourantPresentation& c, const CourantSection& e1,
                                    const CourantSection& e2, const CourantSection& e3) {
  return c.section(contract(e1.x, contract(e2.x, contract(e3.x, c.dh()))));
}

using SectionTriple = std::array<CourantSection, 3>;

/// Pseudorandom polynomial sections for the axiom checks.
inline std::vector<SectionTriple> random_triples(const CourantPresentation& c, int count,
                                                 std::uint64_t seed) {
  Sampler rng(seed);
  std::vector<SectionTriple> out;
  auto draw = [&] {
    return CourantSection{rng.vec(c.ring(), c.rank_a(), 2, 1),
                          rng.form(c.ring(), c.rank_a(), c.rank_v(), 1, 2, 1)};
  };
  for (int n = 0; n < count; ++n) out.push_back({draw(), draw(), draw()});
  return out;
}

struct AxiomReport {
  ValidationReport report;
  std::size_t frame_triples = 0;
  std::size_t random_triples = 0;
};

namespace detail {

inline std::string vec_str(const RVec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
  return s + "]";
}

}  // namespace detail

/// Axioms AV-1..AV-4 on every ordered frame triple and on the given samples.
/// "AV-1 defect" asserts that the Jacobiator equals i i i dH on each triple.
inline AxiomReport check_axioms(const CourantPresentation& c,
                                const std::vector<SectionTriple>& samples) {
  Cartan cart = c.cartan();
  Check av1("AV-1");
  Check defect("AV-1 defect");
  Check av2("AV-2");
  Check av3("AV-3");
  Check av4("AV-4");

  auto run = [&](const SectionTriple& t, std::vector<int> witness) {
    const auto& [e1, e2, e3] = t;
    CourantSection b23 = courant_bracket(c, e2, e3);
    CourantSection b12 = courant_bracket(c, e1, e2);
    CourantSection b13 = courant_bracket(c, e1, e3);
    CourantSection jac = courant_bracket(c, e1, b23) - courant_bracket(c, b12, e3) -
                         courant_bracket(c, e2, b13);
    ++av1.checked;
    if (!jac.is_zero()) av1.fail(witness, to_string(jac));
    ++defect.checked;
    CourantSection expect = jacobi_defect(c, e1, e2, e3);
    if (!(jac == expect)) defect.fail(witness, to_string(jac - expect));

    ++av2.checked;
    RVec anchor_side = c.algebroid().bracket(e1.x, e2.x);
    for (int i = 0; i < c.rank_a(); ++i) {
      if (!(b12.x[i] == anchor_side[i])) {
        av2.fail(witness, "component " + std::to_string(i + 1));
        break;
      }
    }

    ++av3.checked;
    for (const auto* e : {&e1, &e2, &e3}) {
      CourantSection self = courant_bracket(c, *e, *e);
      AForm half(c.rank_a(), c.rank_v());
      RVec p = pairing(c, *e, *e);
      for (int b = 0; b < c.rank_v(); ++b) half.add(0, b, p[b].scaled(Scalar::fraction(1, 2)));
      CourantSection d_half = c.section(cart.d(half));
      if (!(self == d_half)) {
        av3.fail(witness, to_string(self - d_half));
        break;
      }
    }

    ++av4.checked;
    RVec lhs = cart.act_on_v(e1.x, pairing(c, e2, e3));
    RVec r1 = pairing(c, b12, e3);
    RVec r2 = pairing(c, e2, b13);
    RVec diff(lhs.size());
    for (std::size_t b = 0; b < lhs.size(); ++b) diff[b] = lhs[b] - r1[b] - r2[b];
    if (!is_zero_vec(diff)) av4.fail(witness, detail::vec_str(diff));
  };

  AxiomReport out;
  const int n = c.rank();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        run({c.frame(i), c.frame(j), c.frame(k)}, one_based({i, j, k}));
        ++out.frame_triples;
      }
  for (std::size_t s = 0; s < samples.size(); ++s) {
    // random samples are reported as 0, sample number
    run(samples[s], {0, static_cast<int>(s) + 1});
    ++out.random_triples;
  }
  out.report.checks = {av1, defect, av2, av3, av4};
  return out;
}

/// Change of isotropic splitting by a V-valued 2-form: H' = H - d beta.
inline CourantPresentation change_splitting(const CourantPresentation& c, const AForm& beta) {
  if (!beta.is_homogeneous(2) || beta.rank_a() != c.rank_a() || beta.rank_v() != c.rank_v())
    throw std::invalid_argument("beta must be a V-valued 2-form");
  AForm h = c.h() - c.cartan().d(beta);
  return CourantPresentation(c.algebroid(), c.module(), h, !c.closed());
}

/// Sections in the new splitting mapped to the old one: X + xi -> X + xi + i_X beta.
inline CourantSection splitting_map(const AForm& beta, const CourantSection& e) {
  return {e.x, e.xi + contract(e.x, beta)};
}

/// A splitting given by its values on the frame of A: lambda(e_i) = e_i + l_i.
/// Returns phi = lambda - (1/2) j(gamma) with gamma(X, Y) = <lambda X, lambda Y>.
inline std::vector<CourantSection> isotropize(const CourantPresentation& c,
                                              const std::vector<CourantSection>& lambda) {
  const int r = c.rank_a();
  if (static_cast<int>(lambda.size()) != r)
    throw std::invalid_argument("splitting needs one value per frame element");
  for (int i = 0; i < r; ++i)
    if (lambda[i].x != c.frame(i).x)
      throw std::invalid_argument("splitting is not a section of the projection at e_" +
                                  std::to_string(i + 1));
  std::vector<CourantSection> phi = lambda;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      RVec g = pairing(c, lambda[i], lambda[j]);
      for (int b = 0; b < c.rank_v(); ++b)
        phi[i].xi.add(bit(j), b, -g[b].scaled(Scalar::fraction(1, 2)));
    }
  return phi;
}

/// The 3-form twisting the bracket in the splitting phi:
/// H(X, Y, Z) = <phi Z, [phi Y, phi X]>.
inline AForm splitting_curvature(const CourantPresentation& c,
                                 const std::vector<CourantSection>& phi) {
  const int r = c.rank_a();
  AForm h(r, c.rank_v());
  for (Mask m : masks_of_degree(r, 3)) {
    auto idx = mask_indices(m);
    RVec v = pairing(c, phi[idx[2]], courant_bracket(c, phi[idx[1]], phi[idx[0]]));
    h.add(m, v);
  }
  return h;
}

}  // namespace avc

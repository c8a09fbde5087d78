#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "avc/algebroid.hpp"
#include "avc/exterior.hpp"

namespace avc {

/// Schouten-Nijenhuis bracket on graded-coefficient multivectors, built from
/// the frame brackets, the action of A on coefficients, and the derivation rules.
class Schouten {
 public:
  explicit Schouten(const Cartan& cart) : cart_(cart) {}

  const Cartan& cartan() const { return cart_; }
  int rank() const { return cart_.algebroid().rank(); }

  /// [e_K, w] = sum_i (-1)^(|K| + i) (e_{k_i} w) e_{K minus k_i}, i counted from 1.
  Multivector frame_with_coeff(Mask k, const GradedCoeff& w) const {
    const auto& a = cart_.algebroid();
    Multivector r(rank());
    auto idx = mask_indices(k);
    const int p = static_cast<int>(idx.size());
    for (int i = 0; i < p; ++i) {
      GradedCoeff ew = cart_.act(a.frame(idx[i]), w);
      if (ew.is_zero()) continue;
      r.add(k & ~bit(idx[i]), ((p + i + 1) % 2) ? -ew : ew);
    }
    return r;
  }

  /// [e_K, e_J] = sum_(i,j) (-1)^(i+j) [e_{k_i}, e_{j_j}] ^ e_{K-k_i} ^ e_{J-j_j}.
  Multivector frame_bracket(Mask k, Mask j) const {
    const auto& a = cart_.algebroid();
    Multivector r(rank());
    auto ki = mask_indices(k);
    auto ji = mask_indices(j);
    for (std::size_t s = 0; s < ki.size(); ++s)
      for (std::size_t t = 0; t < ji.size(); ++t) {
        const auto& br = a.frame_bracket(ki[s], ji[t]);
        if (br.empty()) continue;
        Mask rest_k = k & ~bit(ki[s]);
        Mask rest_j = j & ~bit(ji[t]);
        int base = ((s + t) % 2) ? -1 : 1;
        for (const auto& [l, c] : br) {
          int s1 = wedge_sign(bit(l), rest_k);
          if (s1 == 0) continue;
          int s2 = wedge_sign(bit(l) | rest_k, rest_j);
          if (s2 == 0) continue;
          r.add(bit(l) | rest_k | rest_j, base * s1 * s2 > 0 ? GradedCoeff(c) : -GradedCoeff(c));
        }
      }
    return r;
  }

  /// [vP, wQ] = (v[P, w])Q - (-1)^((|P|-1)(|Q|-1)) (w[Q, v])P + vw[P, Q].
  Multivector bracket(const Multivector& p, const Multivector& q) const {
    Multivector r(rank());
    for (const auto& [mp, v] : p.terms()) {
      const int dp = mask_degree(mp);
      for (const auto& [mq, w] : q.terms()) {
        const int dq = mask_degree(mq);
        Multivector eq = frame_multivector(rank(), mq);
        Multivector ep = frame_multivector(rank(), mp);
        r += wedge(v * frame_with_coeff(mp, w), eq);
        Multivector second = wedge(w * frame_with_coeff(mq, v), ep);
        if (((dp - 1) * (dq - 1)) % 2 == 0) {
          r -= second;
        } else {
          r += second;
        }
        r += (v * w) * frame_bracket(mp, mq);
      }
    }
    return r;
  }

 private:
  const Cartan& cart_;
};

inline Multivector schouten(const Cartan& cart, const Multivector& p, const Multivector& q) {
  return Schouten(cart).bracket(p, q);
}

/// (wedge^3 beta~)(H) through the pairing:
/// <a1 a2 a3, T> = H(beta~ a1, beta~ a2, beta~ a3) with beta~(alpha) = -breve(alpha) beta.
inline Multivector cube_sharp(const Multivector& beta, const GradedForm& h) {
  const int r = beta.rank_a();
  if (!h.is_zero() && !h.is_homogeneous(3)) throw std::invalid_argument("expected a 3-form");
  std::vector<Multivector> sharp(r);
  for (int i = 0; i < r; ++i) {
    GradedForm ei(r);
    ei.add(bit(i), 0, RingElem(1));
    sharp[i] = -breve_contract(ei, beta);
  }
  Multivector out(r);
  for (Mask m : masks_of_degree(r, 3)) {
    auto idx = mask_indices(m);
    out.add(m, pair_eval(h, wedge(wedge(sharp[idx[0]], sharp[idx[1]]), sharp[idx[2]])));
  }
  return out;
}

struct JacobiVerdict {
  Check self{"[L,L] = -2 L^E"};
  Check with_e{"[L,E] = 0"};
  /// Only filled when requested: L^n ^ E for rank 2n + 1.
  std::optional<Multivector> top;
  bool passed() const { return self.pass && with_e.pass; }
  bool nondegenerate() const { return top && !top->is_zero(); }
};

inline JacobiVerdict check_jacobi_pair(const Cartan& cart, const Multivector& lambda,
                                       const Multivector& e, bool nondegeneracy = false) {
  if (!lambda.is_homogeneous(2) || !e.is_homogeneous(1))
    throw std::invalid_argument("expected a bivector and a vector");
  Schouten s(cart);
  JacobiVerdict v;
  ++v.self.checked;
  Multivector ll = s.bracket(lambda, lambda);
  Multivector expect = RingElem(-2) * wedge(lambda, e);
  if (!(ll == expect)) v.self.fail({}, to_string(ll - expect));
  ++v.with_e.checked;
  Multivector le = s.bracket(lambda, e);
  if (!le.is_zero()) v.with_e.fail({}, to_string(le));
  if (nondegeneracy) {
    const int r = cart.algebroid().rank();
    if (r % 2 == 0) throw std::invalid_argument("nondegeneracy needs odd rank");
    Multivector acc = e;
    for (int k = 0; k < (r - 1) / 2; ++k) acc = wedge(lambda, acc);
    v.top = acc;
  }
  return v;
}

/// [beta, beta] = 2 (wedge^3 beta~)(H).
inline Check check_twisted_poisson(const Cartan& cart, const Multivector& beta,
                                   const GradedForm& h) {
  Check c("twisted-poisson");
  ++c.checked;
  Multivector lhs = schouten(cart, beta, beta);
  Multivector rhs = RingElem(2) * cube_sharp(beta, h);
  if (!(lhs == rhs)) c.fail({}, to_string(lhs - rhs));
  return c;
}

/// Rescaling the trivializing section by f: (L, E) -> (f L, f E - breve(df) L).
inline std::pair<Multivector, Multivector> jacobi_gauge(const Cartan& cart,
                                                        const Multivector& lambda,
                                                        const Multivector& e,
                                                        const RingElem& f) {
  if (f.is_zero()) throw std::invalid_argument("gauge factor must be nonzero");
  const int r = cart.algebroid().rank();
  AForm f0 = AForm::scalar(r);
  f0.add(0, 0, f);
  GradedForm df = to_graded(cart.d(f0));
  return {f * lambda, f * e - breve_contract(df, lambda)};
}

/// {f, g}_L + f X(g) - g X(f) with {f, g}_L = breve(df) breve(dg) L.
inline RingElem jacobi_bracket(const Cartan& cart, const Multivector& lambda,
                               const Multivector& x, const RingElem& f, const RingElem& g) {
  const int r = cart.algebroid().rank();
  auto d0 = [&](const RingElem& h) {
    AForm h0 = AForm::scalar(r);
    h0.add(0, 0, h);
    return to_graded(cart.d(h0));
  };
  GradedForm df = d0(f);
  GradedForm dg = d0(g);
  GradedCoeff pl = breve_contract(df, breve_contract(dg, lambda)).coeff(0);
  RVec xs = vector_components(x);
  RingElem out = pl.part(0);
  out += f * cart.algebroid().act(xs, g);
  out -= g * cart.algebroid().act(xs, f);
  return out;
}

}  // namespace avc

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "avc/courant.hpp"
#include "avc/dirac.hpp"
#include "avc/linalg.hpp"
#include "avc/schouten.hpp"

namespace avc {

/// A subbundle H of A given by an adapted frame: rows of `frame` are the
/// components of f_1..f_r in the frame of A, and f_1..f_h span H.
struct Distribution {
  RMatrix frame;
  int h = 0;
  std::vector<RingElem> denominators;

  static Distribution coordinate(const RingPtr& ring, int rank, int h) {
    return {identity_matrix(rank, ring), h, {}};
  }
};

/// The reduced bundle q(pi^-1(H)) in the frame {f_a, u x f^a}, a = 1..h.
/// Representatives are scaled by D = det(frame) so that they stay polynomial.
class HBundle {
 public:
  HBundle(CourantPresentation c, Distribution d) : c_(std::move(c)), d_(std::move(d)) {
    detail::require_line(c_);
    const int r = c_.rank_a();
    if (static_cast<int>(d_.frame.size()) != r || d_.h < 0 || d_.h > r)
      throw std::invalid_argument("adapted frame has the wrong shape");
    for (auto& row : d_.frame) {
      if (static_cast<int>(row.size()) != r) throw std::invalid_argument("adapted frame has the wrong shape");
      for (auto& x : row) x = x.with_ring(c_.ring());
    }
    det_ = determinant(d_.frame).with_ring(c_.ring());
    if (det_.is_zero()) throw std::invalid_argument("adapted frame is singular");
    if (!det_.is_unit()) d_.denominators.push_back(det_);
    coframe_ = transpose(adjugate(d_.frame));

    const int n = rank();
    pairing_.assign(n, RVec(n, RingElem(c_.ring(), 0)));
    RingElem d2 = det_ * det_;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        RingElem p = pairing(c_, representative(k), representative(l))[0];
        auto q = exact_quotient(p, d2);
        if (!q) throw std::logic_error("pairing on the reduced bundle is not polynomial");
        pairing_[k][l] = *q;
      }
    if (avc::rank(pairing_) != n) throw std::invalid_argument("pairing degenerates on the reduced bundle");
  }

  const CourantPresentation& presentation() const { return c_; }
  const Distribution& distribution() const { return d_; }
  int h() const { return d_.h; }
  int rank() const { return 2 * d_.h; }
  const RingElem& scale() const { return det_; }
  /// Rows g^a with g^a(f_b) = D delta_ab.
  const RMatrix& coframe() const { return coframe_; }
  /// Restricted pairing in the frame {f_a, u x f^a}.
  const RMatrix& pairing_matrix() const { return pairing_; }

  /// D times the lift of the k-th frame element.
  CourantSection representative(int k) const {
    RVec coords(rank(), RingElem(c_.ring(), 0));
    coords[k] = RingElem(c_.ring(), 1);
    return representative(coords);
  }

  /// D times a lift of sum_k coords[k] times the k-th frame element.
  CourantSection representative(const RVec& coords) const {
    const int r = c_.rank_a();
    const int h = d_.h;
    CourantSection s = c_.zero();
    for (int a = 0; a < h; ++a) {
      if (coords[a].is_zero()) continue;
      for (int i = 0; i < r; ++i) s.x[i] += det_ * coords[a] * d_.frame[a][i];
    }
    for (int a = 0; a < h; ++a) {
      const RingElem& ca = coords[h + a];
      if (ca.is_zero()) continue;
      for (int i = 0; i < r; ++i) s.xi.add(bit(i), 0, ca * coframe_[a][i]);
    }
    return s;
  }

  /// Generators u x g^a, a > h, of V x Ann(H).
  std::vector<CourantSection> annihilator() const {
    std::vector<CourantSection> out;
    for (int a = d_.h; a < c_.rank_a(); ++a) {
      CourantSection s = c_.zero();
      for (int i = 0; i < c_.rank_a(); ++i) s.xi.add(bit(i), 0, coframe_[a][i]);
      out.push_back(s);
    }
    return out;
  }

 private:
  CourantPresentation c_;
  Distribution d_;
  RingElem det_;
  RMatrix coframe_;
  RMatrix pairing_;
};

inline HBundle build_H_bundle(const CourantPresentation& c, const Distribution& d) {
  return HBundle(c, d);
}

/// J acts on coordinate columns in the frame {f_a, u x f^a}: J(e_k) = sum_l j[l][k] e_l.
struct GCRStructure {
  HBundle bundle;
  RMatrix j;
};

struct GCRVerdict {
  ValidationReport report;
  Subbundle l;
  bool valid() const { return report.passed(); }
};

namespace detail {

inline void require_square(const RMatrix& m, int n, const char* what) {
  if (static_cast<int>(m.size()) != n) throw std::invalid_argument(std::string(what) + " has the wrong size");
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument(std::string(what) + " has the wrong size");
}

inline RingElem imag(const RingPtr& ring) {
  return RingElem(ring, 1).scaled(Scalar::imag_unit());
}

}  // namespace detail

/// L = q^-1(ker(J - i)): D-scaled lifts of the eigenvectors plus V x Ann(H).
inline Subbundle eigenbundle(const GCRStructure& s) {
  const HBundle& hb = s.bundle;
  const int n = hb.rank();
  const auto& ring = hb.presentation().ring();
  RMatrix m = s.j;
  for (auto& row : m)
    for (auto& x : row) x = x.with_ring(ring);
  for (int k = 0; k < n; ++k) m[k][k] -= detail::imag(ring);
  Subbundle l{{}, hb.distribution().denominators};
  if (n > 0)
    for (const auto& v : kernel(m, n)) l.generators.push_back(hb.representative(v));
  for (const auto& a : hb.annihilator()) l.generators.push_back(a);
  return l;
}

inline GCRVerdict validate_gcr(const GCRStructure& s) {
  const HBundle& hb = s.bundle;
  const CourantPresentation& c = hb.presentation();
  const int n = hb.rank();
  detail::require_square(s.j, n, "J");
  const auto& ring = c.ring();
  RMatrix j = s.j;
  for (auto& row : j)
    for (auto& x : row) x = x.with_ring(ring);

  Check sq("J^2 = -1");
  RMatrix j2 = matmul(j, j);
  for (int k = 0; k < n && sq.pass; ++k)
    for (int l = 0; l < n; ++l) {
      ++sq.checked;
      RingElem want(ring, k == l ? -1 : 0);
      if (!(j2[k][l] == want)) {
        sq.fail(one_based({k, l}), (j2[k][l] - want).str());
        break;
      }
    }

  Check orth("orthogonal");
  const RMatrix& g = hb.pairing_matrix();
  RMatrix jtgj = matmul(transpose(j), matmul(g, j));
  for (int k = 0; k < n && orth.pass; ++k)
    for (int l = 0; l < n; ++l) {
      ++orth.checked;
      if (!(jtgj[k][l] == g[k][l])) {
        orth.fail(one_based({k, l}), (jtgj[k][l] - g[k][l]).str());
        break;
      }
    }

  GCRVerdict v;
  Check lag("maximal-isotropic");
  Check inv("involutive");
  Check cap("L meets its conjugate in V x Ann(H)");
  if (sq.pass && orth.pass) {
    v.l = eigenbundle(s);
    DiracVerdict dv = is_dirac(c, v.l);
    lag = *dv.report.find("rank");
    lag.name = "maximal-isotropic";
    const Check* iso = dv.report.find("isotropic");
    if (!iso->pass) lag.fail(iso->witness, iso->residual);
    lag.checked += iso->checked;
    inv = *dv.report.find("involutive");
    ++cap.checked;
    Subbundle both = v.l;
    Subbundle bar = conjugate(v.l);
    both.generators.insert(both.generators.end(), bar.generators.begin(), bar.generators.end());
    int got = rank(c, both);
    int want = c.rank_a() + hb.h();
    if (got != want)
      cap.fail({}, "rank of L + conj(L) is " + std::to_string(got) + ", expected " + std::to_string(want));
  } else {
    for (Check* ch : {&lag, &inv, &cap}) ch->fail({}, "not evaluated: J is not an orthogonal complex structure");
  }
  v.report.checks = {sq, orth, lag, inv, cap};
  return v;
}

/// P = i pi J j i^*, a bivector with F-grade -1; P^{kl} = <e^k e^l, P>.
inline Multivector extract_bivector(const GCRStructure& s) {
  const HBundle& hb = s.bundle;
  const CourantPresentation& c = hb.presentation();
  const int r = c.rank_a();
  const int h = hb.h();
  const RMatrix& f = hb.distribution().frame;
  detail::require_square(s.j, 2 * h, "J");
  std::vector<RVec> image(r, RVec(r, RingElem(c.ring(), 0)));
  for (int k = 0; k < r; ++k)
    for (int b = 0; b < h; ++b) {
      RingElem y(c.ring(), 0);
      for (int a = 0; a < h; ++a) y += s.j[b][h + a] * f[a][k];
      if (y.is_zero()) continue;
      for (int l = 0; l < r; ++l) image[k][l] += y * f[b][l];
    }
  Multivector p(r);
  for (int k = 0; k < r; ++k) {
    if (!image[k][k].is_zero()) throw std::invalid_argument("J is not orthogonal: P is not alternating");
    for (int l = k + 1; l < r; ++l) {
      if (!(image[k][l] == -image[l][k]))
        throw std::invalid_argument("J is not orthogonal: P is not alternating");
      p.add(bit(k) | bit(l), -1, image[k][l]);
    }
  }
  return p;
}

/// Generalized complex structure of a nondegenerate V-valued 2-form on the
/// whole of A: J(X) = i_X omega, J(xi) = -omega^-1(xi).
inline GCRStructure symplectic_gcr(const CourantPresentation& c, const AForm& omega) {
  if (!omega.is_homogeneous(2) || omega.rank_a() != c.rank_a() || omega.rank_v() != 1)
    throw std::invalid_argument("omega must be a V-valued 2-form");
  const int r = c.rank_a();
  const auto& ring = c.ring();
  RMatrix w(r, RVec(r, RingElem(ring, 0)));
  for (int i = 0; i < r; ++i)
    for (int k = i + 1; k < r; ++k) {
      RingElem x = omega.coeff(bit(i) | bit(k), 0).with_ring(ring);
      w[i][k] = x;
      w[k][i] = -x;
    }
  RingElem det = determinant(w);
  if (!det.is_unit()) throw std::invalid_argument("omega must be invertible over the ring");
  RingElem inv_det = *exact_quotient(RingElem(ring, 1), det);
  RMatrix adj = adjugate(w);
  RMatrix j(2 * r, RVec(2 * r, RingElem(ring, 0)));
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < r; ++k) {
      j[r + k][i] = w[i][k];
      j[i][r + k] = -(inv_det * adj[k][i]);
    }
  return {HBundle(c, Distribution::coordinate(ring, r, r)), std::move(j)};
}

/// The structure -J^* + J on H^* + H of an almost CR structure.
inline GCRStructure cr_to_gcr(const CourantPresentation& c, const Distribution& d, const RMatrix& jh) {
  const int h = d.h;
  detail::require_square(jh, h, "J");
  const auto& ring = c.ring();
  RMatrix sq = matmul(jh, jh);
  for (int a = 0; a < h; ++a)
    for (int b = 0; b < h; ++b)
      if (!(sq[a][b].with_ring(ring) == RingElem(ring, a == b ? -1 : 0)))
        throw std::invalid_argument("J does not square to -1 on H");
  RMatrix j(2 * h, RVec(2 * h, RingElem(ring, 0)));
  for (int a = 0; a < h; ++a)
    for (int b = 0; b < h; ++b) {
      j[a][b] = jh[a][b].with_ring(ring);
      j[h + a][h + b] = -jh[b][a].with_ring(ring);
    }
  return {HBundle(c, d), std::move(j)};
}

/// P(xi, .) = -breve(xi) P.
inline Multivector p_sharp(const Multivector& p, const GradedForm& xi) {
  return -breve_contract(xi, p);
}

/// [xi, eta] = i_{P(xi, .)} d eta - i_{P(eta, .)} d xi + d(P(xi, eta)), with anchor xi -> P(xi, .).
inline GradedForm induced_bracket(const Cartan& cart, const GradedForm& xi, const GradedForm& eta,
                                  const Multivector& p) {
  const int r = p.rank_a();
  Multivector px = p_sharp(p, xi);
  Multivector pe = p_sharp(p, eta);
  GradedForm out = interior(px, cart.d(eta)) - interior(pe, cart.d(xi));
  GradedForm pxe(r);
  pxe.add(0, pair_eval(wedge(xi, eta), p));
  return out + cart.d(pxe);
}

/// {v, w} = P(dv, dw) for sections of V carried as grade-1 coefficients.
inline GradedCoeff v_bracket(const Cartan& cart, const GradedCoeff& v, const GradedCoeff& w,
                             const Multivector& p) {
  const int r = p.rank_a();
  GradedForm fv(r);
  fv.add(0, v);
  GradedForm fw(r);
  fw.add(0, w);
  return pair_eval(wedge(cart.d(fv), cart.d(fw)), p);
}

/// Whether the kernel of the anchor acts trivially on V, the pointwise test
/// for local A-parallel sections of a line bundle.
inline Check admits_parallel_section(const LieAlgebroid& a, const AModule& v) {
  if (v.rank_v() != 1) throw std::invalid_argument("needs V of rank one");
  Check chk("parallel-section");
  const int r = a.rank();
  const int n = a.num_coords();
  RMatrix at(n, RVec(r, a.zero()));
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < n; ++k) at[k][i] = a.anchor(i, k);
  std::vector<RVec> null = n == 0 ? std::vector<RVec>{} : kernel(at, r);
  if (n == 0)
    for (int i = 0; i < r; ++i) null.push_back(a.frame(i));
  for (const auto& k : null) {
    ++chk.checked;
    RingElem th = a.zero();
    for (int i = 0; i < r; ++i) th += k[i] * v.theta(i, 0, 0);
    if (!th.is_zero()) {
      chk.fail({}, "kernel of the anchor " + detail::vec_str(k) + " acts by " + th.str());
      break;
    }
  }
  return chk;
}

/// P(d sigma, .) = 0 for a section sigma of V (grade 1).
inline bool annihilates(const Cartan& cart, const Multivector& p, const GradedCoeff& sigma) {
  GradedForm s(p.rank_a());
  s.add(0, sigma);
  return breve_contract(cart.d(s), p).is_zero();
}

/// P = u^-1 (L + e_t ^ E) for the distinguished index t; returns (L, E) on the
/// remaining frame, grade 0.
inline std::pair<Multivector, Multivector> jacobi_decomposition(const Multivector& p, int t) {
  const int r = p.rank_a();
  if (t < 0 || t >= r) throw std::out_of_range("distinguished index");
  auto drop = [&](Mask m) {
    Mask low = m & (bit(t) - 1);
    Mask high = (m >> 1) & ~(bit(t) - 1);
    return low | high;
  };
  Multivector lambda(r - 1);
  Multivector e(r - 1);
  for (const auto& [m, c] : p.terms()) {
    if (mask_degree(m) != 2) throw std::invalid_argument("expected a bivector");
    for (const auto& [g, f] : c.parts())
      if (g != -1) throw std::invalid_argument("expected F-grade -1");
    RingElem f = c.part(-1);
    if (m & bit(t)) {
      Mask rest = m & ~bit(t);
      // c e_rest ^ e_t = -c e_t ^ e_rest
      int s = wedge_sign(rest, bit(t));
      e.add(drop(rest), 0, s > 0 ? -f : f);
    } else {
      lambda.add(drop(m), 0, f);
    }
  }
  return {lambda, e};
}

}  // namespace avc

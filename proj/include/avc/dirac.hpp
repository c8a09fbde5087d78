#pragma once

#include <string>
#include <utility>
#include <vector>

#include "avc/courant.hpp"
#include "avc/linalg.hpp"

namespace avc {

/// Subbundle of A + (V x A*) spanned by generators over the fraction field.
/// Membership verdicts hold off the zero locus of the declared denominators.
struct Subbundle {
  std::vector<CourantSection> generators;
  std::vector<RingElem> denominators;
};

/// Coordinates of a section in the frame of CourantPresentation::frame.
inline RVec flatten(const CourantPresentation& c, const CourantSection& s) {
  RVec out = s.x;
  for (int i = 0; i < c.rank_a(); ++i) {
    RVec k = s.xi.coeff(bit(i));
    for (int b = 0; b < c.rank_v(); ++b) out.push_back(k[b]);
  }
  for (auto& x : out) x = x.with_ring(c.ring());
  return out;
}

inline CourantSection unflatten(const CourantPresentation& c, const RVec& v) {
  CourantSection s = c.zero();
  for (int i = 0; i < c.rank_a(); ++i) s.x[i] = v[i];
  for (int i = 0; i < c.rank_a(); ++i)
    for (int b = 0; b < c.rank_v(); ++b) s.xi.add(bit(i), b, v[c.rank_a() + i * c.rank_v() + b]);
  return s;
}

inline RMatrix generator_matrix(const CourantPresentation& c, const Subbundle& l) {
  RMatrix m;
  for (const auto& g : l.generators) m.push_back(flatten(c, g));
  return m;
}

inline int rank(const CourantPresentation& c, const Subbundle& l) {
  return l.generators.empty() ? 0 : rank(generator_matrix(c, l));
}

namespace detail {

inline void require_line(const CourantPresentation& c) {
  if (c.rank_v() != 1) throw std::invalid_argument("needs V of rank one");
}

}  // namespace detail

/// L^perp = {v : <v, g> = 0 for every generator g}.
inline Subbundle perp(const CourantPresentation& c, const Subbundle& l) {
  detail::require_line(c);
  const int r = c.rank_a();
  RMatrix eqs;
  for (const auto& g : l.generators) {
    RVec f = flatten(c, g);
    RVec row(2 * r);
    for (int i = 0; i < r; ++i) {
      row[i] = f[r + i];
      row[r + i] = f[i];
    }
    eqs.push_back(std::move(row));
  }
  Subbundle out{{}, l.denominators};
  if (eqs.empty()) {
    for (int n = 0; n < 2 * r; ++n) out.generators.push_back(c.frame(n));
    return out;
  }
  for (const auto& v : kernel(eqs, 2 * r)) out.generators.push_back(unflatten(c, v));
  return out;
}

inline Subbundle conjugate(const Subbundle& l) {
  Subbundle out{{}, {}};
  for (const auto& g : l.generators) out.generators.push_back(g.conj());
  for (const auto& d : l.denominators) out.denominators.push_back(d.conj());
  return out;
}

/// Whether s lies in the span of the generators with coefficients in the
/// ring localized at the declared denominators.
inline bool contains(const CourantPresentation& c, const Subbundle& l, const CourantSection& s) {
  RVec b = flatten(c, s);
  if (is_zero_vec(b)) return true;
  if (l.generators.empty()) return false;
  std::vector<RVec> gens;
  for (const auto& g : l.generators) gens.push_back(flatten(c, g));
  auto sol = solve_in_span(gens, b);
  if (!sol) return false;
  for (std::size_t k = 0; k < gens.size(); ++k)
    if (!denominator_allowed(sol->num[k], sol->den[k], l.denominators)) return false;
  return true;
}

/// Same span over the fraction field.
inline bool same_span(const CourantPresentation& c, const Subbundle& a, const Subbundle& b) {
  int ra = rank(c, a);
  if (ra != rank(c, b)) return false;
  Subbundle both = a;
  both.generators.insert(both.generators.end(), b.generators.begin(), b.generators.end());
  return rank(c, both) == ra;
}

struct DiracVerdict {
  bool lagrangian = false;
  bool involutive = false;
  ValidationReport report;
  /// Conclusions hold where none of these vanish.
  std::vector<RingElem> excluded;
  bool dirac() const { return lagrangian && involutive; }
};

inline DiracVerdict is_dirac(const CourantPresentation& c, const Subbundle& l) {
  detail::require_line(c);
  const int n = static_cast<int>(l.generators.size());
  DiracVerdict v;
  v.excluded = l.denominators;

  Check rk("rank");
  ++rk.checked;
  int got = rank(c, l);
  if (got != c.rank_a())
    rk.fail({}, "rank " + std::to_string(got) + ", expected " + std::to_string(c.rank_a()));

  Check iso("isotropic");
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ++iso.checked;
      RVec p = pairing(c, l.generators[i], l.generators[j]);
      if (!is_zero_vec(p)) iso.fail(one_based({i, j}), p[0].str());
    }
  v.lagrangian = rk.pass && iso.pass;

  Check inv("involutive");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ++inv.checked;
      CourantSection b = courant_bracket(c, l.generators[i], l.generators[j]);
      if (!contains(c, l, b)) inv.fail(one_based({i, j}), to_string(b));
    }
  v.involutive = inv.pass;
  v.report.checks = {rk, iso, inv};
  return v;
}

/// Generic rank of L intersected with A (the sections with vanishing form part).
inline int intersect_with_a(const CourantPresentation& c, const Subbundle& l) {
  if (l.generators.empty()) return 0;
  RMatrix forms;
  for (const auto& g : l.generators) {
    RVec f = flatten(c, g);
    forms.emplace_back(f.begin() + c.rank_a(), f.end());
  }
  return rank(c, l) - rank(forms);
}

/// Whether the anchor-side projection of L is closed under the A-bracket.
inline Check projection_closed(const CourantPresentation& c, const Subbundle& l) {
  Check chk("projection-closed");
  const auto& a = c.algebroid();
  const int n = static_cast<int>(l.generators.size());
  std::vector<RVec> proj;
  for (const auto& g : l.generators) {
    RVec x = g.x;
    for (auto& e : x) e = e.with_ring(c.ring());
    proj.push_back(x);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ++chk.checked;
      RVec b = a.bracket(proj[i], proj[j]);
      if (is_zero_vec(b)) continue;
      auto sol = solve_in_span(proj, b);
      bool ok = sol.has_value();
      for (std::size_t k = 0; ok && k < proj.size(); ++k)
        ok = denominator_allowed(sol->num[k], sol->den[k], l.denominators);
      if (!ok) chk.fail(one_based({i, j}), detail::vec_str(b));
    }
  return chk;
}

}  // namespace avc

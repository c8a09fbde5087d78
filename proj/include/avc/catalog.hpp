#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "avc/algebroid.hpp"
#include "avc/courant.hpp"
#include "avc/dirac.hpp"
#include "avc/gcr.hpp"

namespace avc::catalog {

/// x, y, z, w for small dimensions, x1..xn beyond.
inline std::vector<std::string> coordinate_names(int n) {
  static const char* small[] = {"x", "y", "z", "w"};
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(n <= 4 ? small[i] : "x" + std::to_string(i + 1));
  return out;
}

/// Tangent algebroid of R^n with trivial rank-one V.
inline CourantPresentation standard_courant(int n, const AForm& h = AForm(), bool force = false) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  auto ring = make_ring(coordinate_names(n));
  AForm twist = h.is_zero() ? AForm(n, 1) : h;
  return CourantPresentation(LieAlgebroid::tangent(ring), AModule(n, 1, ring), twist, force);
}

/// TM + R over R^n: frame d/dx_1..d/dx_n, d/dt, with d/dt acting on the frame
/// e^t of V by 1 and trivially on functions.
inline LieAlgebroid e1m_algebroid(const RingPtr& ring) {
  const int n = ring->num_coords();
  RMatrix anchor = identity_matrix(n, ring);
  anchor.push_back(RVec(n, RingElem(ring, 0)));
  return LieAlgebroid(ring, n + 1, anchor);
}

inline AModule e1m_module(const RingPtr& ring) {
  const int n = ring->num_coords();
  AModule v(n + 1, 1, ring);
  v.set_theta(n, 0, 0, RingElem(ring, 1));
  return v;
}

inline CourantPresentation e1m(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  auto ring = make_ring(coordinate_names(n));
  return CourantPresentation(e1m_algebroid(ring), e1m_module(ring), AForm(n + 1, 1));
}

/// Lie algebra over a point with a one-dimensional representation.
struct PointAlgebra {
  std::string name;
  LieAlgebroid algebra;
  AModule module;
};

inline PointAlgebra point_algebra(std::string name, int dim,
                                  const std::vector<std::array<int, 4>>& brackets,
                                  const std::vector<int>& weight = {}) {
  auto ring = make_ring({});
  LieAlgebroid g(ring, dim, RMatrix(dim, RVec{}));
  for (const auto& [i, j, k, c] : brackets) {
    RVec comps(dim, RingElem(ring, 0));
    comps[k] = RingElem(ring, c);
    RVec prev = g.zero_section();
    for (int l = 0; l < dim; ++l) prev[l] = g.structure(i, j, l);
    for (int l = 0; l < dim; ++l) comps[l] += prev[l];
    g.set_bracket(i, j, comps);
  }
  AModule v(dim, 1, ring);
  for (std::size_t i = 0; i < weight.size(); ++i) v.set_theta(static_cast<int>(i), 0, 0, RingElem(ring, weight[i]));
  return {std::move(name), std::move(g), std::move(v)};
}

inline std::vector<PointAlgebra> point_algebras() {
  return {
      point_algebra("abelian2", 2, {}),
      point_algebra("abelian2-weight", 2, {}, {1, 0}),
      point_algebra("sl2", 3, {{0, 1, 1, 2}, {0, 2, 2, -2}, {1, 2, 0, 1}}),
      point_algebra("heisenberg", 3, {{0, 1, 2, 1}}),
      point_algebra("heisenberg-weight", 3, {{0, 1, 2, 1}}, {1, 0, 0}),
  };
}

/// Symplectization R^3 x R of the contact form dz - y dx, with E = e^t.
struct Symplectization {
  CourantPresentation presentation;
  AForm omega;
};

inline Symplectization symplectization_r3() {
  auto ring = make_ring({"x", "y", "z", "t"}, {ExpGenerator{"E", {0, 0, 0, 1}}});
  RingElem e = RingElem::variable(ring, "E");
  RingElem y = RingElem::variable(ring, "y");
  // E (dx^dy + dt^dz - y dt^dx)
  AForm omega(4, 1);
  omega.add(mask_of({0, 1}), 0, e);
  omega.add(mask_of({2, 3}), 0, -e);
  omega.add(mask_of({0, 3}), 0, y * e);
  return {CourantPresentation(LieAlgebroid::tangent(ring), AModule(4, 1, ring), AForm(4, 1)), omega};
}

namespace detail {

/// The invariant function E^power f(x) on the symplectization as f on the base.
inline RingElem descend(const RingElem& f, int power, const RingPtr& base) {
  const int nc = base->num_coords();
  const auto& sig = *f.ring();
  const int t = sig.num_coords() - 1;
  const int e = sig.num_coords();
  RingElem out(base, 0);
  for (const auto& term : f.terms()) {
    if (term.exp[t] != 0 || term.exp[e] != power)
      throw std::invalid_argument("section is not invariant under the R-action");
    Exponents x{};
    for (int v = 0; v < nc; ++v) x[v] = term.exp[v];
    out += RingElem::monomial(base, x, term.coeff);
  }
  return out;
}

}  // namespace detail

/// Invariant section X + xi on the symplectization as a section of E^1 on
/// the base: X is t-free, xi is E times a t-free form, and E becomes u.
inline CourantSection descend(const CourantPresentation& base, const CourantSection& s) {
  CourantSection out = base.zero();
  for (int i = 0; i < base.rank_a(); ++i) out.x[i] = detail::descend(s.x[i], 0, base.ring());
  for (const auto& [m, c] : s.xi.terms()) out.xi.add(m, 0, detail::descend(c[0], 1, base.ring()));
  return out;
}

inline AForm descend(const CourantPresentation& base, const AForm& w) {
  AForm out(base.rank_a(), 1);
  for (const auto& [m, c] : w.terms()) out.add(m, 0, detail::descend(c[0], 1, base.ring()));
  return out;
}

/// The contact structure dz - y dx on R^3 inside E^1(R^3).
struct ContactR3 {
  CourantPresentation presentation;
  /// Graph of the symplectization form, descended.
  Subbundle l;
  /// The descended symplectization form u x (dx^dy + dt^dz - y dt^dx).
  AForm omega;
  Multivector lambda;
  Multivector e;
};

inline ContactR3 contact_r3() {
  CourantPresentation base = e1m(3);
  Symplectization n = symplectization_r3();
  Subbundle l;
  for (int i = 0; i < 4; ++i) {
    CourantSection g = n.presentation.frame(i);
    g.xi += contract(g.x, n.omega);
    l.generators.push_back(descend(base, g));
  }
  const auto& ring = base.ring();
  RingElem y = RingElem::variable(ring, "y");
  Multivector lambda = wedge(vector_field(RVec{RingElem(ring, 1), RingElem(ring, 0), y}),
                             frame_multivector(3, bit(1)));
  Multivector e = frame_multivector(3, bit(2));
  return {base, std::move(l), descend(base, n.omega), lambda, e};
}

inline RMatrix standard_complex(const RingPtr& ring, int pairs) {
  RMatrix j(2 * pairs, RVec(2 * pairs, RingElem(ring, 0)));
  for (int p = 0; p < pairs; ++p) {
    j[2 * p + 1][2 * p] = RingElem(ring, 1);
    j[2 * p][2 * p + 1] = RingElem(ring, -1);
  }
  return j;
}

struct CRExample {
  std::string name;
  CourantPresentation presentation;
  Distribution distribution;
  RMatrix j;
  bool valid;
};

inline std::vector<CRExample> cr_examples() {
  std::vector<CRExample> out;
  {
    auto c = standard_courant(3);
    out.push_back({"cr-levi-flat-r3", c, Distribution::coordinate(c.ring(), 3, 2),
                   standard_complex(c.ring(), 1), true});
  }
  {
    // H = span(d/dx, d/dy + x d/dz): rank-one H_{1,0} is always involutive
    auto c = standard_courant(3);
    Distribution d = Distribution::coordinate(c.ring(), 3, 2);
    d.frame[1][2] = RingElem::variable(c.ring(), "x");
    out.push_back({"cr-tilted-r3", c, d, standard_complex(c.ring(), 1), true});
  }
  {
    auto c = standard_courant(2);
    out.push_back({"complex-r2", c, Distribution::coordinate(c.ring(), 2, 2),
                   standard_complex(c.ring(), 1), true});
  }
  {
    // frame d/dx, d/dy, d/dz, d/dw + x d/dz: [Z1, Z2] = -i d/dz leaves H_{1,0}
    auto c = standard_courant(4);
    Distribution d = Distribution::coordinate(c.ring(), 4, 4);
    d.frame[3][2] = RingElem::variable(c.ring(), "x");
    out.push_back({"almost-complex-r4", c, d, standard_complex(c.ring(), 2), false});
  }
  return out;
}

inline GCRStructure symplectic_r2() {
  auto c = standard_courant(2);
  AForm omega(2, 1);
  omega.add(mask_of({0, 1}), 0, RingElem(c.ring(), 1));
  return symplectic_gcr(c, omega);
}

/// A named fixture with the verdicts its checkers are expected to return.
struct Entry {
  std::string name;
  std::string summary;
  CourantPresentation presentation;
  std::optional<Subbundle> subbundle;
  std::optional<GCRStructure> gcr;
  /// (Lambda, E) on the tangent bundle of the coordinate ring.
  std::optional<std::pair<Multivector, Multivector>> jacobi;
  /// Frame index of the trivializing direction, for splitting P into (Lambda, E).
  std::optional<int> jacobi_index;
  std::map<std::string, bool> expected;
};

namespace detail {

inline Entry courant_entry(std::string name, std::string summary, CourantPresentation c) {
  return {std::move(name), std::move(summary), std::move(c), {}, {}, {}, {}, {{"axioms", true}}};
}

inline std::vector<std::pair<std::string, std::function<Entry()>>>& registry() {
  static std::vector<std::pair<std::string, std::function<Entry()>>> r = [] {
    std::vector<std::pair<std::string, std::function<Entry()>>> v;
    v.push_back({"standard-r2", [] {
                   return courant_entry("standard-r2", "TR^2 + T*R^2, H = 0", standard_courant(2));
                 }});
    v.push_back({"standard-r3-h", [] {
                   auto ring = make_ring(coordinate_names(3));
                   AForm h(3, 1);
                   h.add(mask_of({0, 1, 2}), 0, RingElem(ring, 1));
                   return courant_entry("standard-r3-h", "TR^3 + T*R^3, H = dx^dy^dz",
                                        standard_courant(3, h));
                 }});
    for (int n = 1; n <= 3; ++n) {
      std::string name = "e1m-r" + std::to_string(n);
      v.push_back({name, [n, name] {
                     return courant_entry(name, "E^1(R^" + std::to_string(n) + ")", e1m(n));
                   }});
    }
    v.push_back({"dirac-graph-r2", [] {
                   auto c = standard_courant(2);
                   Subbundle l{{c.frame(0) + c.frame(3), c.frame(1) - c.frame(2)}, {}};
                   Entry e = courant_entry("dirac-graph-r2", "graph of dx^dy", c);
                   e.subbundle = l;
                   e.expected["dirac"] = true;
                   return e;
                 }});
    v.push_back({"lagrangian-z-r3", [] {
                   auto c = standard_courant(3);
                   RingElem z = RingElem::variable(c.ring(), "z");
                   Subbundle l{{c.frame(0) + z * c.frame(4), c.frame(1) - z * c.frame(3), c.frame(2)}, {}};
                   Entry e = courant_entry("lagrangian-z-r3", "graph of z dx^dy, not involutive", c);
                   e.subbundle = l;
                   e.expected["dirac"] = false;
                   return e;
                 }});
    v.push_back({"contact-r3", [] {
                   ContactR3 k = contact_r3();
                   Entry e = courant_entry("contact-r3", "contact form dz - y dx inside E^1(R^3)",
                                           k.presentation);
                   e.subbundle = k.l;
                   e.gcr = symplectic_gcr(k.presentation, k.omega);
                   e.jacobi = std::make_pair(k.lambda, k.e);
                   e.jacobi_index = 3;
                   e.expected["dirac"] = true;
                   e.expected["gcr"] = true;
                   e.expected["jacobi"] = true;
                   return e;
                 }});
    v.push_back({"symplectic-r2", [] {
                   GCRStructure g = symplectic_r2();
                   Entry e = courant_entry("symplectic-r2", "generalized complex structure of dx^dy",
                                           g.bundle.presentation());
                   e.gcr = g;
                   e.expected["gcr"] = true;
                   return e;
                 }});
    for (const auto& ex : cr_examples()) {
      std::string name = ex.name;
      v.push_back({name, [name] {
                     for (auto& x : cr_examples()) {
                       if (x.name != name) continue;
                       Entry e = courant_entry(name, "almost CR structure", x.presentation);
                       e.gcr = cr_to_gcr(x.presentation, x.distribution, x.j);
                       e.expected["gcr"] = x.valid;
                       return e;
                     }
                     throw std::logic_error("missing CR example");
                   }});
    }
    for (const auto& p : point_algebras()) {
      std::string name = p.name;
      v.push_back({name, [name] {
                     for (auto& q : point_algebras()) {
                       if (q.name != name) continue;
                       return courant_entry(name, "Lie algebra over a point",
                                            CourantPresentation(q.algebra, q.module, AForm()));
                     }
                     throw std::logic_error("missing point algebra");
                   }});
    }
    return v;
  }();
  return r;
}

}  // namespace detail

inline std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& [n, f] : detail::registry()) out.push_back(n);
  return out;
}

inline Entry build(const std::string& name) {
  for (const auto& [n, f] : detail::registry())
    if (n == name) return f();
  throw std::invalid_argument("unknown catalog entry '" + name + "'");
}

}  // namespace avc::catalog

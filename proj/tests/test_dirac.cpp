#include "catch_amalgamated.hpp"

#include "avc/catalog.hpp"
#include "avc/dirac.hpp"
#include "avc/random.hpp"

using namespace avc;

namespace {

RingElem var(const CourantPresentation& c, const char* name) {
  return RingElem::variable(c.ring(), name);
}

/// {X + i_X omega} on the frame of A.
Subbundle graph(const CourantPresentation& c, const AForm& omega) {
  Subbundle l;
  for (int i = 0; i < c.rank_a(); ++i) {
    CourantSection e = c.frame(i);
    e.xi += contract(e.x, omega);
    l.generators.push_back(e);
  }
  return l;
}

AForm two_form(const CourantPresentation& c, int i, int j, const RingElem& f) {
  AForm w(c.rank_a(), 1);
  w.add(mask_of({i, j}), 0, f);
  return w;
}

Subbundle tangent(const CourantPresentation& c) {
  Subbundle l;
  for (int i = 0; i < c.rank_a(); ++i) l.generators.push_back(c.frame(i));
  return l;
}

}  // namespace

TEST_CASE("orthogonal complements", "[dirac]") {
  CourantPresentation r2 = catalog::standard_courant(2);
  Subbundle tm = tangent(r2);
  CHECK(same_span(r2, perp(r2, tm), tm));
  CHECK(intersect_with_a(r2, tm) == 2);

  CourantPresentation r1 = catalog::standard_courant(1);
  Subbundle line{{r1.frame(0)}, {}};
  Subbundle lp = perp(r1, line);
  CHECK(rank(r1, lp) == 1);
  CHECK(same_span(r1, lp, line));

  Subbundle g = graph(r2, two_form(r2, 0, 1, RingElem(1)));
  CHECK(same_span(r2, perp(r2, g), g));
  CHECK(intersect_with_a(r2, g) == 0);

  CHECK(rank(r2, perp(r2, Subbundle{})) == 4);
}

TEST_CASE("complement is an involution", "[dirac][property]") {
  CourantPresentation c = catalog::standard_courant(2);
  Sampler rng(17);
  for (int n = 0; n < 30; ++n) {
    Subbundle l;
    int k = rng.uniform(1, 3);
    for (int i = 0; i < k; ++i)
      l.generators.push_back({rng.vec(c.ring(), 2, 2, 1), rng.form(c.ring(), 2, 1, 1, 2, 1)});
    Subbundle lp = perp(c, l);
    CHECK(rank(c, l) + rank(c, lp) == 4);
    CHECK(same_span(c, perp(c, lp), l));
  }
}

TEST_CASE("membership respects declared denominators", "[dirac]") {
  CourantPresentation c = catalog::standard_courant(1);
  RingElem x = var(c, "x");
  Subbundle l{{x * c.frame(0)}, {}};
  CHECK_FALSE(contains(c, l, c.frame(0)));
  CHECK(contains(c, l, x * x * c.frame(0)));
  CHECK_FALSE(contains(c, l, c.frame(1)));
  l.denominators.push_back(x);
  CHECK(contains(c, l, c.frame(0)));
}

TEST_CASE("Dirac structures", "[dirac]") {
  CourantPresentation r2 = catalog::standard_courant(2);
  CHECK(is_dirac(r2, tangent(r2)).dirac());
  DiracVerdict g = is_dirac(r2, graph(r2, two_form(r2, 0, 1, RingElem(1))));
  CHECK(g.dirac());
  CHECK(g.report.passed());

  CourantPresentation r3 = catalog::standard_courant(3);
  RingElem z = var(r3, "z");
  Subbundle gz = graph(r3, two_form(r3, 0, 1, z));
  DiracVerdict v = is_dirac(r3, gz);
  CHECK(v.lagrangian);
  CHECK_FALSE(v.involutive);
  const Check* inv = v.report.find("involutive");
  REQUIRE(inv);
  CHECK(inv->witness == std::vector<int>{1, 2});
  CHECK(inv->residual == "X: [0, 0, 0], xi: [1]*e^{3}");

  AForm h(3, 1);
  h.add(mask_of({0, 1, 2}), 0, RingElem(r3.ring(), 1));
  CourantPresentation twisted = catalog::standard_courant(3, h);
  CHECK(is_dirac(twisted, gz).dirac());

  // half rank fails the rank check only
  Subbundle half{{r2.frame(0)}, {}};
  DiracVerdict hv = is_dirac(r2, half);
  CHECK_FALSE(hv.lagrangian);
  CHECK_FALSE(hv.report.find("rank")->pass);
  CHECK(hv.report.find("isotropic")->pass);
}

TEST_CASE("graph of omega is Dirac for H = d omega", "[dirac][property]") {
  CourantPresentation c = catalog::standard_courant(3);
  Cartan cart = c.cartan();
  Sampler rng(5);
  for (int n = 0; n < 10; ++n) {
    AForm omega = rng.form(c.ring(), 3, 1, 2, 2, 2);
    CourantPresentation tw = change_splitting(catalog::standard_courant(3), -omega);
    CHECK(tw.h() == cart.d(omega));
    Subbundle l = graph(tw, omega);
    DiracVerdict v = is_dirac(tw, l);
    CHECK(v.dirac());
    for (const auto& e : l.generators) CHECK(courant_bracket(tw, e, e).is_zero());
    CHECK(projection_closed(tw, l).pass);
  }
}

TEST_CASE("contact distribution is Lagrangian but not Dirac", "[dirac]") {
  CourantPresentation c = catalog::standard_courant(3);
  RingElem x = var(c, "x");
  Subbundle l{{c.frame(0), c.frame(1) + x * c.frame(2), c.frame(5) - x * c.frame(4)}, {}};
  DiracVerdict v = is_dirac(c, l);
  CHECK(v.lagrangian);
  CHECK_FALSE(v.involutive);
  Check pc = projection_closed(c, l);
  CHECK_FALSE(pc.pass);
  CHECK(pc.witness == std::vector<int>{1, 2});
  CHECK(intersect_with_a(c, l) == 2);
}

TEST_CASE("complex conjugate", "[dirac]") {
  CourantPresentation c = catalog::standard_courant(2);
  RingElem i = RingElem(c.ring(), 1).scaled(Scalar::imag_unit());
  Subbundle l{{c.frame(0) + i * c.frame(1), c.frame(2) + i * c.frame(3)}, {}};
  Subbundle lb = conjugate(l);
  CHECK_FALSE(same_span(c, l, lb));
  CHECK(same_span(c, conjugate(lb), l));
  Subbundle both = l;
  both.generators.insert(both.generators.end(), lb.generators.begin(), lb.generators.end());
  CHECK(rank(c, both) == 4);
}

#include "catch_amalgamated.hpp"

#include "avc/catalog.hpp"
#include "avc/dirac.hpp"
#include "avc/linalg.hpp"
#include "avc/random.hpp"
#include "avc/schouten.hpp"
#include "oracle.hpp"

using namespace avc;

namespace {

int sign_of(int e) { return e % 2 ? -1 : 1; }

Multivector signed_mv(int s, const Multivector& p) { return s > 0 ? p : -p; }

std::set<int> grades(const Multivector& p) {
  std::set<int> out;
  for (const auto& [m, c] : p.terms())
    for (const auto& [g, f] : c.parts()) out.insert(g);
  return out;
}

struct Fixture {
  std::string name;
  LieAlgebroid a;
  AModule v;
  int min_grade;
  int max_grade;
};

std::vector<Fixture> fixtures() {
  std::vector<Fixture> out;
  auto e = catalog::e1m(2);
  out.push_back({"e1m(2)", e.algebroid(), e.module(), -1, 1});
  auto r3 = catalog::standard_courant(3);
  out.push_back({"R3", r3.algebroid(), r3.module(), 0, 0});
  for (const auto& p : catalog::point_algebras())
    if (p.name == "heisenberg-weight" || p.name == "sl2")
      out.push_back({p.name, p.algebra, p.module, -1, 1});
  return out;
}

Multivector xy_field(const RingPtr& ring, const char* a, const char* b) {
  Multivector p(3);
  p.add(mask_of({0, 1}), 0, RingElem::variable(ring, a));
  if (b) p.add(mask_of({1, 2}), 0, RingElem::variable(ring, b));
  return p;
}

}  // namespace

TEST_CASE("Schouten examples", "[schouten]") {
  CourantPresentation r2 = catalog::standard_courant(2);
  Cartan c2 = r2.cartan();
  RingElem x = RingElem::variable(r2.ring(), "x");
  Multivector e1 = frame_multivector(2, bit(0));
  Multivector xe2 = frame_multivector(2, bit(1), x);
  CHECK(schouten(c2, e1, xe2) == frame_multivector(2, bit(1)));

  auto h = catalog::point_algebra("heisenberg", 3, {{0, 1, 2, 1}});
  Cartan ch(h.algebra, h.module);
  Multivector xy = frame_multivector(3, mask_of({0, 1}));
  CHECK(schouten(ch, xy, xy) == frame_multivector(3, mask_of({0, 1, 2}), RingElem(2)));

  // [X ^ Y, f] = Y(f) X - X(f) Y
  RingElem y = RingElem::variable(r2.ring(), "y");
  Multivector f = frame_multivector(2, 0, x * x * y);
  Multivector expect(2);
  expect.add(bit(0), 0, x * x);
  expect.add(bit(1), 0, RingElem(-2) * x * y);
  CHECK(schouten(c2, frame_multivector(2, mask_of({0, 1})), f) == expect);
}

TEST_CASE("Schouten bracket agrees with the coordinate formula", "[schouten][property]") {
  CourantPresentation r3 = catalog::standard_courant(3);
  Cartan cart = r3.cartan();
  Sampler rng(71);
  for (int n = 0; n < 120; ++n) {
    int dp = rng.uniform(0, 3);
    int dq = rng.uniform(0, 3);
    Multivector p = rng.multivector(r3.ring(), 3, dp);
    Multivector q = rng.multivector(r3.ring(), 3, dq);
    CHECK(schouten(cart, p, q) == oracle::schouten(p, dp, q, dq));
  }
}

TEST_CASE("Schouten identities", "[schouten][property]") {
  for (const auto& fx : fixtures()) {
    DYNAMIC_SECTION(fx.name) {
      Cartan cart(fx.a, fx.v);
      Schouten s(cart);
      const int r = fx.a.rank();
      Sampler rng(90 + r);
      auto draw = [&](int d) {
        return rng.multivector(fx.a.ring(), r, d, fx.min_grade, fx.max_grade);
      };
      for (int n = 0; n < 100; ++n) {
        int da = rng.uniform(0, r);
        int db = rng.uniform(0, r);
        int dc = rng.uniform(0, r);
        Multivector a = draw(da);
        Multivector b = draw(db);
        Multivector c = draw(dc);

        Multivector ab = s.bracket(a, b);
        if (!ab.is_zero()) {
          CHECK(ab.is_homogeneous(da + db - 1));
          // grades add; each term of a and b carries a single grade
          std::set<int> sums;
          for (int ga : grades(a))
            for (int gb : grades(b)) sums.insert(ga + gb);
          for (int g : grades(ab)) CHECK(sums.count(g) == 1);
        }

        int sab = sign_of((da - 1) * (db - 1));
        CHECK(ab == -signed_mv(sab, s.bracket(b, a)));

        CHECK(s.bracket(a, wedge(b, c)) ==
              wedge(ab, c) + signed_mv(sign_of((da - 1) * db), wedge(b, s.bracket(a, c))));

        CHECK(s.bracket(a, s.bracket(b, c)) ==
              s.bracket(ab, c) + signed_mv(sab, s.bracket(b, s.bracket(a, c))));
      }
    }
  }
}

TEST_CASE("contraction by a bracket is a double commutator", "[schouten][property]") {
  for (const auto& fx : fixtures()) {
    DYNAMIC_SECTION(fx.name) {
      Cartan cart(fx.a, fx.v);
      Schouten s(cart);
      const int r = fx.a.rank();
      Sampler rng(300 + r);
      for (int n = 0; n < 60; ++n) {
        int p = rng.uniform(1, r);
        int q = rng.uniform(1, r);
        Multivector pp = rng.multivector(fx.a.ring(), r, p, fx.min_grade, fx.max_grade);
        Multivector qq = rng.multivector(fx.a.ring(), r, q, fx.min_grade, fx.max_grade);
        GradedForm w = rng.graded_form(fx.a.ring(), r, rng.uniform(0, r), fx.min_grade,
                                       fx.max_grade);
        // A = [i_Q, d] has degree 1 - q; result is -(A i_P - (-1)^(p(1-q)) i_P A)
        auto apply_a = [&](const GradedForm& u) {
          GradedForm t = cart.d(interior(qq, u));
          GradedForm out = interior(qq, cart.d(u));
          return q % 2 ? out + t : out - t;
        };
        GradedForm first = apply_a(interior(pp, w));
        GradedForm second = interior(pp, apply_a(w));
        GradedForm rhs = (p * (1 - q)) % 2 ? -(first + second) : -(first - second);
        CHECK(interior(s.bracket(pp, qq), w) == rhs);
      }
    }
  }
}

TEST_CASE("Jacobi pairs", "[schouten]") {
  CourantPresentation r3 = catalog::standard_courant(3);
  Cartan cart = r3.cartan();
  const auto& ring = r3.ring();
  RingElem x = RingElem::variable(ring, "x");
  RingElem y = RingElem::variable(ring, "y");

  // contact structure dz - y dx
  Multivector lambda = wedge(vector_field(RVec{RingElem(ring, 1), RingElem(ring, 0), y}),
                             frame_multivector(3, bit(1)));
  Multivector e = frame_multivector(3, bit(2));
  JacobiVerdict v = check_jacobi_pair(cart, lambda, e, true);
  CHECK(v.passed());
  CHECK(v.nondegenerate());

  JacobiVerdict flipped = check_jacobi_pair(cart, lambda, -e);
  CHECK_FALSE(flipped.self.pass);
  CHECK(flipped.with_e.pass);

  // x d/dx ^ d/dy, decided by the coordinate formula
  Multivector xl = frame_multivector(3, mask_of({0, 1}), x);
  for (const Multivector& ee : {Multivector(3), frame_multivector(3, bit(2))}) {
    Multivector ll = oracle::schouten(xl, 2, xl, 2);
    bool expect = ll == RingElem(-2) * wedge(xl, ee) &&
                  oracle::schouten(xl, 2, ee, 1).is_zero();
    JacobiVerdict jv = check_jacobi_pair(cart, xl, ee, true);
    CHECK(jv.passed() == expect);
    CHECK(jv.nondegenerate() == !ee.is_zero());
  }

  CHECK_THROWS(check_jacobi_pair(catalog::standard_courant(2).cartan(),
                                 frame_multivector(2, mask_of({0, 1})), frame_multivector(2, 1), true));

  auto gauge_ok = [&](const RingElem& f) {
    auto [l2, e2] = jacobi_gauge(cart, lambda, e, f);
    JacobiVerdict g = check_jacobi_pair(cart, l2, e2, true);
    return g.passed() && g.nondegenerate();
  };
  CHECK(gauge_ok(RingElem(ring, 2)));
  CHECK(gauge_ok(RingElem(ring, 1) + x * x));
  Sampler rng(44);
  for (int n = 0; n < 20; ++n) {
    RingElem p = rng.poly(ring, 2, 1);
    CHECK(gauge_ok(RingElem(ring, 1) + p * p));
  }
  CHECK_THROWS(jacobi_gauge(cart, lambda, e, RingElem(ring, 0)));

  // the pair built from the Poisson bivector x dx ^ dy passes after gauge too
  auto [l3, e3] = jacobi_gauge(cart, xy_field(ring, "x", nullptr), Multivector(3), RingElem(ring, 1) + y * y);
  CHECK(check_jacobi_pair(cart, l3, e3).passed());
}

TEST_CASE("cube of the sharp map", "[schouten]") {
  Multivector beta(4);
  beta.add(mask_of({0, 1}), 0, RingElem(1));
  beta.add(mask_of({2, 3}), 0, RingElem(1));
  GradedForm h(4);
  h.add(mask_of({0, 1, 2}), 0, RingElem(1));
  // beta~ sends e^1, e^2, e^3, e^4 to e_2, -e_1, e_4, -e_3
  CHECK(cube_sharp(beta, h) == frame_multivector(4, mask_of({0, 1, 3}), RingElem(-1)));
  CHECK(cube_sharp(beta, GradedForm(4)).is_zero());
}

TEST_CASE("twisted Poisson bivectors match Dirac graphs", "[schouten]") {
  CourantPresentation r4 = catalog::standard_courant(4);
  Cartan cart = r4.cartan();
  const auto& ring = r4.ring();
  RingElem y = RingElem::variable(ring, "y");

  AForm omega(4, 1);
  omega.add(mask_of({0, 1}), 0, RingElem(ring, 1));
  omega.add(mask_of({2, 3}), 0, RingElem(ring, 1));
  omega.add(mask_of({0, 2}), 0, y);
  AForm domega = cart.d(omega);
  REQUIRE_FALSE(domega.is_zero());

  // beta with -breve(i_X omega) beta = X
  RMatrix w(4, RVec(4, RingElem(ring, 0)));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) w[i][j] = oracle::eval(omega, {i, j}).with_ring(ring);
  REQUIRE(determinant(w) == RingElem(ring, 1));
  RMatrix b = adjugate(w);
  Multivector beta(4);
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k) beta.add(mask_of({j, k}), -1, b[j][k]);

  auto graph_of = [&](const CourantPresentation& c) {
    Subbundle l;
    for (int j = 0; j < 4; ++j) {
      GradedForm ej(4);
      ej.add(bit(j), 1, RingElem(ring, 1));
      RVec x = vector_components(-breve_contract(ej, beta));
      CourantSection s = c.frame(4 + j);
      for (int i = 0; i < 4; ++i) s.x[i] = x[i];
      l.generators.push_back(s);
    }
    return l;
  };
  {
    Subbundle g = graph_of(r4);
    for (int i = 0; i < 4; ++i) {
      CourantSection e = r4.frame(i);
      e.xi += contract(e.x, omega);
      CHECK(contains(r4, g, e));
    }
  }

  for (int scale : {0, 1, 2, -1}) {
    AForm h = RingElem(ring, scale) * domega;
    CourantPresentation c = catalog::standard_courant(4, h);
    bool dirac = is_dirac(c, graph_of(c)).dirac();
    bool poisson = check_twisted_poisson(cart, beta, to_graded(h)).pass;
    CHECK(dirac == (scale == 1));
    CHECK(poisson == dirac);
  }
}

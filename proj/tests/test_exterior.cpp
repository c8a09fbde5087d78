#include "catch_amalgamated.hpp"

#include "avc/exterior.hpp"
#include "avc/random.hpp"
#include "oracle.hpp"

using namespace avc;

namespace {

RingPtr xyz() { return make_ring({"x", "y", "z"}); }

AForm basis_form(int rank, std::initializer_list<int> idx, const RingElem& c = 1) {
  AForm w = AForm::scalar(rank);
  std::vector<int> v(idx);
  int s = sort_sign(v);
  std::sort(v.begin(), v.end());
  w.add(mask_from_indices(v), 0, s > 0 ? c : -c);
  return w;
}

Multivector basis_mv(int rank, std::initializer_list<int> idx, const RingElem& c = 1) {
  return frame_multivector(rank, mask_of(idx), c);
}

}  // namespace

TEST_CASE("wedge examples", "[exterior]") {
  auto r = xyz();
  RingElem x = RingElem::variable(r, "x");
  RingElem y = RingElem::variable(r, "y");
  CHECK(wedge(basis_form(3, {0}), basis_form(3, {0})).is_zero());
  CHECK(wedge(basis_form(3, {0}), basis_form(3, {1})) ==
        -wedge(basis_form(3, {1}), basis_form(3, {0})));
  CHECK(wedge(basis_form(3, {1}, x), basis_form(3, {2}, y)) == basis_form(3, {1, 2}, x * y));
  AForm valued(3, 1);
  valued.add(bit(0), 0, RingElem(1));
  AForm valued2 = valued;
  CHECK_THROWS(wedge(valued, valued2));
}

TEST_CASE("contraction examples", "[exterior]") {
  auto r = xyz();
  RingElem y = RingElem::variable(r, "y");
  RVec e1{RingElem(r, 1), RingElem(r, 0), RingElem(r, 0)};
  AForm c = contract(e1, basis_form(3, {0}));
  CHECK(c.coeff(0, 0) == RingElem(1));
  RVec x{RingElem(r, 1), RingElem(r, 0), y};
  CHECK(contract(x, basis_form(3, {2, 1})) == basis_form(3, {1}, y));
  CHECK(contract(x, AForm::scalar(3)).is_zero());
}

TEST_CASE("right contraction and pairing examples", "[exterior]") {
  Multivector e12 = basis_mv(2, {0, 1});
  Multivector got = breve_contract(basis_form(2, {0}), e12);
  CHECK(got == -basis_mv(2, {1}));
  GradedForm xi = to_graded(basis_form(2, {1}));
  CHECK(pair_eval(to_graded(wedge(basis_form(2, {1}), basis_form(2, {0}))), e12) ==
        pair_eval(xi, got));
  CHECK(pair_eval(basis_form(2, {0, 1}), e12) == GradedCoeff(1));
  CHECK(pair_eval(basis_form(2, {0}), basis_mv(2, {1})).is_zero());
  CHECK(pair_eval(basis_form(2, {0}), e12).is_zero());
  Multivector c = frame_multivector(2, 0, RingElem(3));
  CHECK(breve_contract(basis_form(2, {0}), c).is_zero());
}

TEST_CASE("wedge and contraction agree with the shuffle oracle", "[exterior][property]") {
  auto r = xyz();
  Sampler rng(7);
  const int rank = 5;
  for (int n = 0; n < 150; ++n) {
    int p = rng.uniform(0, 3);
    int q = rng.uniform(0, rank - p);
    AForm a = rng.form(r, rank, 0, p);
    AForm b = rng.form(r, rank, 2, q);
    CHECK(wedge(a, b) == oracle::wedge(a, p, b, q));
    RVec x = rng.vec(r, rank);
    if (q > 0) CHECK(contract(x, b) == oracle::contract(x, b, q));
    // graded commutativity and associativity
    AForm c = rng.form(r, rank, 0, rng.uniform(0, 2));
    AForm ab = wedge(a, b);
    AForm ba = wedge(b, a);
    CHECK(ab == ((p * q) % 2 ? -ba : ba));
    CHECK(wedge(wedge(a, c), b) == wedge(a, wedge(c, b)));
    // i_X is a derivation and squares to zero
    if (p > 0 && q > 0) {
      AForm lhs = contract(x, ab);
      AForm rhs = wedge(contract(x, a), b) + (p % 2 ? -wedge(a, contract(x, b)) : wedge(a, contract(x, b)));
      CHECK(lhs == rhs);
    }
    CHECK(contract(x, contract(x, b)).is_zero());
    RVec y = rng.vec(r, rank);
    CHECK(contract(x, contract(y, b)) == -contract(y, contract(x, b)));
  }
}

TEST_CASE("right contraction duality and derivation law", "[exterior][property]") {
  auto r = xyz();
  Sampler rng(8);
  const int rank = 4;
  for (int n = 0; n < 150; ++n) {
    int k = rng.uniform(1, 3);
    GradedForm xi = rng.graded_form(r, rank, k - 1, -1, 1);
    GradedForm eta = rng.graded_form(r, rank, 1, -1, 1);
    Multivector p = rng.multivector(r, rank, k, -1, 1);
    CHECK(pair_eval(wedge(xi, eta), p) == pair_eval(xi, breve_contract(eta, p)));

    int a = rng.uniform(0, 2);
    int b = rng.uniform(0, 2);
    Multivector pa = rng.multivector(r, rank, a, 0, 1);
    Multivector qb = rng.multivector(r, rank, b, 0, 1);
    Multivector lhs = breve_contract(eta, wedge(pa, qb));
    Multivector rhs = wedge(pa, breve_contract(eta, qb));
    Multivector tail = wedge(breve_contract(eta, pa), qb);
    rhs += (b % 2 ? -tail : tail);
    CHECK(lhs == rhs);

    // left contraction by a multivector is adjoint to left multiplication
    GradedForm w = rng.graded_form(r, rank, a + b, 0, 0);
    CHECK(pair_eval(w, wedge(pa, qb)) == pair_eval(interior(pa, w), qb));
  }
}

TEST_CASE("graded conversion", "[exterior]") {
  AForm w(3, 1);
  w.add(mask_of({0, 2}), 0, RingElem(5));
  GradedForm g = to_graded(w);
  CHECK(g.coeff(mask_of({0, 2})) == GradedCoeff(1, RingElem(5)));
  CHECK(from_graded(g, 1) == w);
  CHECK_THROWS(from_graded(g, 0));
  CHECK_THROWS(mask_of({2, 1}));
}

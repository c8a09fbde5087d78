#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "avc/exterior.hpp"
#include "avc/ring.hpp"

namespace avc {

/// Seeded generator of small random ring elements, forms and multivectors.
/// Bounded draws use plain modulo reduction so a seed reproduces the same
/// samples on every standard library.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed = 0) : gen_(seed) {}

  int uniform(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(gen_() % span);
  }
  bool coin(int percent) { return uniform(0, 99) < percent; }

  Scalar scalar(bool gaussian = false) {
    int num = uniform(-4, 4);
    int den = uniform(1, 3);
    Scalar s = Scalar::fraction(num, den);
    if (gaussian && coin(50)) s += Scalar(0, uniform(-2, 2));
    return s;
  }

  /// Up to max_terms monomials of coordinate degree at most max_deg; the
  /// exponential generators appear with exponents in [-1, 1].
  RingElem poly(const RingPtr& ring, int max_terms = 3, int max_deg = 2, bool gaussian = false) {
    RingElem r(ring, 0);
    int terms = uniform(0, max_terms);
    for (int k = 0; k < terms; ++k) {
      Exponents e{};
      int budget = uniform(0, max_deg);
      for (int s = 0; s < budget && ring->num_coords() > 0; ++s)
        ++e[uniform(0, ring->num_coords() - 1)];
      for (int l = 0; l < ring->num_exps(); ++l)
        e[ring->num_coords() + l] = static_cast<std::int16_t>(uniform(-1, 1));
      r += RingElem::monomial(ring, e, scalar(gaussian));
    }
    return r;
  }

  RingElem nonzero_poly(const RingPtr& ring, int max_terms = 3, int max_deg = 2) {
    for (;;) {
      RingElem r = poly(ring, max_terms, max_deg);
      if (!r.is_zero()) return r;
    }
  }

  RVec vec(const RingPtr& ring, int n, int max_terms = 2, int max_deg = 2) {
    RVec v(n);
    for (auto& x : v) x = poly(ring, max_terms, max_deg);
    return v;
  }

  AForm form(const RingPtr& ring, int rank_a, int rank_v, int degree, int max_terms = 2,
             int max_deg = 2) {
    AForm w(rank_a, rank_v);
    for (Mask m : masks_of_degree(rank_a, degree)) {
      if (!coin(60)) continue;
      AForm::Coeff c(w.width());
      for (auto& x : c) x = poly(ring, max_terms, max_deg);
      w.add(m, c);
    }
    return w;
  }

  /// Mixed-degree form.
  AForm any_form(const RingPtr& ring, int rank_a, int rank_v) {
    AForm w(rank_a, rank_v);
    for (int k = 0; k <= rank_a; ++k) w += form(ring, rank_a, rank_v, k, 2, 1);
    return w;
  }

  GradedForm graded_form(const RingPtr& ring, int rank_a, int degree, int min_grade,
                         int max_grade) {
    GradedForm w(rank_a);
    for (Mask m : masks_of_degree(rank_a, degree)) {
      if (!coin(60)) continue;
      w.add(m, uniform(min_grade, max_grade), poly(ring, 2, 2));
    }
    return w;
  }

  Multivector multivector(const RingPtr& ring, int rank_a, int degree, int min_grade = 0,
                          int max_grade = 0, int max_terms = 2, int max_deg = 2) {
    Multivector p(rank_a);
    for (Mask m : masks_of_degree(rank_a, degree)) {
      if (!coin(60)) continue;
      p.add(m, uniform(min_grade, max_grade), poly(ring, max_terms, max_deg));
    }
    return p;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace avc

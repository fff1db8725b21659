#include <doctest.h>

#include "lindyn/operators.hpp"
#include "support/gen.hpp"

using namespace lindyn;

namespace {
SparseVector e(std::size_t i) { return SparseVector::unit(i); }
SparseFunctional es(std::size_t i) { return SparseFunctional::unit(i); }

// The swap on span{e0, e1}: S u = u + (g-f)(u) e0 + (f-g)(u) e1 with
// f = e0*, g = e1*. An involution, used as the canonical non-scalar
// similarity throughout these tests.
OperatorExpr swap01() {
  const SparseFunctional gf = es(1) - es(0);
  return OperatorExpr::finite_rank_update({UpdatePair{e(0), gf}, UpdatePair{e(1), -gf}});
}
}  // namespace

TEST_SUITE("operators") {

TEST_CASE("apply on each node kind") {
  CHECK(apply(OperatorExpr::backward_shift(), e(2)) == e(1));
  CHECK(apply(OperatorExpr::backward_shift(), e(0)).is_zero());
  CHECK(apply(OperatorExpr::forward_shift(), e(4)) == e(5));
  CHECK(apply(OperatorExpr::scalar_multiple(Rational(-3)), e(1)) == e(1).scaled(Rational(-3)));
  // S u = u + e0*(u) e1 - e0*(u) e0 sends e0 to e1.
  const OperatorExpr s =
      OperatorExpr::finite_rank_update({UpdatePair{e(1), es(0)}, UpdatePair{-e(0), es(0)}});
  CHECK(apply(s, e(0)) == e(1));
  // Compose is right-to-left: B first, then the scalar.
  const OperatorExpr two_b =
      OperatorExpr::compose({OperatorExpr::scalar_multiple(Rational(2)), OperatorExpr::backward_shift()});
  CHECK(apply(two_b, e(1)) == e(0).scaled(Rational(2)));
}

TEST_CASE("dual_apply on shifts and scalars") {
  CHECK(dual_apply(OperatorExpr::backward_shift(), es(0)) == es(1));
  CHECK(dual_apply(OperatorExpr::forward_shift(), es(0)).is_zero());
  CHECK(dual_apply(OperatorExpr::forward_shift(), es(3)) == es(2));
  CHECK(dual_apply(OperatorExpr::scalar_multiple(Rational(3)), es(5)) == es(5).scaled(Rational(3)));
}

TEST_CASE("dual_apply on the rank-two update with a=-1, b=1, c=0") {
  // S u = u - f(u) x + f(u) y + g(u) x with x = e0, y = e1, f = e0*, g = e1*.
  const SparseVector v1 = -e(0) + e(1);  // a x + b y
  const SparseVector v2 = e(0);          // b x + c y
  const OperatorExpr s =
      OperatorExpr::finite_rank_update({UpdatePair{v1, es(0)}, UpdatePair{v2, es(1)}});
  CHECK(apply(s, e(0)) == e(1));
  CHECK(dual_apply(s, es(0)) == es(1));
}

TEST_CASE("power_apply") {
  const OperatorExpr two_b = scaled_backward_shift(Rational(2));
  CHECK(power_apply(two_b, e(3).scaled(Rational(1, 8)), 0) == e(3).scaled(Rational(1, 8)));
  // (2B)^3 cancels the weight 2^-3 and shifts the support three left.
  CHECK(power_apply(two_b, e(3).scaled(Rational(1, 8)), 3) == e(0));
  CHECK(power_apply(OperatorExpr::forward_shift(), e(0), 4) == e(4));
}

TEST_CASE("dual_power_apply matches iterated dual application") {
  const OperatorExpr two_b = scaled_backward_shift(Rational(2));
  // ((2B)')^n sends e0* to 2^n e_n*.
  CHECK(dual_power_apply(two_b, es(0), 5) == es(5).scaled(Rational(32)));
  testgen::Rng rng(20240113);
  const OperatorExpr op = testgen::any_expr(rng, 1);
  SparseFunctional phi = testgen::functional(rng);
  SparseFunctional iterated = phi;
  for (int n = 0; n <= 6; ++n) {
    CHECK(dual_power_apply(op, phi, static_cast<std::size_t>(n)) == iterated);
    iterated = dual_apply(op, iterated);
  }
}

TEST_CASE("invert_update: rank-one case, singular case, involution") {
  // u + e0*(u) e0 inverts to u - (1/2) e0*(u) e0.
  const OperatorExpr up = OperatorExpr::finite_rank_update({UpdatePair{e(0), es(0)}});
  const OperatorExpr inv = invert_update(up);
  CHECK(apply(inv, e(0)) == e(0).scaled(Rational(1, 2)));
  testgen::Rng rng(20240105);
  for (int i = 0; i < 20; ++i) {
    const SparseVector u = testgen::vector(rng);
    CHECK(apply(inv, apply(up, u)) == u);
    CHECK(apply(up, apply(inv, u)) == u);
  }
  // u - e0*(u) e0 annihilates e0.
  CHECK_THROWS_AS(invert_update(OperatorExpr::finite_rank_update({UpdatePair{-e(0), es(0)}})),
                  NotInvertible);
  // The swap is an involution: its inverse acts exactly like itself.
  const OperatorExpr sw = swap01();
  const OperatorExpr sw_inv = invert_update(sw);
  for (int i = 0; i < 20; ++i) {
    const SparseVector u = testgen::vector(rng);
    CHECK(apply(sw_inv, u) == apply(sw, u));
  }
}

TEST_CASE("conjugate: scalars commute, identity is neutral") {
  testgen::Rng rng(20240106);
  const OperatorExpr b = OperatorExpr::backward_shift();
  const OperatorExpr r = conjugate(OperatorExpr::scalar_multiple(Rational(2)), b);
  const OperatorExpr r_id = conjugate(OperatorExpr::identity(), b);
  for (int i = 0; i < 20; ++i) {
    const SparseVector u = testgen::vector(rng);
    CHECK(apply(r, u) == apply(b, u));
    CHECK(apply(r_id, u) == apply(b, u));
  }
  CHECK_THROWS_AS(conjugate(OperatorExpr::backward_shift(), b), NotInvertible);
  CHECK_THROWS_AS(conjugate(OperatorExpr::scalar_multiple(Rational(0)), b), NotInvertible);
}

TEST_CASE("conjugate of the shift by the swap, evaluated in three steps") {
  // Oracle: S^{-1} e1 = e0 (swap), B e0 = 0, S 0 = 0.
  const OperatorExpr sw = swap01();
  const SparseVector step1 = apply(invert_expr(sw), e(1));
  CHECK(step1 == e(0));
  const SparseVector step2 = apply(OperatorExpr::backward_shift(), step1);
  CHECK(step2.is_zero());
  const SparseVector step3 = apply(sw, step2);
  const OperatorExpr r = conjugate(sw, OperatorExpr::backward_shift());
  CHECK(apply(r, e(1)) == step3);
  CHECK(apply(r, e(1)).is_zero());
}

TEST_CASE("duality identity on random operators and probes") {
  testgen::Rng rng(20240107);
  for (int i = 0; i < 40; ++i) {
    const OperatorExpr op = testgen::any_expr(rng, 2);
    for (int p = 0; p < 5; ++p) {
      const SparseFunctional phi = testgen::functional(rng);
      const SparseVector u = testgen::vector(rng);
      CHECK(pair(dual_apply(op, phi), u) == pair(phi, apply(op, u)));
    }
  }
}

TEST_CASE("inverse round-trip on random invertible expressions") {
  testgen::Rng rng(20240108);
  for (int i = 0; i < 25; ++i) {
    const OperatorExpr s = testgen::invertible_expr(rng, 2);
    const OperatorExpr s_inv = invert_expr(s);
    for (int p = 0; p < 4; ++p) {
      const SparseVector u = testgen::vector(rng);
      CHECK(apply(s_inv, apply(s, u)) == u);
      CHECK(apply(s, apply(s_inv, u)) == u);
    }
  }
}

TEST_CASE("linearity of apply") {
  testgen::Rng rng(20240109);
  for (int i = 0; i < 30; ++i) {
    const OperatorExpr op = testgen::any_expr(rng, 2);
    const Rational a = testgen::rational(rng);
    const Rational b = testgen::rational(rng);
    const SparseVector u = testgen::vector(rng);
    const SparseVector v = testgen::vector(rng);
    CHECK(apply(op, u.scaled(a) + v.scaled(b)) ==
          apply(op, u).scaled(a) + apply(op, v).scaled(b));
  }
}

TEST_CASE("conjugation orbit identity up to n = 50") {
  testgen::Rng rng(20240110);
  const OperatorExpr t = scaled_backward_shift(Rational(2));
  for (int i = 0; i < 10; ++i) {
    const OperatorExpr s = testgen::invertible_expr(rng, 1);
    const OperatorExpr r = conjugate(s, t);
    const SparseVector u = testgen::vector(rng);
    SparseVector left = apply(s, u);
    SparseVector right = u;
    for (std::size_t n = 0; n <= 50; ++n) {
      CHECK(left == apply(s, right));
      left = apply(r, left);
      right = apply(t, right);
    }
  }
}

TEST_CASE("rank-two update fixes the common kernel of its functionals") {
  // For S u = u + a f(u) x + b f(u) y + b g(u) x + c g(u) y and any probe u
  // with f(u) = g(u) = 0, S u = u.
  testgen::Rng rng(20240111);
  for (int i = 0; i < 50; ++i) {
    const auto q = testgen::admissible_quadruple(rng);
    const Rational a = testgen::rational(rng);
    const Rational b = testgen::rational(rng);
    const Rational c = testgen::rational(rng);
    const OperatorExpr s = OperatorExpr::finite_rank_update(
        {UpdatePair{q.x.scaled(a) + q.y.scaled(b), q.f},
         UpdatePair{q.x.scaled(b) + q.y.scaled(c), q.g}});
    // Project a random probe into ker f (and ker g when f, g independent):
    // solve a 2x2 system on coordinates where (f, g) has a nonzero minor.
    SparseVector u = testgen::vector(rng, 4, 9);
    bool projected = false;
    for (std::size_t ci = 0; ci <= 9 && !projected; ++ci) {
      for (std::size_t cj = ci + 1; cj <= 9 && !projected; ++cj) {
        const Rational det = q.f.coeff(ci) * q.g.coeff(cj) - q.f.coeff(cj) * q.g.coeff(ci);
        if (det.is_zero()) continue;
        const Rational fu = pair(q.f, u);
        const Rational gu = pair(q.g, u);
        const Rational si = (fu * q.g.coeff(cj) - gu * q.f.coeff(cj)) / det;
        const Rational sj = (gu * q.f.coeff(ci) - fu * q.g.coeff(ci)) / det;
        u = u - e(ci).scaled(si) - e(cj).scaled(sj);
        projected = true;
      }
    }
    if (!projected) continue;  // f, g dependent; skip this draw
    REQUIRE(pair(q.f, u).is_zero());
    REQUIRE(pair(q.g, u).is_zero());
    CHECK(apply(s, u) == u);
  }
}

TEST_CASE("growth bound caps the squared norm on random probes") {
  testgen::Rng rng(20240112);
  for (int i = 0; i < 30; ++i) {
    const OperatorExpr op = testgen::any_expr(rng, 2);
    const Rational bound = growth_bound_sq(op);
    for (int p = 0; p < 4; ++p) {
      const SparseVector u = testgen::vector(rng);
      CHECK(norm_sq(apply(op, u)) <= bound * norm_sq(u));
    }
  }
}

TEST_CASE("operator tuple requires at least one member") {
  CHECK_THROWS_AS(OperatorTuple({}), InvalidInput);
  const OperatorTuple t({OperatorExpr::identity(), OperatorExpr::backward_shift()});
  CHECK(t.size() == 2);
}

}  // TEST_SUITE

#include <doctest.h>

#include "lindyn/serialize.hpp"
#include "lindyn/synthesis.hpp"
#include "support/gen.hpp"

using namespace lindyn;

namespace {
SparseVector e(std::size_t i) { return SparseVector::unit(i); }

GridSpec unit_grid(std::size_t d) { return GridSpec{d, {Rational(0), Rational(1)}}; }

GridSpec sign_grid(std::size_t d) { return GridSpec{d, {Rational(-1), Rational(0), Rational(1)}}; }
}  // namespace

TEST_SUITE("synthesis") {

TEST_CASE("enumerate_targets input validation") {
  CHECK_THROWS_AS(enumerate_targets(unit_grid(1), 0, 1), InvalidInput);
  CHECK_THROWS_AS(enumerate_targets(unit_grid(1), 1, 0), InvalidInput);
  CHECK_THROWS_AS(enumerate_targets(GridSpec{1, {Rational(0), Rational(1, 3)}}, 1, 1),
                  InvalidInput);
  // d = 1 over {0, 1} has exactly two vectors; three tuples do not exist.
  CHECK_THROWS_AS(enumerate_targets(unit_grid(1), 3, 1), InvalidInput);
}

TEST_CASE("enumerate_targets graded order starts at zero, then e0") {
  const TargetSchedule one = enumerate_targets(unit_grid(1), 1, 1);
  REQUIRE(one.targets.size() == 1);
  CHECK(one.targets[0][0].is_zero());
  const TargetSchedule two = enumerate_targets(unit_grid(1), 2, 1);
  CHECK(two.targets[1][0] == e(0));
  CHECK(two.tolerance_sq[0] == Rational(1, 4));
  CHECK(two.tolerance_sq[1] == Rational(1, 16));
}

TEST_CASE("enumerate_targets golden prefix for d=2, C={0,-1,1}, m=2") {
  const TargetSchedule s = enumerate_targets(sign_grid(2), 3, 2);
  REQUIRE(s.targets.size() == 3);
  // Frozen from the graded order: (0,0), then zero paired with the two
  // signed singletons at coordinate 0.
  CHECK(s.targets[0][0].is_zero());
  CHECK(s.targets[0][1].is_zero());
  CHECK(s.targets[1][0].is_zero());
  CHECK(s.targets[1][1] == -e(0));
  CHECK(s.targets[2][0].is_zero());
  CHECK(s.targets[2][1] == e(0));
}

TEST_CASE("enumerate_targets is deterministic") {
  const TargetSchedule a = enumerate_targets(sign_grid(3), 25, 2);
  const TargetSchedule b = enumerate_targets(sign_grid(3), 25, 2);
  CHECK(a == b);
  CHECK(dump_canonical(schedule_to_json(a)) == dump_canonical(schedule_to_json(b)));
}

TEST_CASE("synthesize: single target e0 hits exactly at n = 1") {
  TargetSchedule schedule;
  schedule.m = 1;
  schedule.targets.push_back({e(0)});
  schedule.tolerance_sq.push_back(Rational(1, 4));
  const SynthesisCertificate cert = synthesize(Rational(2), schedule);
  CHECK(cert.vectors[0] == e(1).scaled(Rational(1, 2)));
  REQUIRE(cert.visits.size() == 1);
  CHECK(cert.visits[0].time == 1);
  CHECK(cert.visits[0].error_sq_bound == Rational(0));
  CHECK(cert.horizon == 1);
  CHECK(power_apply(scaled_backward_shift(Rational(2)), cert.vectors[0], 1) == e(0));
}

TEST_CASE("synthesize: one tuple, two components, shared visit time") {
  TargetSchedule schedule;
  schedule.m = 2;
  schedule.targets.push_back({e(0), e(1)});
  schedule.tolerance_sq.push_back(Rational(1, 4));
  const SynthesisCertificate cert = synthesize(Rational(2), schedule);
  REQUIRE(cert.visits.size() == 1);
  const std::size_t n1 = cert.visits[0].time;
  CHECK(n1 == 1);
  CHECK(cert.vectors[0] == e(n1).scaled(Rational(1, 2)));
  CHECK(cert.vectors[1] == e(n1 + 1).scaled(Rational(1, 2)));
  const OperatorExpr op = scaled_backward_shift(Rational(2));
  CHECK(power_apply(op, cert.vectors[0], n1) == e(0));
  CHECK(power_apply(op, cert.vectors[1], n1) == e(1));
}

TEST_CASE("synthesize: two blocks, exact tail at the first visit") {
  TargetSchedule schedule;
  schedule.m = 1;
  schedule.targets.push_back({e(0)});
  schedule.targets.push_back({e(1)});
  schedule.tolerance_sq.push_back(Rational(1, 4));
  schedule.tolerance_sq.push_back(Rational(1, 16));
  const SynthesisCertificate cert = synthesize(Rational(2), schedule);
  REQUIRE(cert.visits.size() == 2);
  // Frozen from the gap rule: n1 = 1, and n2 = 3 is the smallest time with
  // 2 * 4^{n1} <= (1/4) 4^{n2} past the disjointness minimum.
  CHECK(cert.visits[0].time == 1);
  CHECK(cert.visits[1].time == 3);
  CHECK(cert.vectors[0] ==
        e(1).scaled(Rational(1, 2)) + e(4).scaled(Rational(1, 8)));
  // Analytic tail at visit 1 is 4^{1-3} * 1 = 1/16; the replay agrees.
  CHECK(cert.visits[0].error_sq_bound == Rational(1, 16));
  CHECK(cert.visits[1].error_sq_bound == Rational(0));
  const OperatorExpr op = scaled_backward_shift(Rational(2));
  CHECK(norm_sq(power_apply(op, cert.vectors[0], 1) - e(0)) == Rational(1, 16));
  CHECK(power_apply(op, cert.vectors[0], 3) == e(1));
}

TEST_CASE("synthesize rejects bad inputs") {
  TargetSchedule schedule;
  schedule.m = 1;
  schedule.targets.push_back({e(0)});
  schedule.tolerance_sq.push_back(Rational(1, 4));
  CHECK_THROWS_AS(synthesize(Rational(3, 2), schedule), InvalidInput);
  CHECK_THROWS_AS(synthesize(Rational(2), TargetSchedule{}), InvalidInput);
}

TEST_CASE("certificate visits pass post-hoc verification on enumerated schedules") {
  const TargetSchedule schedule = enumerate_targets(sign_grid(3), 12, 2);
  const SynthesisCertificate cert = synthesize(Rational(2), schedule);
  const CertificateCheck check = verify_certificate(cert, schedule);
  CHECK(check.pass);
  CHECK(check.visits.size() == 24);
  // The recorded bound is exactly the worst component error, not just an
  // upper estimate: the tail blocks live on disjoint coordinates.
  for (const auto& visit : cert.visits) {
    Rational worst;
    for (std::size_t i = 0; i < schedule.m; ++i) {
      const Rational err = check.visits[visit.target_index * schedule.m + i].error_sq;
      if (worst < err) worst = err;
    }
    CHECK(worst == visit.error_sq_bound);
  }
}

TEST_CASE("earlier blocks vanish exactly: visit errors avoid the target support") {
  const TargetSchedule schedule = enumerate_targets(sign_grid(2), 8, 1);
  const SynthesisCertificate cert = synthesize(Rational(2), schedule);
  const OperatorExpr op = scaled_backward_shift(Rational(2));
  for (std::size_t k = 0; k < schedule.targets.size(); ++k) {
    const SparseVector& target = schedule.targets[k][0];
    const SparseVector reached = power_apply(op, cert.vectors[0], cert.visits[k].time);
    const SparseVector err = reached - target;
    if (err.is_zero()) continue;
    // Any residual lives strictly beyond the target's own support: the
    // target coordinates are hit exactly, the error is purely forward tail.
    const std::size_t extent = target.max_index() ? *target.max_index() + 1 : 0;
    CHECK(*err.min_index() >= extent + 1);
  }
}

TEST_CASE("synthesize with negative and non-dyadic weights") {
  TargetSchedule schedule;
  schedule.m = 1;
  schedule.targets.push_back({e(0)});
  schedule.targets.push_back({e(1)});
  schedule.tolerance_sq.push_back(Rational(1, 4));
  schedule.tolerance_sq.push_back(Rational(1, 16));
  for (const Rational& lambda : {Rational(-2), Rational(5, 2)}) {
    const SynthesisCertificate cert = synthesize(lambda, schedule);
    CHECK(verify_certificate(cert, schedule).pass);
  }
}

TEST_CASE("determinism: identical inputs produce identical certificates") {
  const TargetSchedule schedule = enumerate_targets(sign_grid(3), 10, 3);
  const SynthesisCertificate a = synthesize(Rational(2), schedule);
  const SynthesisCertificate b = synthesize(Rational(2), schedule);
  CHECK(a == b);
  CHECK(dump_canonical(certificate_to_json(a)) == dump_canonical(certificate_to_json(b)));
}

TEST_CASE("serial and parallel certificate verification agree") {
  const TargetSchedule schedule = enumerate_targets(sign_grid(3), 14, 2);
  const SynthesisCertificate cert = synthesize(Rational(2), schedule);
  const CertificateCheck serial = verify_certificate(cert, schedule, ExecMode::serial);
  const CertificateCheck parallel = verify_certificate(cert, schedule, ExecMode::parallel);
  CHECK(serial.pass == parallel.pass);
  REQUIRE(serial.visits.size() == parallel.visits.size());
  for (std::size_t i = 0; i < serial.visits.size(); ++i) {
    CHECK(serial.visits[i] == parallel.visits[i]);
  }
}

TEST_CASE("verify_certificate flags a corrupted certificate") {
  const TargetSchedule schedule = enumerate_targets(sign_grid(2), 6, 1);
  SynthesisCertificate cert = synthesize(Rational(2), schedule);
  // A stray coefficient beyond the horizon keeps shifting into view and
  // ruins every visit.
  cert.vectors[0] = cert.vectors[0] + e(cert.horizon + 5);
  CHECK_FALSE(verify_certificate(cert, schedule).pass);
}

}  // TEST_SUITE

#include <doctest.h>

#include "lindyn/serialize.hpp"
#include "support/gen.hpp"

using namespace lindyn;

namespace {
SparseVector e(std::size_t i) { return SparseVector::unit(i); }
SparseFunctional es(std::size_t i) { return SparseFunctional::unit(i); }

GridSpec sign_grid(std::size_t d) { return GridSpec{d, {Rational(-1), Rational(0), Rational(1)}}; }

bool extensionally_equal(const OperatorExpr& a, const OperatorExpr& b, testgen::Rng& rng) {
  for (int p = 0; p < 20; ++p) {
    const SparseVector u = testgen::vector(rng);
    if (apply(a, u) != apply(b, u)) return false;
    const SparseFunctional phi = testgen::functional(rng);
    if (dual_apply(a, phi) != dual_apply(b, phi)) return false;
  }
  return true;
}
}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("rationals render canonically") {
  CHECK(rational_to_json(Rational(0)) == json("0/1"));
  CHECK(rational_to_json(Rational(-6, 4)) == json("-3/2"));
  CHECK(rational_from_json(json("7")) == Rational(7));
  CHECK_THROWS_AS(rational_from_json(json(7)), IoError);
}

TEST_CASE("sparse elements round-trip through entry lists") {
  const SparseVector v = e(3).scaled(Rational(-1, 2)) + e(0).scaled(Rational(5));
  CHECK(vector_from_json(vector_to_json(v)) == v);
  const SparseFunctional f = es(2) - es(9).scaled(Rational(7, 3));
  CHECK(functional_from_json(functional_to_json(f)) == f);
  CHECK(vector_to_json(SparseVector()) == json::array());
}

TEST_CASE("operators round-trip extensionally and byte-identically") {
  testgen::Rng rng(20240401);
  for (int i = 0; i < 30; ++i) {
    const OperatorExpr op = testgen::any_expr(rng, 2);
    const json j = operator_to_json(op);
    const OperatorExpr back = operator_from_json(j);
    CHECK(extensionally_equal(op, back, rng));
    CHECK(dump_canonical(operator_to_json(back)) == dump_canonical(j));
  }
}

TEST_CASE("recorded inverses are re-certified on load") {
  // An inverse node whose base is singular must be rejected, not trusted.
  json j{{"op", "inverse_of_update"},
         {"base",
          json{{"op", "finite_rank_update"},
               {"pairs", json::array({json{{"vector", json::array({json::array({0, "-1/1"})})},
                                           {"functional", json::array({json::array({0, "1/1"})})}}})}}}};
  CHECK_THROWS_AS(operator_from_json(j), NotInvertible);
}

TEST_CASE("certificate files round-trip byte-identically") {
  const TargetSchedule schedule = enumerate_targets(sign_grid(3), 9, 2);
  const SynthesisCertificate cert = synthesize(Rational(2), schedule);
  const std::string text = dump_canonical(certificate_file_to_json(schedule, cert, true));
  const json parsed = json::parse(text);
  const TargetSchedule schedule2 = schedule_from_json(parsed.at("schedule"));
  const SynthesisCertificate cert2 = certificate_from_json(parsed.at("certificate"));
  CHECK(schedule2 == schedule);
  CHECK(cert2 == cert);
  CHECK(dump_canonical(certificate_file_to_json(schedule2, cert2, true)) == text);
}

TEST_CASE("artifacts round-trip byte-identically, including dual data") {
  {
    const TargetSchedule schedule = enumerate_targets(sign_grid(2), 10, 2);
    const DisjointTupleArtifact art = construct_disjoint_tuple(2, schedule);
    const std::string text = dump_canonical(artifact_to_json(art));
    const DisjointTupleArtifact back = artifact_from_json(json::parse(text));
    CHECK(dump_canonical(artifact_to_json(back)) == text);
    CHECK(back.common_vector == art.common_vector);
    CHECK(back.sources == art.sources);
    REQUIRE(back.certificate);
    CHECK(*back.certificate == *art.certificate);
  }
  {
    const DisjointTupleArtifact art = construct_dual_tuple(
        scaled_backward_shift(Rational(2)), e(0), es(0), {e(0) + e(1)}, {es(1)});
    const std::string text = dump_canonical(artifact_to_json(art));
    const DisjointTupleArtifact back = artifact_from_json(json::parse(text));
    CHECK(dump_canonical(artifact_to_json(back)) == text);
    REQUIRE(back.dual);
    CHECK(back.dual->dual_sources == art.dual->dual_sources);
    CHECK(back.dual->rescale == art.dual->rescale);
  }
}

TEST_CASE("orbit reports round-trip byte-identically") {
  const TargetSchedule schedule = enumerate_targets(sign_grid(2), 6, 1);
  const DisjointTupleArtifact art = construct_disjoint_tuple(1, schedule);
  std::vector<std::size_t> expected;
  for (const auto& v : art.certificate->visits) expected.push_back(v.time);
  const OrbitReport report =
      orbit_report(art.tuple(), art.common_vector, *art.conjugated_schedule,
                   art.certificate->horizon, &expected, ExecMode::parallel, "round-trip probe");
  const std::string text = dump_canonical(orbit_report_to_json(report));
  const OrbitReport back = orbit_report_from_json(json::parse(text));
  CHECK(back == report);
  CHECK(dump_canonical(orbit_report_to_json(back)) == text);
}

TEST_CASE("file helpers report missing files and bad JSON") {
  CHECK_THROWS_AS(read_text_file("/nonexistent/definitely/missing.json"), IoError);
  CHECK_THROWS_AS(parse_json_file("/nonexistent/definitely/missing.json"), IoError);
  const std::string path = "/tmp/lindyn_test_bad.json";
  write_text_file(path, "{ not json");
  CHECK_THROWS_AS(parse_json_file(path), IoError);
}

}  // TEST_SUITE

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lindyn/constructions.hpp"
#include "lindyn/exec.hpp"
#include "lindyn/operators.hpp"
#include "lindyn/synthesis.hpp"

namespace lindyn {

struct TargetRecord {
  std::size_t target_index = 0;
  std::size_t best_time = 0;     // earliest n achieving the minimum
  Rational best_sq_dist;         // exact minimum over n <= horizon
  std::optional<std::size_t> first_pass_time;
  std::optional<std::size_t> expected_time;  // certificate visit time, when known
  bool pass_at_expected = false;
  bool pass = false;
  friend bool operator==(const TargetRecord&, const TargetRecord&) = default;
};

struct OrbitReport {
  std::string tuple_description;
  std::size_t horizon = 0;
  std::vector<TargetRecord> records;
  bool all_pass = false;
  friend bool operator==(const OrbitReport&, const OrbitReport&) = default;
};

// Replays the diagonal orbit (R_1^n x, ..., R_m^n x) incrementally for
// n = 0..horizon and records, per target tuple, the exact minimum of the
// squared distance sum_j ||R_j^n x - t_j||^2 together with the first passing
// time. The per-target distance evaluations at each step run on the OpenMP
// kernel by default; the serial path is the reference.
OrbitReport orbit_report(const OperatorTuple& tuple, const SparseVector& start,
                         const TargetSchedule& schedule, std::size_t horizon,
                         const std::vector<std::size_t>* expected_times = nullptr,
                         ExecMode mode = ExecMode::parallel,
                         std::string description = std::string());

// Exact replay of both sides of the conjugation identity:
// R_j^n x = S_j (T^n x_j) for every j and every n <= horizon.
bool similarity_audit(const DisjointTupleArtifact& artifact, std::size_t horizon);

// Dual counterpart: (R_j')^n f = (S_j')^{-1} ((T')^n f_j), with (S_j')^{-1}
// realized as (S_j^{-1})'. Requires the artifact to carry dual data.
bool dual_similarity_audit(const DisjointTupleArtifact& artifact, std::size_t horizon);

}  // namespace lindyn

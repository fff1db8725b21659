#include "lindyn/verify.hpp"

#include <utility>

#include "lindyn/errors.hpp"

namespace lindyn {

OrbitReport orbit_report(const OperatorTuple& tuple, const SparseVector& start,
                         const TargetSchedule& schedule, std::size_t horizon,
                         const std::vector<std::size_t>* expected_times, ExecMode mode,
                         std::string description) {
  schedule.validate();
  if (schedule.m != tuple.size()) throw InvalidInput("orbit_report: tuple arity mismatch");
  if (expected_times != nullptr && expected_times->size() != schedule.targets.size()) {
    throw InvalidInput("orbit_report: one expected time per target required");
  }
  const std::size_t count = schedule.targets.size();
  const std::size_t m = tuple.size();

  struct Acc {
    bool init = false;
    Rational best;
    std::size_t best_time = 0;
    std::optional<std::size_t> first_pass;
    bool pass_at_expected = false;
  };
  std::vector<Acc> acc(count);
  std::vector<SparseVector> cur(m, start);

  for (std::size_t n = 0;; ++n) {
    auto eval_target = [&](std::size_t k) {
      Rational d;
      for (std::size_t j = 0; j < m; ++j) d += norm_sq(cur[j] - schedule.targets[k][j]);
      Acc& a = acc[k];
      if (!a.init || d < a.best) {
        a.init = true;
        a.best = d;
        a.best_time = n;
      }
      const bool within = d <= schedule.tolerance_sq[k];
      if (!a.first_pass && within) a.first_pass = n;
      if (expected_times != nullptr && (*expected_times)[k] == n) a.pass_at_expected = within;
    };
    if (mode == ExecMode::parallel) {
      const long total = static_cast<long>(count);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
      for (long k = 0; k < total; ++k) eval_target(static_cast<std::size_t>(k));
    } else {
      for (std::size_t k = 0; k < count; ++k) eval_target(k);
    }
    if (n == horizon) break;
    for (std::size_t j = 0; j < m; ++j) cur[j] = apply(tuple[j], cur[j]);
  }

  OrbitReport report;
  report.tuple_description = std::move(description);
  report.horizon = horizon;
  report.all_pass = true;
  for (std::size_t k = 0; k < count; ++k) {
    TargetRecord rec;
    rec.target_index = k;
    rec.best_time = acc[k].best_time;
    rec.best_sq_dist = acc[k].best;
    rec.first_pass_time = acc[k].first_pass;
    if (expected_times != nullptr) rec.expected_time = (*expected_times)[k];
    rec.pass_at_expected = acc[k].pass_at_expected;
    rec.pass = acc[k].first_pass.has_value();
    report.all_pass = report.all_pass && rec.pass;
    report.records.push_back(std::move(rec));
  }
  return report;
}

bool similarity_audit(const DisjointTupleArtifact& artifact, std::size_t horizon) {
  for (std::size_t j = 0; j < artifact.m(); ++j) {
    SparseVector left = artifact.common_vector;   // R_j^n x
    SparseVector right = artifact.sources[j];     // T^n x_j
    for (std::size_t n = 0;; ++n) {
      if (left != apply(artifact.similarities[j], right)) return false;
      if (n == horizon) break;
      left = apply(artifact.conjugates[j], left);
      right = apply(artifact.base, right);
    }
  }
  return true;
}

bool dual_similarity_audit(const DisjointTupleArtifact& artifact, std::size_t horizon) {
  if (!artifact.dual) throw InvalidInput("dual_similarity_audit: artifact carries no dual data");
  for (std::size_t j = 0; j < artifact.m(); ++j) {
    const OperatorExpr s_inverse = invert_expr(artifact.similarities[j]);
    SparseFunctional left = artifact.dual->common_functional;  // (R_j')^n f
    SparseFunctional right = artifact.dual->dual_sources[j];   // (T')^n f_j
    for (std::size_t n = 0;; ++n) {
      if (left != dual_apply(s_inverse, right)) return false;
      if (n == horizon) break;
      left = dual_apply(artifact.conjugates[j], left);
      right = dual_apply(artifact.base, right);
    }
  }
  return true;
}

}  // namespace lindyn

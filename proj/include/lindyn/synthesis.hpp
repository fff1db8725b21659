#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lindyn/exec.hpp"
#include "lindyn/operators.hpp"
#include "lindyn/sparse.hpp"

namespace lindyn {

// Dyadic coordinate grid the target enumerator draws from: supports live in
// {0, ..., dimension-1} and every coefficient comes from `coordinates`.
struct GridSpec {
  std::size_t dimension = 0;
  std::vector<Rational> coordinates;  // sorted, unique, dyadic

  void validate() const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Finite prefix of a dense set of m-tuples, with per-tuple squared
// tolerances. Enumerated schedules carry their grid; derived schedules
// (e.g. images under similarities) do not.
struct TargetSchedule {
  std::size_t m = 0;
  std::vector<std::vector<SparseVector>> targets;  // each entry has size m
  std::vector<Rational> tolerance_sq;              // one per target, strictly decreasing
  std::optional<GridSpec> grid;

  void validate() const;
  friend bool operator==(const TargetSchedule&, const TargetSchedule&) = default;
};

struct Visit {
  std::size_t target_index = 0;
  std::size_t time = 0;          // orbit time n_k
  Rational error_sq_bound;       // exact tail bound, max over components
  friend bool operator==(const Visit&, const Visit&) = default;
};

// Witness that the orbit of (x_1, ..., x_m) under lambda*B applied
// componentwise visits every scheduled target tuple within its tolerance,
// with exact per-visit error bounds.
struct SynthesisCertificate {
  Rational lambda;
  std::vector<SparseVector> vectors;
  std::vector<Visit> visits;
  std::size_t horizon = 0;  // max visit time
  friend bool operator==(const SynthesisCertificate&, const SynthesisCertificate&) = default;
};

// Deterministic graded enumeration of m-tuples over the grid: ordered by
// total support size, then total coefficient magnitude, then
// lexicographically. Same inputs always produce the same schedule; the k-th
// tuple (1-based) gets tolerance eps_base^k.
TargetSchedule enumerate_targets(const GridSpec& grid, std::size_t count, std::size_t m,
                                 const Rational& eps_base = Rational(1, 2));

// Builds x_i = sum_k lambda^{-n_k} F^{n_k} t_k^{(i)} with gaps chosen so
// that (lambda B)^{n_k} x_i hits t_k^{(i)} up to an exactly-bounded forward
// tail. Requires |lambda| >= 2 and a non-empty schedule.
SynthesisCertificate synthesize(const Rational& lambda, const TargetSchedule& schedule);

struct VisitCheck {
  std::size_t target_index = 0;
  std::size_t component = 0;
  Rational error_sq;  // exact, recomputed by evaluation
  bool pass = false;
  friend bool operator==(const VisitCheck&, const VisitCheck&) = default;
};

struct CertificateCheck {
  bool pass = false;
  std::vector<VisitCheck> visits;  // ordered by (target, component)
};

// Post-hoc verifier: replays the orbit and recomputes every visit error by
// exact evaluation, independently of the bounds recorded in the certificate.
// The parallel kernel recomputes visits independently; the serial reference
// replays each component incrementally.
CertificateCheck verify_certificate(const SynthesisCertificate& certificate,
                                    const TargetSchedule& schedule,
                                    ExecMode mode = ExecMode::parallel);

}  // namespace lindyn

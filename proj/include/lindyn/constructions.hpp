#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lindyn/operators.hpp"
#include "lindyn/sparse.hpp"
#include "lindyn/synthesis.hpp"

namespace lindyn {

// Coefficients (a, b, c) for the rank-two update machinery, satisfying
//   a*alpha + b*beta = -1,   b*alpha + c*beta = 1,   a*beta + b*gamma != 0
// for the inputs that produced them.
struct CoefficientTriple {
  Rational a;
  Rational b;
  Rational c;
  friend bool operator==(const CoefficientTriple&, const CoefficientTriple&) = default;
};

// Case analysis on (alpha, beta, gamma); requires (alpha, beta) != (0, 0)
// and (beta, gamma) != (0, 0). All three identities are re-checked exactly
// before returning.
CoefficientTriple solve_coefficients(const Rational& alpha, const Rational& beta,
                                     const Rational& gamma);

// For linearly independent x, y produces functionals with f(x) = g(y) = 1
// and f(y) = g(x) = 0, each supported on at most two coordinates: picks
// coordinates i, j where the 2x2 minor of (x; y) is invertible and solves it.
std::pair<SparseFunctional, SparseFunctional> biorthogonal_pair(const SparseVector& x,
                                                                const SparseVector& y);

// An invertible S with S x = y, for any nonzero x, y. Colinear inputs give a
// scalar multiple; independent inputs give the rank-two swap-style update
// S u = u + (g-f)(u) x + (f-g)(u) y built from a biorthogonal pair.
OperatorExpr transitive_map(const SparseVector& x, const SparseVector& y);

// An invertible S with S x = y and S' f = g. Requires <f,y> = <g,x> and
// <f,x><g,y> != <f,y><g,x>. Built as
//   S u = u + a f(u) x + b f(u) y + b g(u) x + c g(u) y
// with (a, b, c) from solve_coefficients(<f,x>, <g,x>, <g,y>). Both
// postconditions and the restriction determinant identity are verified
// exactly before returning.
OperatorExpr dual_transitive_map(const SparseVector& x, const SparseVector& y,
                                 const SparseFunctional& f, const SparseFunctional& g);

// (S_1 T S_1^{-1}, ..., S_m T S_m^{-1}).
OperatorTuple conjugate_tuple(const OperatorExpr& base,
                              const std::vector<OperatorExpr>& similarities);

// True iff [f, f_1, ..., f_m] are linearly independent, <f_j, y_j> != 0 and
// <f, y_j><f_j, x> != <f, x><f_j, y_j> for every j.
bool genericity_check(const SparseVector& x, const SparseFunctional& f,
                      const std::vector<SparseVector>& ys,
                      const std::vector<SparseFunctional>& fs);

// Dual-side data attached to artifacts produced by construct_dual_tuple:
// the common functional f with S_j' f = f_j, and the rescale factors
// c_j = 1 / <f_j, y_j> that turned the raw y_j into the sources.
struct DualData {
  SparseFunctional common_functional;
  std::vector<SparseFunctional> dual_sources;
  std::vector<Rational> rescale;
};

// A constructed tuple R_j = S_j T S_j^{-1} together with everything needed
// to audit it: the common vector x = S_j x_j, the similarities, the sources
// x_j, and (when synthesis-backed) the certificate plus the conjugated
// target schedule with growth-adjusted tolerances.
struct DisjointTupleArtifact {
  OperatorExpr base;
  SparseVector common_vector;
  std::vector<OperatorExpr> similarities;
  std::vector<SparseVector> sources;
  std::vector<OperatorExpr> conjugates;
  std::optional<TargetSchedule> schedule;
  std::optional<SynthesisCertificate> certificate;
  std::optional<TargetSchedule> conjugated_schedule;
  std::optional<DualData> dual;

  std::size_t m() const { return conjugates.size(); }
  OperatorTuple tuple() const { return OperatorTuple(conjugates); }
};

// Full primal pipeline: synthesize sources for T = lambda*B over the
// schedule (an empty schedule falls back to the single target e_0 in every
// component), send each source to e_0 with a transitive map, and conjugate.
// The conjugated schedule's tolerances are widened by the exact operator
// growth bounds of the similarities, so the synthesis certificate already
// implies every conjugated visit.
DisjointTupleArtifact construct_disjoint_tuple(std::size_t m, const TargetSchedule& schedule,
                                               const Rational& lambda = Rational(2));

// Dual pipeline: rescales x_j = y_j / <f_j, y_j>, builds S_j with
// S_j x_j = x and S_j' f = f_j via dual_transitive_map, and conjugates.
// Requires <f, x> = 1 and genericity_check(x, f, ys, fs). When the ys carry
// a synthesis certificate (its vectors must equal ys), the artifact also
// gets the certificate and the rescale-adjusted conjugated schedule, so the
// primal orbit of the tuple stays verifiable; no claim is attached to the
// dual orbit beyond the exact replay identity.
DisjointTupleArtifact construct_dual_tuple(const OperatorExpr& base, const SparseVector& x,
                                           const SparseFunctional& f,
                                           const std::vector<SparseVector>& ys,
                                           const std::vector<SparseFunctional>& fs,
                                           const SynthesisCertificate* certificate = nullptr,
                                           const TargetSchedule* schedule = nullptr);

struct RepairResult {
  std::vector<SparseVector> ys;
  std::vector<SparseFunctional> fs;
  Rational delta;  // 0 when no perturbation was needed
  std::optional<SynthesisCertificate> certificate;  // updated bounds, when given
};

// Makes (ys, fs) generic with respect to (x, f) by adding delta * e_{p_j} to
// y_j and delta * e*_{p_j} to f_j at fresh private coordinates, with
// delta = 2^-K shrunk until every genericity condition holds. When the ys
// carry a synthesis certificate, delta is additionally capped so the
// perturbed visit bounds still fit their tolerances; the updated bounds are
// recomputed exactly and returned.
RepairResult repair_genericity(const SparseVector& x, const SparseFunctional& f,
                               std::vector<SparseVector> ys, std::vector<SparseFunctional> fs,
                               const SynthesisCertificate* certificate = nullptr,
                               const TargetSchedule* schedule = nullptr);

}  // namespace lindyn

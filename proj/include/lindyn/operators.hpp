#pragma once

#include <cstddef>
#include <memory>
#include <variant>
#include <vector>

#include "lindyn/matrix.hpp"
#include "lindyn/sparse.hpp"

namespace lindyn {

struct OperatorNode;

// One (vector, functional) term of a finite-rank update u -> u + <f,u> v.
struct UpdatePair {
  SparseVector vec;
  SparseFunctional fun;
  friend bool operator==(const UpdatePair&, const UpdatePair&) = default;
};

// Immutable operator expression tree. The model space is spanned by the
// coordinate basis and every node preserves finite support, so operators are
// applied lazily and exactly; no truncation dimension exists anywhere.
// Trees are never simplified: extensional equality is established by probing.
class OperatorExpr {
 public:
  static OperatorExpr identity();
  static OperatorExpr scalar_multiple(Rational factor);
  static OperatorExpr backward_shift();
  static OperatorExpr forward_shift();
  static OperatorExpr finite_rank_update(std::vector<UpdatePair> pairs);
  // Product of the factors; the rightmost factor is applied first, matching
  // the usual operator-product notation S T S^{-1}.
  static OperatorExpr compose(std::vector<OperatorExpr> factors);

  const OperatorNode& node() const { return *node_; }

 private:
  friend OperatorExpr invert_update(const OperatorExpr& update);
  explicit OperatorExpr(std::shared_ptr<const OperatorNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const OperatorNode> node_;
};

struct IdentityNode {};
struct ScalarMultipleNode {
  Rational factor;
};
struct BackwardShiftNode {};  // e_0 -> 0, e_k -> e_{k-1}
struct ForwardShiftNode {};   // e_k -> e_{k+1}
struct FiniteRankUpdateNode {
  std::vector<UpdatePair> pairs;
};
struct ComposeNode {
  std::vector<OperatorExpr> factors;
};
// Inverse of a finite-rank update in low-rank-update form:
//   u -> u - sum_{i,j} W_ij <f_j, u> v_i,   W = (I_k + G)^{-1}, G_ij = <f_i, v_j>.
// Only constructible through invert_update, which certifies invertibility and
// stores W as the witness.
struct InverseOfUpdateNode {
  FiniteRankUpdateNode base;
  RationalMatrix witness;
};

struct OperatorNode {
  std::variant<IdentityNode, ScalarMultipleNode, BackwardShiftNode, ForwardShiftNode,
               FiniteRankUpdateNode, ComposeNode, InverseOfUpdateNode>
      v;
};

SparseVector apply(const OperatorExpr& op, const SparseVector& u);

// Dual action: for every op, phi and u,  <dual_apply(op,phi), u> = <phi, apply(op,u)>.
SparseFunctional dual_apply(const OperatorExpr& op, const SparseFunctional& phi);

SparseVector power_apply(const OperatorExpr& op, SparseVector u, std::size_t n);
SparseFunctional dual_power_apply(const OperatorExpr& op, SparseFunctional phi, std::size_t n);

// Inverts a finite-rank update via an exact k x k solve of I_k + G.
// Throws NotInvertible when det(I_k + G) = 0.
OperatorExpr invert_update(const OperatorExpr& update);

// Structural inverse of the invertible forms (identity, nonzero scalar,
// finite-rank updates and their recorded inverses, compositions of those).
OperatorExpr invert_expr(const OperatorExpr& op);

// S T S^{-1}; requires S invertible in the structural sense above.
OperatorExpr conjugate(const OperatorExpr& similarity, const OperatorExpr& base);

// lambda * backward shift, the workhorse base operator.
OperatorExpr scaled_backward_shift(const Rational& lambda);

// Exact rational upper bound for the squared operator norm on the l2 model.
// Finite-rank terms are bounded through Cauchy-Schwarz with the AM-GM bound
// ||f|| ||v|| <= (||f||^2 + ||v||^2) / 2, keeping everything rational.
Rational growth_bound_sq(const OperatorExpr& op);

// Fixed-arity tuple (T_1, ..., T_m) acting diagonally on the model space.
class OperatorTuple {
 public:
  explicit OperatorTuple(std::vector<OperatorExpr> ops);
  std::size_t size() const { return ops_.size(); }
  const std::vector<OperatorExpr>& ops() const { return ops_; }
  const OperatorExpr& operator[](std::size_t j) const { return ops_[j]; }

 private:
  std::vector<OperatorExpr> ops_;
};

}  // namespace lindyn

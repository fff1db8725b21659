#include "lindyn/operators.hpp"

#include <utility>

#include "lindyn/errors.hpp"

namespace lindyn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

OperatorExpr OperatorExpr::identity() {
  return OperatorExpr(std::make_shared<const OperatorNode>(OperatorNode{IdentityNode{}}));
}

OperatorExpr OperatorExpr::scalar_multiple(Rational factor) {
  return OperatorExpr(
      std::make_shared<const OperatorNode>(OperatorNode{ScalarMultipleNode{std::move(factor)}}));
}

OperatorExpr OperatorExpr::backward_shift() {
  return OperatorExpr(std::make_shared<const OperatorNode>(OperatorNode{BackwardShiftNode{}}));
}

OperatorExpr OperatorExpr::forward_shift() {
  return OperatorExpr(std::make_shared<const OperatorNode>(OperatorNode{ForwardShiftNode{}}));
}

OperatorExpr OperatorExpr::finite_rank_update(std::vector<UpdatePair> pairs) {
  if (pairs.empty()) throw InvalidInput("finite_rank_update: needs at least one pair");
  return OperatorExpr(
      std::make_shared<const OperatorNode>(OperatorNode{FiniteRankUpdateNode{std::move(pairs)}}));
}

OperatorExpr OperatorExpr::compose(std::vector<OperatorExpr> factors) {
  if (factors.empty()) throw InvalidInput("compose: needs at least one factor");
  return OperatorExpr(
      std::make_shared<const OperatorNode>(OperatorNode{ComposeNode{std::move(factors)}}));
}

SparseVector apply(const OperatorExpr& op, const SparseVector& u) {
  return std::visit(
      overloaded{
          [&](const IdentityNode&) { return u; },
          [&](const ScalarMultipleNode& n) { return u.scaled(n.factor); },
          [&](const BackwardShiftNode&) { return u.shifted_down(1); },
          [&](const ForwardShiftNode&) { return u.shifted_up(1); },
          [&](const FiniteRankUpdateNode& n) {
            SparseVector out = u;
            for (const auto& p : n.pairs) out.add_scaled(p.vec, pair(p.fun, u));
            return out;
          },
          [&](const ComposeNode& n) {
            SparseVector cur = u;
            for (auto it = n.factors.rbegin(); it != n.factors.rend(); ++it) cur = apply(*it, cur);
            return cur;
          },
          [&](const InverseOfUpdateNode& n) {
            const std::size_t k = n.base.pairs.size();
            std::vector<Rational> vals(k);
            for (std::size_t j = 0; j < k; ++j) vals[j] = pair(n.base.pairs[j].fun, u);
            SparseVector out = u;
            for (std::size_t i = 0; i < k; ++i) {
              Rational coef;
              for (std::size_t j = 0; j < k; ++j) coef += n.witness.at(i, j) * vals[j];
              out.add_scaled(n.base.pairs[i].vec, -coef);
            }
            return out;
          },
      },
      op.node().v);
}

SparseFunctional dual_apply(const OperatorExpr& op, const SparseFunctional& phi) {
  return std::visit(
      overloaded{
          [&](const IdentityNode&) { return phi; },
          [&](const ScalarMultipleNode& n) { return phi.scaled(n.factor); },
          // (B' f)(x) = f(Bx): coordinates of f move up, and vice versa.
          [&](const BackwardShiftNode&) { return phi.shifted_up(1); },
          [&](const ForwardShiftNode&) { return phi.shifted_down(1); },
          [&](const FiniteRankUpdateNode& n) {
            SparseFunctional out = phi;
            for (const auto& p : n.pairs) out.add_scaled(p.fun, pair(phi, p.vec));
            return out;
          },
          [&](const ComposeNode& n) {
            SparseFunctional cur = phi;
            for (const auto& f : n.factors) cur = dual_apply(f, cur);
            return cur;
          },
          [&](const InverseOfUpdateNode& n) {
            const std::size_t k = n.base.pairs.size();
            std::vector<Rational> vals(k);
            for (std::size_t i = 0; i < k; ++i) vals[i] = pair(phi, n.base.pairs[i].vec);
            SparseFunctional out = phi;
            for (std::size_t j = 0; j < k; ++j) {
              Rational coef;
              for (std::size_t i = 0; i < k; ++i) coef += n.witness.at(i, j) * vals[i];
              out.add_scaled(n.base.pairs[j].fun, -coef);
            }
            return out;
          },
      },
      op.node().v);
}

SparseVector power_apply(const OperatorExpr& op, SparseVector u, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) u = apply(op, u);
  return u;
}

SparseFunctional dual_power_apply(const OperatorExpr& op, SparseFunctional phi, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) phi = dual_apply(op, phi);
  return phi;
}

OperatorExpr invert_update(const OperatorExpr& update) {
  const auto* fr = std::get_if<FiniteRankUpdateNode>(&update.node().v);
  if (fr == nullptr) throw InvalidInput("invert_update: operator is not a finite-rank update");
  const std::size_t k = fr->pairs.size();
  RationalMatrix a(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) a.at(i, j) = pair(fr->pairs[i].fun, fr->pairs[j].vec);
    a.at(i, i) += Rational(1);
  }
  auto inv = a.inverse();
  if (!inv) throw NotInvertible("finite-rank update is singular (det(I + G) = 0)");
  if (!(a * *inv == RationalMatrix::identity(k))) {
    throw NotInvertible("finite-rank update inverse failed its witness check");
  }
  return OperatorExpr(
      std::make_shared<const OperatorNode>(OperatorNode{InverseOfUpdateNode{*fr, std::move(*inv)}}));
}

OperatorExpr invert_expr(const OperatorExpr& op) {
  return std::visit(
      overloaded{
          [&](const IdentityNode&) { return OperatorExpr::identity(); },
          [&](const ScalarMultipleNode& n) {
            if (n.factor.is_zero()) throw NotInvertible("zero scalar multiple");
            return OperatorExpr::scalar_multiple(n.factor.inverse());
          },
          [&](const BackwardShiftNode&) -> OperatorExpr {
            throw NotInvertible("backward shift is not injective");
          },
          [&](const ForwardShiftNode&) -> OperatorExpr {
            throw NotInvertible("forward shift is not surjective");
          },
          [&](const FiniteRankUpdateNode&) { return invert_update(op); },
          [&](const ComposeNode& n) {
            std::vector<OperatorExpr> inverses;
            inverses.reserve(n.factors.size());
            for (auto it = n.factors.rbegin(); it != n.factors.rend(); ++it) {
              inverses.push_back(invert_expr(*it));
            }
            return OperatorExpr::compose(std::move(inverses));
          },
          [&](const InverseOfUpdateNode& n) {
            return OperatorExpr::finite_rank_update(n.base.pairs);
          },
      },
      op.node().v);
}

OperatorExpr conjugate(const OperatorExpr& similarity, const OperatorExpr& base) {
  OperatorExpr inverse = invert_expr(similarity);
  return OperatorExpr::compose({similarity, base, std::move(inverse)});
}

OperatorExpr scaled_backward_shift(const Rational& lambda) {
  return OperatorExpr::compose({OperatorExpr::scalar_multiple(lambda), OperatorExpr::backward_shift()});
}

namespace {

Rational update_growth_bound_sq(const std::vector<UpdatePair>& pairs) {
  // ||u + sum <f_i,u> v_i|| <= (1 + sum ||f_i|| ||v_i||) ||u||, with each
  // product replaced by a rational upper bound on sqrt(||f_i||^2 ||v_i||^2).
  Rational sum(1);
  for (const auto& p : pairs) {
    sum += Rational::sqrt_upper_bound(norm_sq(p.vec) * norm_sq(p.fun));
  }
  return sum.squared();
}

}  // namespace

Rational growth_bound_sq(const OperatorExpr& op) {
  return std::visit(
      overloaded{
          [&](const IdentityNode&) { return Rational(1); },
          [&](const ScalarMultipleNode& n) { return n.factor.squared(); },
          [&](const BackwardShiftNode&) { return Rational(1); },
          [&](const ForwardShiftNode&) { return Rational(1); },
          [&](const FiniteRankUpdateNode& n) { return update_growth_bound_sq(n.pairs); },
          [&](const ComposeNode& n) {
            Rational prod(1);
            for (const auto& f : n.factors) prod *= growth_bound_sq(f);
            return prod;
          },
          [&](const InverseOfUpdateNode& n) {
            // Equivalent update form u -> u + sum_j <f_j, u> w_j with
            // w_j = -sum_i W_ij v_i.
            const std::size_t k = n.base.pairs.size();
            std::vector<UpdatePair> eq;
            eq.reserve(k);
            for (std::size_t j = 0; j < k; ++j) {
              SparseVector w;
              for (std::size_t i = 0; i < k; ++i) w.add_scaled(n.base.pairs[i].vec, -n.witness.at(i, j));
              eq.push_back(UpdatePair{std::move(w), n.base.pairs[j].fun});
            }
            return update_growth_bound_sq(eq);
          },
      },
      op.node().v);
}

OperatorTuple::OperatorTuple(std::vector<OperatorExpr> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) throw InvalidInput("OperatorTuple: needs at least one operator");
}

}  // namespace lindyn

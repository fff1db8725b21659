#include "lindyn/constructions.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "lindyn/errors.hpp"
#include "lindyn/linalg.hpp"

namespace lindyn {

CoefficientTriple solve_coefficients(const Rational& alpha, const Rational& beta,
                                     const Rational& gamma) {
  if (alpha.is_zero() && beta.is_zero()) {
    throw InvalidInput("solve_coefficients: (alpha, beta) = (0, 0)");
  }
  if (beta.is_zero() && gamma.is_zero()) {
    throw InvalidInput("solve_coefficients: (beta, gamma) = (0, 0)");
  }
  CoefficientTriple t;
  if (!beta.is_zero() && !gamma.is_zero()) {
    t.a = Rational(0);
    t.b = -beta.inverse();
    t.c = (alpha + beta) / beta.squared();
  } else if (!beta.is_zero()) {
    t.a = Rational(1);
    t.b = -(Rational(1) + alpha) / beta;
    t.c = (alpha + beta + alpha.squared()) / beta.squared();
  } else {
    t.a = -alpha.inverse();
    t.b = alpha.inverse();
    t.c = Rational(0);
  }
  if (t.a * alpha + t.b * beta != Rational(-1) || t.b * alpha + t.c * beta != Rational(1) ||
      (t.a * beta + t.b * gamma).is_zero()) {
    throw std::logic_error("solve_coefficients: case formula violated its identities");
  }
  return t;
}

std::pair<SparseFunctional, SparseFunctional> biorthogonal_pair(const SparseVector& x,
                                                                const SparseVector& y) {
  std::vector<std::size_t> support;
  for (const auto& [i, c] : x.entries()) support.push_back(i);
  for (const auto& [i, c] : y.entries()) {
    if (x.coeff(i).is_zero()) support.push_back(i);
  }
  std::sort(support.begin(), support.end());

  // First coordinate where (x_i, y_i) != (0, 0), then the first partner j
  // making the 2x2 minor invertible. One exists iff x, y are independent.
  std::size_t first = 0;
  bool found_first = false;
  for (std::size_t i : support) {
    if (!x.coeff(i).is_zero() || !y.coeff(i).is_zero()) {
      first = i;
      found_first = true;
      break;
    }
  }
  if (!found_first) throw InvalidInput("biorthogonal_pair: x, y linearly dependent");
  for (std::size_t j : support) {
    if (j == first) continue;
    const Rational det = x.coeff(first) * y.coeff(j) - x.coeff(j) * y.coeff(first);
    if (det.is_zero()) continue;
    const Rational inv = det.inverse();
    // f = a e_first* + b e_j* with f(x) = 1, f(y) = 0.
    const Rational fa = y.coeff(j) * inv;
    const Rational fb = -y.coeff(first) * inv;
    // g = a e_first* + b e_j* with g(x) = 0, g(y) = 1.
    const Rational ga = -x.coeff(j) * inv;
    const Rational gb = x.coeff(first) * inv;
    auto f = SparseFunctional::from_entries({{first, fa}, {j, fb}});
    auto g = SparseFunctional::from_entries({{first, ga}, {j, gb}});
    return {std::move(f), std::move(g)};
  }
  throw InvalidInput("biorthogonal_pair: x, y linearly dependent");
}

OperatorExpr transitive_map(const SparseVector& x, const SparseVector& y) {
  if (x.is_zero() || y.is_zero()) throw InvalidInput("transitive_map: x and y must be nonzero");
  // Colinear case y = lambda x.
  const std::size_t lead = x.entries().begin()->first;
  const Rational lambda = y.coeff(lead) / x.coeff(lead);
  if (!lambda.is_zero() && y == x.scaled(lambda)) {
    return OperatorExpr::scalar_multiple(lambda);
  }
  auto [f, g] = biorthogonal_pair(x, y);
  // S u = u + (g - f)(u) x + (f - g)(u) y: swaps x and y, fixes ker f & ker g.
  const SparseFunctional gf = g - f;
  std::vector<UpdatePair> pairs;
  pairs.push_back(UpdatePair{x, gf});
  pairs.push_back(UpdatePair{y, -gf});
  OperatorExpr s = OperatorExpr::finite_rank_update(std::move(pairs));
  invert_update(s);  // certifies invertibility
  return s;
}

OperatorExpr dual_transitive_map(const SparseVector& x, const SparseVector& y,
                                 const SparseFunctional& f, const SparseFunctional& g) {
  const Rational fx = pair(f, x);
  const Rational fy = pair(f, y);
  const Rational gx = pair(g, x);
  const Rational gy = pair(g, y);
  if (fy != gx) throw InvalidInput("dual_transitive_map: <f,y> != <g,x>");
  if (fx * gy == fy * gx) {
    throw InvalidInput("dual_transitive_map: <f,x><g,y> = <f,y><g,x> (degenerate)");
  }
  const CoefficientTriple t = solve_coefficients(fx, gx, gy);

  // S u = u + f(u) (a x + b y) + g(u) (b x + c y).
  SparseVector v1 = x.scaled(t.a) + y.scaled(t.b);
  SparseVector v2 = x.scaled(t.b) + y.scaled(t.c);
  OperatorExpr s = OperatorExpr::finite_rank_update(
      {UpdatePair{std::move(v1), f}, UpdatePair{std::move(v2), g}});

  if (apply(s, x) != y) throw std::logic_error("dual_transitive_map: S x != y");
  if (dual_apply(s, f) != g) throw std::logic_error("dual_transitive_map: S' f != g");

  // Restriction of S to span{x, y} in the basis {x, y}; its determinant must
  // match the closed form -(a <g,x> + b <g,y>) and be nonzero.
  RationalMatrix restriction(2, 2);
  restriction.at(0, 0) = t.a * fx + t.b * gx + Rational(1);
  restriction.at(0, 1) = t.a * fy + t.b * gy;
  restriction.at(1, 0) = t.b * fx + t.c * gx;
  restriction.at(1, 1) = t.b * fy + t.c * gy + Rational(1);
  const Rational det = restriction.determinant();
  if (det != -(t.a * gx + t.b * gy) || det.is_zero()) {
    throw std::logic_error("dual_transitive_map: restriction determinant identity failed");
  }
  invert_update(s);  // certifies invertibility
  return s;
}

OperatorTuple conjugate_tuple(const OperatorExpr& base,
                              const std::vector<OperatorExpr>& similarities) {
  std::vector<OperatorExpr> out;
  out.reserve(similarities.size());
  for (const auto& s : similarities) out.push_back(conjugate(s, base));
  return OperatorTuple(std::move(out));
}

bool genericity_check(const SparseVector& x, const SparseFunctional& f,
                      const std::vector<SparseVector>& ys,
                      const std::vector<SparseFunctional>& fs) {
  if (ys.size() != fs.size() || ys.empty()) {
    throw InvalidInput("genericity_check: ys and fs must have equal positive length");
  }
  std::vector<SparseFunctional> all;
  all.push_back(f);
  all.insert(all.end(), fs.begin(), fs.end());
  if (!linearly_independent(all)) return false;
  const Rational fx = pair(f, x);
  for (std::size_t j = 0; j < ys.size(); ++j) {
    const Rational fjyj = pair(fs[j], ys[j]);
    if (fjyj.is_zero()) return false;
    if (pair(f, ys[j]) * pair(fs[j], x) == fx * fjyj) return false;
  }
  return true;
}

namespace {

TargetSchedule conjugated_targets(const TargetSchedule& schedule,
                                  const std::vector<OperatorExpr>& similarities,
                                  const std::vector<Rational>* rescale) {
  Rational growth;
  for (std::size_t j = 0; j < similarities.size(); ++j) {
    Rational g = growth_bound_sq(similarities[j]);
    if (rescale != nullptr) g *= (*rescale)[j].squared();
    growth += g;
  }
  TargetSchedule out;
  out.m = schedule.m;
  for (std::size_t k = 0; k < schedule.targets.size(); ++k) {
    std::vector<SparseVector> tuple;
    tuple.reserve(schedule.m);
    for (std::size_t j = 0; j < schedule.m; ++j) {
      SparseVector t = schedule.targets[k][j];
      if (rescale != nullptr) t = t.scaled((*rescale)[j]);
      tuple.push_back(apply(similarities[j], t));
    }
    out.targets.push_back(std::move(tuple));
    out.tolerance_sq.push_back(growth * schedule.tolerance_sq[k]);
  }
  out.validate();
  return out;
}

}  // namespace

DisjointTupleArtifact construct_disjoint_tuple(std::size_t m, const TargetSchedule& schedule,
                                               const Rational& lambda) {
  if (m == 0) throw InvalidInput("construct_disjoint_tuple: m must be positive");
  TargetSchedule sched = schedule;
  if (sched.targets.empty()) {
    // Degenerate request: aim every component at e_0 so no source is zero.
    sched = TargetSchedule{};
    sched.m = m;
    sched.targets.push_back(std::vector<SparseVector>(m, SparseVector::unit(0)));
    sched.tolerance_sq.push_back(Rational(1, 4));
  }
  if (sched.m != m) throw InvalidInput("construct_disjoint_tuple: schedule arity differs from m");

  SynthesisCertificate cert = synthesize(lambda, sched);
  const SparseVector x = SparseVector::unit(0);
  OperatorExpr base = scaled_backward_shift(lambda);

  std::vector<OperatorExpr> similarities;
  std::vector<OperatorExpr> conjugates;
  similarities.reserve(m);
  conjugates.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (cert.vectors[j].is_zero()) {
      // Every scheduled target is zero in this component, so the synthesized
      // source is zero and no transitive map to e_0 exists. A longer
      // schedule always reaches tuples that are nonzero in every component.
      throw InvalidInput(
          "construct_disjoint_tuple: component " + std::to_string(j) +
          " only has zero targets; increase the target count");
    }
    OperatorExpr s = transitive_map(cert.vectors[j], x);
    if (apply(s, cert.vectors[j]) != x) {
      throw std::logic_error("construct_disjoint_tuple: S_j x_j != x");
    }
    conjugates.push_back(conjugate(s, base));
    similarities.push_back(std::move(s));
  }

  DisjointTupleArtifact art{std::move(base), x,
                            std::move(similarities), cert.vectors,
                            std::move(conjugates),  std::move(sched),
                            std::nullopt,           std::nullopt,
                            std::nullopt};
  art.conjugated_schedule = conjugated_targets(*art.schedule, art.similarities, nullptr);
  art.certificate = std::move(cert);
  return art;
}

DisjointTupleArtifact construct_dual_tuple(const OperatorExpr& base, const SparseVector& x,
                                           const SparseFunctional& f,
                                           const std::vector<SparseVector>& ys,
                                           const std::vector<SparseFunctional>& fs,
                                           const SynthesisCertificate* certificate,
                                           const TargetSchedule* schedule) {
  if (pair(f, x) != Rational(1)) throw InvalidInput("construct_dual_tuple: <f, x> must be 1");
  if (!genericity_check(x, f, ys, fs)) {
    throw InvalidInput("construct_dual_tuple: genericity check failed");
  }
  if ((certificate == nullptr) != (schedule == nullptr)) {
    throw InvalidInput("construct_dual_tuple: certificate and schedule go together");
  }
  if (certificate != nullptr && certificate->vectors != ys) {
    throw InvalidInput("construct_dual_tuple: certificate vectors differ from ys");
  }
  const std::size_t m = ys.size();
  std::vector<Rational> rescale(m);
  std::vector<SparseVector> sources(m);
  std::vector<OperatorExpr> similarities;
  std::vector<OperatorExpr> conjugates;
  similarities.reserve(m);
  conjugates.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    rescale[j] = pair(fs[j], ys[j]).inverse();
    sources[j] = ys[j].scaled(rescale[j]);
    // Now <f_j, x_j> = 1 = <f, x>; the genericity inequality survives the
    // rescale, which is exactly the admissibility dual_transitive_map needs.
    if (pair(f, sources[j]) * pair(fs[j], x) == pair(f, x) * pair(fs[j], sources[j])) {
      throw std::logic_error("construct_dual_tuple: admissibility lost after rescale");
    }
    OperatorExpr s = dual_transitive_map(sources[j], x, f, fs[j]);
    if (apply(s, sources[j]) != x) throw std::logic_error("construct_dual_tuple: S_j x_j != x");
    if (dual_apply(s, f) != fs[j]) throw std::logic_error("construct_dual_tuple: S_j' f != f_j");
    conjugates.push_back(conjugate(s, base));
    similarities.push_back(std::move(s));
  }
  DisjointTupleArtifact art{base,
                            x,
                            std::move(similarities),
                            std::move(sources),
                            std::move(conjugates),
                            std::nullopt,
                            std::nullopt,
                            std::nullopt,
                            DualData{f, fs, rescale}};
  if (certificate != nullptr) {
    art.schedule = *schedule;
    art.certificate = *certificate;
    art.conjugated_schedule = conjugated_targets(*schedule, art.similarities, &rescale);
  }
  return art;
}

RepairResult repair_genericity(const SparseVector& x, const SparseFunctional& f,
                               std::vector<SparseVector> ys, std::vector<SparseFunctional> fs,
                               const SynthesisCertificate* certificate,
                               const TargetSchedule* schedule) {
  if (ys.size() != fs.size() || ys.empty()) {
    throw InvalidInput("repair_genericity: ys and fs must have equal positive length");
  }
  // With <f, x> != 0 each genericity condition excludes at most one
  // perturbation size per component, so the search below terminates.
  if (pair(f, x).is_zero()) throw InvalidInput("repair_genericity: <f, x> must be nonzero");
  if ((certificate == nullptr) != (schedule == nullptr)) {
    throw InvalidInput("repair_genericity: certificate and schedule go together");
  }
  if (certificate != nullptr && certificate->vectors != ys) {
    throw InvalidInput("repair_genericity: certificate vectors differ from ys");
  }
  if (genericity_check(x, f, ys, fs)) {
    RepairResult res{std::move(ys), std::move(fs), Rational(0), std::nullopt};
    if (certificate != nullptr) res.certificate = *certificate;
    return res;
  }
  const std::size_t m = ys.size();

  // Fresh private coordinates: beyond every support in play, and beyond
  // horizon + target extent so a perturbation at p contributes exactly
  // delta^2 lambda^{2 n_k} to visit errors, disjoint from targets and tails.
  std::size_t base = 0;
  auto track = [&base](std::optional<std::size_t> mi) {
    if (mi) base = std::max(base, *mi + 1);
  };
  track(x.max_index());
  track(f.max_index());
  for (const auto& y : ys) track(y.max_index());
  for (const auto& g : fs) track(g.max_index());
  if (certificate != nullptr) {
    std::size_t ext = 0;
    for (const auto& tuple : schedule->targets) {
      for (const auto& t : tuple) {
        if (auto mi = t.max_index()) ext = std::max(ext, *mi + 1);
      }
    }
    base = std::max(base, certificate->horizon + ext + 1);
  }

  // Cap on delta^2 from the certificate: eta_k + delta^2 lambda^{2 n_k}
  // must stay within tolerance_sq[k].
  std::optional<Rational> delta_sq_cap;
  if (certificate != nullptr) {
    const Rational lam_sq = certificate->lambda.squared();
    for (std::size_t k = 0; k < certificate->visits.size(); ++k) {
      const Rational room = schedule->tolerance_sq[k] - certificate->visits[k].error_sq_bound;
      if (room.sign() <= 0) {
        throw InvalidInput("repair_genericity: certificate has no tolerance headroom");
      }
      const Rational cap = room / lam_sq.pow(static_cast<long>(certificate->visits[k].time));
      if (!delta_sq_cap || cap < *delta_sq_cap) delta_sq_cap = cap;
    }
  }

  const Rational fx = pair(f, x);
  long k_exp = 1;
  for (int guard = 0; guard < 20000; ++guard, ++k_exp) {
    const Rational delta = Rational::pow2(-k_exp);
    const Rational delta_sq = delta.squared();
    if (delta_sq_cap && *delta_sq_cap < delta_sq) continue;
    bool ok = true;
    for (std::size_t j = 0; j < m && ok; ++j) {
      const Rational vj = pair(fs[j], ys[j]);
      if ((vj + delta_sq).is_zero()) ok = false;
      if (pair(f, ys[j]) * pair(fs[j], x) == fx * (vj + delta_sq)) ok = false;
    }
    if (!ok) continue;

    RepairResult res;
    res.delta = delta;
    res.ys = std::move(ys);
    res.fs = std::move(fs);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t p = base + j;
      res.ys[j] = res.ys[j] + SparseVector::unit(p).scaled(delta);
      res.fs[j] = res.fs[j] + SparseFunctional::unit(p).scaled(delta);
    }
    if (!genericity_check(x, f, res.ys, res.fs)) {
      throw std::logic_error("repair_genericity: perturbation failed to restore genericity");
    }
    if (certificate != nullptr) {
      SynthesisCertificate updated = *certificate;
      updated.vectors = res.ys;
      const Rational lam_sq = certificate->lambda.squared();
      for (auto& visit : updated.visits) {
        visit.error_sq_bound += delta_sq * lam_sq.pow(static_cast<long>(visit.time));
        if (schedule->tolerance_sq[visit.target_index] < visit.error_sq_bound) {
          throw std::logic_error("repair_genericity: perturbed bound exceeds tolerance");
        }
      }
      res.certificate = std::move(updated);
    }
    return res;
  }
  throw std::logic_error("repair_genericity: no admissible perturbation size found");
}

}  // namespace lindyn

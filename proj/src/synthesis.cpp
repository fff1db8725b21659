#include "lindyn/synthesis.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "lindyn/errors.hpp"

namespace lindyn {

void GridSpec::validate() const {
  if (dimension == 0) throw InvalidInput("GridSpec: dimension must be positive");
  if (coordinates.empty()) throw InvalidInput("GridSpec: empty coordinate set");
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    if (!coordinates[i].is_dyadic()) throw InvalidInput("GridSpec: coordinates must be dyadic");
    if (i > 0 && !(coordinates[i - 1] < coordinates[i])) {
      throw InvalidInput("GridSpec: coordinates must be sorted and unique");
    }
  }
}

void TargetSchedule::validate() const {
  if (m == 0) throw InvalidInput("TargetSchedule: m must be positive");
  if (targets.size() != tolerance_sq.size()) {
    throw InvalidInput("TargetSchedule: one tolerance per target required");
  }
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (targets[k].size() != m) throw InvalidInput("TargetSchedule: target arity differs from m");
    if (tolerance_sq[k].sign() <= 0) throw InvalidInput("TargetSchedule: tolerances must be positive");
    if (k > 0 && !(tolerance_sq[k] < tolerance_sq[k - 1])) {
      throw InvalidInput("TargetSchedule: tolerances must decrease strictly");
    }
  }
  if (grid) {
    grid->validate();
    for (const auto& tuple : targets) {
      for (const auto& t : tuple) {
        for (const auto& [i, c] : t.entries()) {
          if (i >= grid->dimension) throw InvalidInput("TargetSchedule: support exceeds grid dimension");
          if (std::find(grid->coordinates.begin(), grid->coordinates.end(), c) ==
              grid->coordinates.end()) {
            throw InvalidInput("TargetSchedule: coefficient not in grid coordinate set");
          }
        }
      }
    }
  }
}

namespace {

Rational magnitude(const SparseVector& v) {
  Rational total;
  for (const auto& [i, c] : v.entries()) total += c.abs();
  return total;
}

// Canonical order on grid vectors: support size, total magnitude, support
// indices lexicographically, then coefficients lexicographically.
bool canonical_less(const SparseVector& a, const SparseVector& b) {
  if (a.support_size() != b.support_size()) return a.support_size() < b.support_size();
  const Rational ma = magnitude(a);
  const Rational mb = magnitude(b);
  if (ma != mb) return ma < mb;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  for (; ia != a.entries().end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
  }
  ia = a.entries().begin();
  ib = b.entries().begin();
  for (; ia != a.entries().end(); ++ia, ++ib) {
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return false;
}

std::vector<SparseVector> enumerate_singles(const GridSpec& grid) {
  std::vector<Rational> pool;
  for (const auto& c : grid.coordinates) {
    if (!c.is_zero()) pool.push_back(c);
  }
  // (|pool| + 1)^dimension vectors in total; keep desk-scale grids honest.
  double total = 1.0;
  for (std::size_t i = 0; i < grid.dimension; ++i) {
    total *= static_cast<double>(pool.size() + 1);
    if (total > 1.0e6) throw InvalidInput("enumerate_targets: grid too large to enumerate");
  }
  std::vector<SparseVector> singles;
  singles.emplace_back();  // zero vector, the smallest graded element
  // Grow support subsets one coordinate at a time.
  std::vector<std::pair<std::size_t, Rational>> stack;
  auto emit = [&](auto&& self, std::size_t next_index) -> void {
    for (std::size_t i = next_index; i < grid.dimension; ++i) {
      for (const auto& c : pool) {
        stack.emplace_back(i, c);
        singles.push_back(SparseVector::from_entries(stack));
        self(self, i + 1);
        stack.pop_back();
      }
    }
  };
  emit(emit, 0);
  std::sort(singles.begin(), singles.end(), canonical_less);
  return singles;
}

}  // namespace

TargetSchedule enumerate_targets(const GridSpec& grid, std::size_t count, std::size_t m,
                                 const Rational& eps_base) {
  if (count == 0) throw InvalidInput("enumerate_targets: count must be positive");
  if (m == 0) throw InvalidInput("enumerate_targets: m must be positive");
  grid.validate();
  if (eps_base.sign() <= 0 || !(eps_base < Rational(1)) || !eps_base.is_dyadic()) {
    throw InvalidInput("enumerate_targets: tolerance base must be dyadic in (0, 1)");
  }
  const std::vector<SparseVector> singles = enumerate_singles(grid);

  struct Key {
    std::size_t support;
    Rational mag;
  };
  std::vector<Key> keys;
  keys.reserve(singles.size());
  for (const auto& v : singles) keys.push_back(Key{v.support_size(), magnitude(v)});

  // Graded product order: total support size, total magnitude, index tuple
  // lexicographically (singles are already canonically sorted, so index
  // order refines the per-component order). Frontier search with a min-set.
  struct Item {
    std::size_t support;
    Rational mag;
    std::vector<std::size_t> idx;
  };
  auto item_less = [](const Item& a, const Item& b) {
    if (a.support != b.support) return a.support < b.support;
    if (a.mag != b.mag) return a.mag < b.mag;
    return a.idx < b.idx;
  };
  auto make_item = [&](std::vector<std::size_t> idx) {
    Item it{0, Rational(0), std::move(idx)};
    for (std::size_t j : it.idx) {
      it.support += keys[j].support;
      it.mag += keys[j].mag;
    }
    return it;
  };

  std::set<Item, decltype(item_less)> frontier(item_less);
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> start(m, 0);
  seen.insert(start);
  frontier.insert(make_item(std::move(start)));

  TargetSchedule schedule;
  schedule.m = m;
  schedule.grid = grid;
  while (schedule.targets.size() < count && !frontier.empty()) {
    Item cur = *frontier.begin();
    frontier.erase(frontier.begin());
    std::vector<SparseVector> tuple;
    tuple.reserve(m);
    for (std::size_t j : cur.idx) tuple.push_back(singles[j]);
    schedule.targets.push_back(std::move(tuple));
    for (std::size_t pos = 0; pos < m; ++pos) {
      if (cur.idx[pos] + 1 >= singles.size()) continue;
      std::vector<std::size_t> next = cur.idx;
      ++next[pos];
      if (seen.insert(next).second) frontier.insert(make_item(std::move(next)));
    }
  }
  if (schedule.targets.size() < count) {
    throw InvalidInput("enumerate_targets: grid exhausted before reaching count");
  }
  for (std::size_t k = 1; k <= count; ++k) {
    schedule.tolerance_sq.push_back(eps_base.pow(2 * static_cast<long>(k)));
  }
  schedule.validate();
  return schedule;
}

namespace {

// 1 + largest support index over the tuple's components (0 for an all-zero
// tuple); (lambda B)^n annihilates the block exactly once n reaches this.
std::size_t tuple_extent(const std::vector<SparseVector>& tuple) {
  std::size_t ext = 0;
  for (const auto& t : tuple) {
    if (auto mi = t.max_index()) ext = std::max(ext, *mi + 1);
  }
  return ext;
}

Rational tuple_max_norm_sq(const std::vector<SparseVector>& tuple) {
  Rational best;
  for (const auto& t : tuple) {
    Rational n = norm_sq(t);
    if (best < n) best = n;
  }
  return best;
}

}  // namespace

SynthesisCertificate synthesize(const Rational& lambda, const TargetSchedule& schedule) {
  schedule.validate();
  if (schedule.targets.empty()) throw InvalidInput("synthesize: empty schedule");
  if (lambda.abs() < Rational(2)) throw InvalidInput("synthesize: |lambda| must be at least 2");
  const std::size_t m = schedule.m;
  const std::size_t count = schedule.targets.size();
  const Rational lam_sq = lambda.squared();

  std::vector<std::size_t> extent(count);
  std::vector<Rational> block_norm(count);
  for (std::size_t k = 0; k < count; ++k) {
    extent[k] = tuple_extent(schedule.targets[k]);
    block_norm[k] = tuple_max_norm_sq(schedule.targets[k]);
  }

  // Visit times. The gap rule keeps the blocks of x_i on disjoint coordinate
  // ranges and makes every earlier block vanish exactly at later visits. On
  // top of that, block k is only allowed to contribute a 2^-(k-j) share of
  // tolerance j to the tail seen at visit j < k:
  //   block_norm[k] * 2^(k-j) * lam_sq^{n_j} <= tol_sq[j] * lam_sq^{n_k},
  // so the total tail at visit j stays within tol_sq[j].
  std::vector<std::size_t> times(count);
  std::vector<Rational> lam_sq_pow(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t cand = (k == 0) ? 1 : times[k - 1] + extent[k - 1] + 1;
    Rational cur_pow = lam_sq.pow(static_cast<long>(cand));
    if (!block_norm[k].is_zero()) {
      for (std::size_t j = 0; j < k; ++j) {
        const Rational lhs =
            block_norm[k] * Rational::pow2(static_cast<long>(k - j)) * lam_sq_pow[j];
        while (schedule.tolerance_sq[j] * cur_pow < lhs) {
          ++cand;
          cur_pow *= lam_sq;
        }
      }
    }
    times[k] = cand;
    lam_sq_pow[k] = cur_pow;
  }

  std::vector<SparseVector> xs(m);
  for (std::size_t k = 0; k < count; ++k) {
    const Rational weight = lambda.pow(-static_cast<long>(times[k]));
    for (std::size_t i = 0; i < m; ++i) {
      xs[i] = xs[i] + schedule.targets[k][i].scaled(weight).shifted_up(times[k]);
    }
  }

  // Exact tail bound per visit: the later blocks sit on disjoint coordinate
  // ranges, so the error norm is literally this sum, not just bounded by it.
  SynthesisCertificate cert;
  cert.lambda = lambda;
  cert.vectors = std::move(xs);
  for (std::size_t k = 0; k < count; ++k) {
    Rational eta;
    for (std::size_t i = 0; i < m; ++i) {
      Rational tail;
      for (std::size_t k2 = k + 1; k2 < count; ++k2) {
        tail += (lam_sq_pow[k] / lam_sq_pow[k2]) * norm_sq(schedule.targets[k2][i]);
      }
      if (eta < tail) eta = tail;
    }
    if (schedule.tolerance_sq[k] < eta) {
      throw std::logic_error("synthesize: tail bound exceeded its tolerance budget");
    }
    cert.visits.push_back(Visit{k, times[k], std::move(eta)});
  }
  cert.horizon = times.back();
  return cert;
}

CertificateCheck verify_certificate(const SynthesisCertificate& certificate,
                                    const TargetSchedule& schedule, ExecMode mode) {
  schedule.validate();
  const std::size_t m = schedule.m;
  const std::size_t count = schedule.targets.size();
  if (certificate.vectors.size() != m) {
    throw InvalidInput("verify_certificate: certificate arity differs from schedule");
  }
  if (certificate.visits.size() != count) {
    throw InvalidInput("verify_certificate: one visit per target required");
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (certificate.visits[k].target_index != k) {
      throw InvalidInput("verify_certificate: visits must follow schedule order");
    }
    if (k > 0 && certificate.visits[k].time <= certificate.visits[k - 1].time) {
      throw InvalidInput("verify_certificate: visit times must increase strictly");
    }
  }

  CertificateCheck out;
  out.visits.resize(count * m);
  const OperatorExpr op = scaled_backward_shift(certificate.lambda);

  if (mode == ExecMode::serial) {
    // Reference path: one incremental replay per component.
    for (std::size_t i = 0; i < m; ++i) {
      SparseVector cur = certificate.vectors[i];
      std::size_t n = 0;
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t target_time = certificate.visits[k].time;
        for (; n < target_time; ++n) cur = apply(op, cur);
        VisitCheck& vc = out.visits[k * m + i];
        vc.target_index = k;
        vc.component = i;
        vc.error_sq = norm_sq(cur - schedule.targets[k][i]);
        vc.pass = vc.error_sq <= schedule.tolerance_sq[k];
      }
    }
  } else {
    const long flat = static_cast<long>(count * m);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long f = 0; f < flat; ++f) {
      const std::size_t k = static_cast<std::size_t>(f) / m;
      const std::size_t i = static_cast<std::size_t>(f) % m;
      VisitCheck& vc = out.visits[k * m + i];
      vc.target_index = k;
      vc.component = i;
      const SparseVector reached =
          power_apply(op, certificate.vectors[i], certificate.visits[k].time);
      vc.error_sq = norm_sq(reached - schedule.targets[k][i]);
      vc.pass = vc.error_sq <= schedule.tolerance_sq[k];
    }
  }

  out.pass = true;
  for (const auto& vc : out.visits) out.pass = out.pass && vc.pass;
  return out;
}

}  // namespace lindyn

#pragma once

#include "mergemetrics/barcode.hpp"
#include "mergemetrics/generate.hpp"
#include "mergemetrics/interleaving.hpp"

namespace mm {

struct waypoint {
  double t = 0.0;
  merge_tree tree;
};

// Finite waypoint list standing in for a continuous path; parameters run from
// 0 to 1 strictly increasing.
struct discrete_path {
  std::vector<waypoint> waypoints;
  std::size_t size() const { return waypoints.size(); }
};

inline void check_path(const discrete_path& p) {
  if (p.size() < 2) fail(errc::invalid_argument, "a path needs at least two waypoints");
  if (p.waypoints.front().t != 0.0 || p.waypoints.back().t != 1.0)
    fail(errc::invalid_argument, "path parameters must run from 0 to 1");
  for (std::size_t k = 1; k < p.size(); ++k)
    if (!(p.waypoints[k - 1].t < p.waypoints[k].t))
      fail(errc::invalid_argument, "path parameters must increase strictly");
}

enum class path_metric { bottleneck, interleaving_oracle, cophenetic_upper };

inline double tree_distance(const merge_tree& x, const merge_tree& y, path_metric metric,
                            std::size_t leaf_limit = oracle_leaf_limit()) {
  switch (metric) {
    case path_metric::bottleneck:
      return bottleneck(elder_rule(x), elder_rule(y)).distance;
    case path_metric::interleaving_oracle:
      return interleaving_distance_exact(x, y, leaf_limit).distance;
    case path_metric::cophenetic_upper:
      return best_labeled_upper_bound(x, y, leaf_limit).bound;
  }
  fail(errc::invalid_argument, "unknown path metric");
}

// Sum of consecutive-pair distances; refining the waypoint list never
// decreases it.
inline double discrete_length(const discrete_path& p, path_metric metric,
                              std::size_t leaf_limit = oracle_leaf_limit()) {
  check_path(p);
  double total = 0.0;
  for (std::size_t k = 1; k < p.size(); ++k)
    total += tree_distance(p.waypoints[k - 1].tree, p.waypoints[k].tree, metric, leaf_limit);
  return total;
}

// Waypoint-wise i^eps: no leg's bottleneck distance and no waypoint's leaf
// count can grow.
inline discrete_path prune_path(const discrete_path& p, double eps) {
  check_path(p);
  if (!(eps >= 0)) fail(errc::negative_epsilon, "prune epsilon must be >= 0");
  discrete_path out;
  out.waypoints.reserve(p.size());
  for (const auto& w : p.waypoints) out.waypoints.push_back({w.t, shift(w.tree, eps)});
  return out;
}

// The path t -> i^{t eps}(T): eps-Lipschitz in d_I, so each of the K legs
// has interleaving distance at most eps / K.
inline discrete_path shrink_legs(const merge_tree& t, double eps, std::size_t K) {
  if (!(eps >= 0)) fail(errc::negative_epsilon, "shrink epsilon must be >= 0");
  if (K < 1) fail(errc::invalid_argument, "need at least one leg");
  discrete_path out;
  for (std::size_t k = 0; k <= K; ++k) {
    double s = static_cast<double>(k) / static_cast<double>(K);
    out.waypoints.push_back({s, shift(t, eps * s)});
  }
  return out;
}

// Largest matrix entrywise below m whose off-diagonal part satisfies the
// three-point condition: entry ij becomes the minimax path value min over
// index paths of the max entry along the path. Diagonal entries are kept.
inline std::vector<std::vector<double>> minimax_closure(std::vector<std::vector<double>> m) {
  std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == k) continue;
        double via = std::max(m[i][k], m[k][j]);
        if (via < m[i][j]) m[i][j] = m[j][i] = via;
      }
    }
  return m;
}

namespace detail {

inline discrete_path geodesic_from_witness(const merge_tree& a, const merge_tree& b,
                                           std::size_t K, const exact_interleaving& ex) {
  std::size_t na = a.leaf_count(), nb = b.leaf_count(), n = na + nb;
  // Common labels: every leaf of either tree, located in both trees through
  // the witness images.
  std::vector<tree_point> pos_a, pos_b;
  for (std::size_t i = 0; i < na; ++i) pos_a.push_back(node_point(a, a.leaves[i]));
  for (std::size_t j = 0; j < nb; ++j) pos_a.push_back(ex.witness.beta[j]);
  for (std::size_t i = 0; i < na; ++i) pos_b.push_back(ex.witness.alpha[i]);
  for (std::size_t j = 0; j < nb; ++j) pos_b.push_back(node_point(b, b.leaves[j]));

  std::vector<std::vector<double>> m0(n, std::vector<double>(n)), m1 = m0;
  double drift = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      m0[i][j] = m0[j][i] = i == j ? pos_a[i].height : lca_height(a, pos_a[i], pos_a[j]);
      m1[i][j] = m1[j][i] = i == j ? pos_b[i].height : lca_height(b, pos_b[i], pos_b[j]);
      drift = std::max(drift, std::abs(m0[i][j] - m1[i][j]));
    }
  if (drift > ex.distance + 1e-9)
    fail(errc::check_failed, "labeled matrices drift farther than the interleaving distance");

  discrete_path out;
  std::vector<double> diag(n);
  std::vector<std::vector<double>> mt(n, std::vector<double>(n));
  for (std::size_t k = 0; k <= K; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(K);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) mt[i][j] = (1.0 - t) * m0[i][j] + t * m1[i][j];
    mt = minimax_closure(std::move(mt));
    for (std::size_t i = 0; i < n; ++i) diag[i] = mt[i][i];
    out.waypoints.push_back({t, reconstruct_from_matrix(diag, mt).tree});
  }
  if (!isomorphic(out.waypoints.front().tree, a) || !isomorphic(out.waypoints.back().tree, b))
    fail(errc::check_failed, "geodesic endpoints do not reproduce the inputs");
  return out;
}

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

// Discrete path from a to b whose bottleneck length certifies the interleaving
// distance: label both trees with the union of their leaves through an optimal
// witness, interpolate the labeled matrices, and repair each sample with the
// minimax closure before rebuilding a tree from it.
inline discrete_path geodesic_witness(const merge_tree& a, const merge_tree& b, std::size_t K,
                                      std::size_t leaf_limit = oracle_leaf_limit()) {
  if (K < 1) fail(errc::invalid_argument, "need at least one leg");
  return detail::geodesic_from_witness(a, b, K, interleaving_distance_exact(a, b, leaf_limit));
}

struct theorem_trial {
  std::size_t index = 0;
  merge_tree a, b;
  double d_i = 0.0;       // oracle interleaving distance
  double s = 0.0;         // bottleneck length of the witness path at K samples
  double s_coarse = 0.0;  // same at K/2 samples
  double d_b = 0.0;       // bottleneck distance of the endpoints
  bool hard_length = false, hard_db = false, hard_monotone = false, soft = false;

  bool hard() const { return hard_length && hard_db && hard_monotone; }
};

struct theorem_report {
  std::size_t trials = 0, max_leaves = 0, samples = 0;
  std::uint64_t seed = 0;
  std::size_t hard_pass = 0, soft_pass = 0;
  std::vector<theorem_trial> records;

  bool all_hard() const { return hard_pass == trials; }
  double soft_rate() const {
    return trials == 0 ? 1.0 : static_cast<double>(soft_pass) / static_cast<double>(trials);
  }
};

// Per trial: sample a tree pair, compute the oracle interleaving distance and
// the witness path's bottleneck length, and record the hard bounds
// (S <= d_I + 1e-9, d_B <= d_I, coarse-vs-fine monotonicity) plus the soft
// near-equality |S - d_I| <= 1e-6 max(1, d_I). Each trial derives its
// generator state from (seed, index), so the outcome is schedule-independent.
inline theorem_report verify_intrinsic_theorem(std::size_t trials, std::size_t max_leaves,
                                               std::size_t samples, std::uint64_t seed,
                                               std::size_t leaf_limit = oracle_leaf_limit()) {
  if (max_leaves < 1 || max_leaves > leaf_limit)
    fail(errc::too_many_leaves, "max_leaves exceeds the oracle leaf limit");
  if (samples < 1) fail(errc::invalid_argument, "need at least one sample leg");
  theorem_report rep;
  rep.trials = trials;
  rep.max_leaves = max_leaves;
  rep.samples = samples;
  rep.seed = seed;
  for (std::size_t idx = 0; idx < trials; ++idx) {
    std::mt19937_64 g(detail::mix64(seed) ^ detail::mix64(idx + 1));
    std::size_t n1 = 1 + detail::bounded(g, max_leaves);
    std::size_t n2 = 1 + detail::bounded(g, max_leaves);
    theorem_trial tr;
    tr.index = idx;
    tr.a = random_tree(n1, g());
    tr.b = random_tree(n2, g());
    exact_interleaving ex = interleaving_distance_exact(tr.a, tr.b, leaf_limit);
    tr.d_i = ex.distance;
    discrete_path fine = detail::geodesic_from_witness(tr.a, tr.b, samples, ex);
    tr.s = discrete_length(fine, path_metric::bottleneck, leaf_limit);
    if (samples >= 2) {
      discrete_path coarse = detail::geodesic_from_witness(tr.a, tr.b, samples / 2, ex);
      tr.s_coarse = discrete_length(coarse, path_metric::bottleneck, leaf_limit);
    } else {
      tr.s_coarse = tr.s;
    }
    tr.d_b = bottleneck(elder_rule(tr.a), elder_rule(tr.b)).distance;
    tr.hard_length = tr.s <= tr.d_i + 1e-9;
    tr.hard_db = tr.d_b <= tr.d_i;
    tr.hard_monotone = tr.s_coarse <= tr.s + 1e-12;
    tr.soft = std::abs(tr.s - tr.d_i) <= 1e-6 * std::max(1.0, tr.d_i);
    rep.hard_pass += tr.hard() ? 1 : 0;
    rep.soft_pass += tr.soft ? 1 : 0;
    rep.records.push_back(std::move(tr));
  }
  return rep;
}

}  // namespace mm

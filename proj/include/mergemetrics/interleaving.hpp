#pragma once

#include <cstdlib>

#include "mergemetrics/matrix.hpp"

namespace mm {

// Max leaf count per tree accepted by the exhaustive procedures. The
// MERGEMETRICS_MAX_ORACLE_LEAVES environment variable overrides the default.
inline std::size_t oracle_leaf_limit() {
  static const std::size_t limit = [] {
    if (const char* env = std::getenv("MERGEMETRICS_MAX_ORACLE_LEAVES")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    }
    return std::size_t{6};
  }();
  return limit;
}

// Height of the join of two points without materializing it.
inline double lca_height(const merge_tree& t, const tree_point& p, const tree_point& q) {
  return std::max(t.height(lca_node(t, p.base, q.base)), std::max(p.height, q.height));
}

// Leaf images certifying an eps-interleaving: alpha[i] is the point of T' at
// height f(l_i) + eps, beta symmetric. Three laws make the pair a genuine
// interleaving: the height law (by construction), the LCA law
//   lca(alpha l_i, alpha l_j) <= f(LCA(l_i, l_j)) + eps,
// which makes the leaf assignment extend to a continuous map, and the
// composition law beta(alpha(x)) = i^{2 eps}(x) checked through every leaf
// below each image.
struct interleaving_witness {
  double eps = 0.0;
  std::vector<tree_point> alpha;  // per leaf of the first tree, in leaf order
  std::vector<tree_point> beta;   // per leaf of the second tree
};

namespace detail {

struct interleaving_search {
  const merge_tree& a;
  const merge_tree& b;
  double eps;
  std::size_t na, nb;
  std::vector<double> ha, hb;                    // leaf heights
  std::vector<std::vector<double>> la, lb;       // leaf-pair LCA heights
  std::vector<std::uint64_t> under_a, under_b;   // node -> leaf-index bitmask
  std::vector<std::vector<tree_point>> ca, cb;   // candidate images per leaf
  std::vector<tree_point> i2a, i2b;              // i^{2 eps} of each leaf
  std::vector<tree_point> alpha, beta;
  std::vector<std::uint32_t> live;               // surviving cb candidates per b-leaf

  interleaving_search(const merge_tree& a_, const merge_tree& b_, double eps_)
      : a(a_), b(b_), eps(eps_), na(a_.leaf_count()), nb(b_.leaf_count()) {}

  bool prepare() {
    ha.resize(na);
    hb.resize(nb);
    for (std::size_t i = 0; i < na; ++i) ha[i] = a.height(a.leaves[i]);
    for (std::size_t j = 0; j < nb; ++j) hb[j] = b.height(b.leaves[j]);
    la.assign(na, std::vector<double>(na));
    lb.assign(nb, std::vector<double>(nb));
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < na; ++j)
        la[i][j] = a.height(lca_node(a, a.leaves[i], a.leaves[j]));
    for (std::size_t i = 0; i < nb; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        lb[i][j] = b.height(lca_node(b, b.leaves[i], b.leaves[j]));
    under_a = leaf_masks(a);
    under_b = leaf_masks(b);
    ca.resize(na);
    cb.resize(nb);
    for (std::size_t i = 0; i < na; ++i) {
      ca[i] = points_at_height(b, ha[i] + eps);
      if (ca[i].empty()) return false;
    }
    for (std::size_t j = 0; j < nb; ++j) {
      cb[j] = points_at_height(a, hb[j] + eps);
      if (cb[j].empty()) return false;
    }
    i2a.resize(na);
    i2b.resize(nb);
    for (std::size_t i = 0; i < na; ++i) i2a[i] = point_at(a, a.leaves[i], ha[i] + 2 * eps);
    for (std::size_t j = 0; j < nb; ++j) i2b[j] = point_at(b, b.leaves[j], hb[j] + 2 * eps);
    alpha.resize(na);
    beta.resize(nb);
    live.assign(nb, 0);
    for (std::size_t j = 0; j < nb; ++j) live[j] = (std::uint32_t{1} << cb[j].size()) - 1;
    return true;
  }

  static std::vector<std::uint64_t> leaf_masks(const merge_tree& t) {
    std::vector<std::uint64_t> mask(t.size(), 0);
    std::vector<std::size_t> leaf_index(t.size(), npos);
    for (std::size_t i = 0; i < t.leaf_count(); ++i) leaf_index[t.leaves[i]] = i;
    std::vector<std::size_t> order(t.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return std::tie(t.nodes[x].height, x) < std::tie(t.nodes[y].height, y);
    });
    for (std::size_t v : order) {
      if (t.is_leaf(v)) mask[v] = std::uint64_t{1} << leaf_index[v];
      if (t.parent(v) != npos) mask[t.parent(v)] |= mask[v];
    }
    return mask;
  }

  // Both composition constraints tying alpha[i] = p to beta[j] = q.
  bool compatible(std::size_t i, const tree_point& p, std::size_t j, const tree_point& q) const {
    if (under_b[p.base] >> j & 1)
      if (!(point_at(a, q.base, ha[i] + 2 * eps) == i2a[i])) return false;
    if (under_a[q.base] >> i & 1)
      if (!(point_at(b, p.base, hb[j] + 2 * eps) == i2b[j])) return false;
    return true;
  }

  bool assign_alpha(std::size_t i) {
    if (i == na) return assign_beta(0);
    for (const tree_point& p : ca[i]) {
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k)
        ok = lca_height(b, p, alpha[k]) <= la[i][k] + eps;
      if (!ok) continue;
      // forward-check: drop beta candidates incompatible with this image
      auto saved = live;
      for (std::size_t j = 0; j < nb && ok; ++j) {
        for (std::size_t c = 0; c < cb[j].size(); ++c)
          if ((live[j] >> c & 1) && !compatible(i, p, j, cb[j][c]))
            live[j] &= ~(std::uint32_t{1} << c);
        ok = live[j] != 0;
      }
      if (ok) {
        alpha[i] = p;
        if (assign_alpha(i + 1)) return true;
      }
      live = std::move(saved);
    }
    return false;
  }

  bool assign_beta(std::size_t j) {
    if (j == nb) return true;
    for (std::size_t c = 0; c < cb[j].size(); ++c) {
      if (!(live[j] >> c & 1)) continue;
      const tree_point& q = cb[j][c];
      bool ok = true;
      for (std::size_t k = 0; k < j && ok; ++k)
        ok = lca_height(a, q, beta[k]) <= lb[j][k] + eps;
      if (!ok) continue;
      beta[j] = q;
      if (assign_beta(j + 1)) return true;
    }
    return false;
  }
};

}  // namespace detail

// Decides eps-interleaving by exhaustive search over leaf images: candidates
// are the points at the required height, one per edge crossing it plus the
// ray, and alpha(i^t(l)) = i^t(alpha(l)) makes leaf-level search complete.
inline std::optional<interleaving_witness> decide_interleaving(
    const merge_tree& a, const merge_tree& b, double eps,
    std::size_t leaf_limit = oracle_leaf_limit()) {
  if (!(eps >= 0)) fail(errc::negative_epsilon, "interleaving epsilon must be >= 0");
  if (a.leaf_count() > leaf_limit || b.leaf_count() > leaf_limit)
    fail(errc::too_many_leaves, "tree exceeds the oracle leaf limit");
  detail::interleaving_search s(a, b, eps);
  if (!s.prepare()) return std::nullopt;
  if (!s.assign_alpha(0)) return std::nullopt;
  return interleaving_witness{eps, std::move(s.alpha), std::move(s.beta)};
}

struct exact_interleaving {
  double distance = 0.0;
  interleaving_witness witness;
};

// Exact interleaving distance: the minimum is attained, and feasibility can
// only flip where a shifted height meets a vertex height or 2 eps meets a
// height gap, so scanning the differences and half-differences of vertex
// heights finds it. A binary search on [0, trivial bound] to 1e-9 cross-checks
// the candidate set; disagreement or non-monotone decisions raise CheckFailed.
inline exact_interleaving interleaving_distance_exact(const merge_tree& a, const merge_tree& b,
                                                      std::size_t leaf_limit = oracle_leaf_limit()) {
  std::vector<double> hs;
  for (const auto& n : a.nodes) hs.push_back(n.height);
  for (const auto& n : b.nodes) hs.push_back(n.height);
  std::vector<double> cand{0.0};
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      double d = std::abs(hs[i] - hs[j]);
      cand.push_back(d);
      cand.push_back(d / 2.0);
    }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  double max_infeasible = -inf, min_feasible = inf;
  auto probe = [&](double e) {
    auto w = decide_interleaving(a, b, e, leaf_limit);
    if (w)
      min_feasible = std::min(min_feasible, e);
    else
      max_infeasible = std::max(max_infeasible, e);
    return w;
  };

  exact_interleaving out;
  bool found = false;
  for (double e : cand) {
    if (auto w = probe(e)) {
      out.distance = e;
      out.witness = std::move(*w);
      found = true;
      break;
    }
  }
  if (!found) fail(errc::check_failed, "no candidate epsilon is feasible");

  double bin = 0.0;
  if (!probe(0.0)) {
    double lo = 0.0, hi = trivial_interleaving_bound(a, b);
    if (!probe(hi)) fail(errc::check_failed, "decision rejects the trivial interleaving bound");
    while (hi - lo > 1e-9) {
      double mid = lo + (hi - lo) / 2.0;
      if (probe(mid))
        hi = mid;
      else
        lo = mid;
    }
    bin = hi;
  }
  if (std::abs(bin - out.distance) > 1e-9)
    fail(errc::check_failed, "binary search disagrees with the candidate scan");
  if (!(max_infeasible < min_feasible))
    fail(errc::check_failed, "interleaving decision is not monotone in epsilon");
  return out;
}

// max |M(T) - M(T')| over the given leaf correspondence; always an upper
// bound for the interleaving distance. bijection[i] positions the i-th leaf
// of `a` (in leaf order) onto a leaf of `b`.
inline double cophenetic_upper_bound(const merge_tree& a, const merge_tree& b,
                                     const std::vector<std::size_t>& bijection) {
  std::size_t n = a.leaf_count();
  if (b.leaf_count() != n || bijection.size() != n)
    fail(errc::leaf_count_mismatch, "bijection requires equal leaf counts");
  std::vector<bool> seen(n, false);
  for (std::size_t i : bijection) {
    if (i >= n || seen[i]) fail(errc::leaf_count_mismatch, "bijection is not a permutation");
    seen[i] = true;
  }
  cophenetic_matrix ma = cophenetic(a), mb = cophenetic(b);
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      bound = std::max(bound, std::abs(ma.entries[i][j] - mb.entries[bijection[i]][bijection[j]]));
  return bound;
}

struct labeled_bound {
  double bound = 0.0;
  std::vector<std::size_t> bijection;
};

// Exact minimum of cophenetic_upper_bound over all leaf bijections.
inline labeled_bound best_labeled_upper_bound(const merge_tree& a, const merge_tree& b,
                                              std::size_t leaf_limit = oracle_leaf_limit()) {
  std::size_t n = a.leaf_count();
  if (b.leaf_count() != n) fail(errc::leaf_count_mismatch, "leaf counts differ");
  if (n > leaf_limit) fail(errc::too_many_leaves, "tree exceeds the oracle leaf limit");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  labeled_bound best{inf, {}};
  do {
    double v = cophenetic_upper_bound(a, b, perm);
    if (v < best.bound) best = {v, perm};
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace mm

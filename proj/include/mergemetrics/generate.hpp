#pragma once

#include <random>
#include <set>

#include "mergemetrics/tree.hpp"

namespace mm {

namespace detail {

// Bounded draw from the standard-specified mt19937_64 stream; avoids the
// implementation-defined uniform_int_distribution.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace detail

// Deterministic random merge tree with exactly n leaves and pairwise-distinct
// vertex heights. Heights live on the grid lo + k/256, so sums and
// differences of them are exact in double precision; leaves land in the lower
// half of [lo, hi] and merge heights climb from there.
inline merge_tree random_tree(std::size_t n, std::uint64_t seed, double lo = 0.0,
                              double hi = 8.0) {
  if (n < 1) fail(errc::invalid_leaf_count, "a merge tree needs at least one leaf");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    fail(errc::invalid_argument, "height range must be a finite non-empty interval");
  constexpr double unit = 0x1p-8;
  std::uint64_t leaf_steps = static_cast<std::uint64_t>((hi - lo) * 128.0);
  if (leaf_steps + 1 < n) fail(errc::invalid_argument, "height range too small for n leaves");

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::set<double> used;
  auto fresh_leaf = [&] {
    while (true) {
      double h = lo + static_cast<double>(detail::bounded(rng, leaf_steps + 1)) * unit;
      if (used.insert(h).second) return h;
    }
  };

  std::vector<raw_node> raw;
  struct cluster {
    std::size_t node;
    double top;
  };
  std::vector<cluster> active;
  for (std::size_t i = 0; i < n; ++i) {
    raw.push_back({fresh_leaf(), std::nullopt});
    active.push_back({i, raw.back().height});
  }
  while (active.size() > 1) {
    std::size_t a = detail::bounded(rng, active.size());
    std::size_t b = detail::bounded(rng, active.size() - 1);
    if (b >= a) ++b;
    double base = std::max(active[a].top, active[b].top);
    double merge_h;
    do {
      merge_h = base + static_cast<double>(1 + detail::bounded(rng, 256)) * unit;
    } while (!used.insert(merge_h).second);
    std::size_t v = raw.size();
    raw.push_back({merge_h, std::nullopt});
    raw[active[a].node].parent = v;
    raw[active[b].node].parent = v;
    if (a < b) std::swap(a, b);
    active.erase(active.begin() + a);
    active.erase(active.begin() + b);
    active.push_back({v, merge_h});
  }
  return validate(raw);
}

// Lowers every leaf by a distinct epsilon_i in (0, eps], drawn as multiples
// of eps/(2k), so the resulting leaf heights are pairwise distinct. Topology
// is unchanged and d_I(input, output) <= eps.
inline merge_tree perturb_leaf_heights(const merge_tree& t, double eps, std::uint64_t seed) {
  if (!(eps > 0)) fail(errc::negative_epsilon, "perturbation epsilon must be positive");
  std::size_t k = t.leaf_count();
  double unit = eps / static_cast<double>(2 * k);
  std::vector<std::size_t> multiples(2 * k);
  std::iota(multiples.begin(), multiples.end(), std::size_t{1});
  std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4full);
  for (std::size_t i = multiples.size(); i > 1; --i)
    std::swap(multiples[i - 1], multiples[detail::bounded(rng, i)]);

  std::vector<raw_node> raw(t.size());
  for (std::size_t v = 0; v < t.size(); ++v) {
    raw[v].height = t.height(v);
    if (t.parent(v) != npos) raw[v].parent = t.parent(v);
  }
  std::set<double> chosen;
  std::vector<bool> taken(multiples.size(), false);
  for (std::size_t l : t.leaves) {
    for (std::size_t m = 0; m < multiples.size(); ++m) {
      if (taken[m]) continue;
      double h = t.height(l) - static_cast<double>(multiples[m]) * unit;
      if (chosen.insert(h).second) {
        taken[m] = true;
        raw[l].height = h;
        break;
      }
    }
  }
  return validate(raw);
}

// Hangs n - k extra leaves at depth eps below the attach point, giving a tree
// with exactly n leaves and d_I(input, output) <= eps. The attach point may
// not coincide with a leaf.
inline merge_tree add_padding_leaves(const merge_tree& t, std::size_t n, double eps,
                                     tree_point attach) {
  std::size_t k = t.leaf_count();
  if (k > n) fail(errc::too_many_leaves, "tree already has more than n leaves");
  if (k == n) return t;
  if (!(eps > 0)) fail(errc::negative_epsilon, "padding epsilon must be positive");
  attach = point_at(t, attach.base, attach.height);
  if (attach.height == t.height(attach.base) && t.is_leaf(attach.base))
    fail(errc::invalid_point, "attach point coincides with a leaf");

  std::vector<raw_node> raw(t.size());
  for (std::size_t v = 0; v < t.size(); ++v) {
    raw[v].height = t.height(v);
    if (t.parent(v) != npos) raw[v].parent = t.parent(v);
  }
  std::size_t anchor;
  if (attach.height == t.height(attach.base)) {
    anchor = attach.base;
  } else if (attach.base == t.root && attach.height > t.root_height()) {
    anchor = raw.size();
    raw.push_back({attach.height, std::nullopt});
    raw[t.root].parent = anchor;
  } else {
    anchor = raw.size();
    raw.push_back({attach.height, t.parent(attach.base)});
    raw[attach.base].parent = anchor;
  }
  for (std::size_t i = k; i < n; ++i) raw.push_back({attach.height - eps, anchor});
  return validate(raw);
}

}  // namespace mm

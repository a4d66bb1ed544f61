#pragma once

#include <numeric>
#include <tuple>

#include "mergemetrics/tree.hpp"

namespace mm {

// Half-open interval [birth, death); death may be +infinity.
struct interval {
  double birth = 0.0;
  double death = inf;

  double persistence() const { return death - birth; }
  friend bool operator==(const interval&, const interval&) = default;
};

inline bool interval_less(const interval& a, const interval& b) {
  return std::tie(a.birth, a.death) < std::tie(b.birth, b.death);
}

struct barcode {
  std::vector<interval> intervals;
  std::size_t size() const { return intervals.size(); }
};

inline std::vector<interval> sorted_intervals(const barcode& b) {
  auto v = b.intervals;
  std::sort(v.begin(), v.end(), interval_less);
  return v;
}

inline bool same_multiset(const barcode& a, const barcode& b) {
  return sorted_intervals(a) == sorted_intervals(b);
}

namespace detail {

// (min leaf height, smallest leaf index attaining it) per subtree.
inline std::vector<std::pair<double, std::size_t>> subtree_ages(const merge_tree& t) {
  std::vector<std::pair<double, std::size_t>> age(t.size(), {inf, npos});
  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::tie(t.nodes[x].height, x) < std::tie(t.nodes[y].height, y);
  });
  for (std::size_t v : order) {
    if (t.is_leaf(v)) {
      age[v] = {t.height(v), v};
    } else {
      for (std::size_t c : t.children[v]) age[v] = std::min(age[v], age[c]);
    }
  }
  return age;
}

}  // namespace detail

// Barcode of the sublevel-set filtration via the edge-detaching procedure: at
// every branch point only the eldest arm stays attached, so each leaf's bar
// ends at the first ancestor where its arm is not the eldest.
inline barcode elder_rule(const merge_tree& t) {
  auto age = detail::subtree_ages(t);
  std::vector<std::size_t> kept(t.size(), npos);
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (t.is_leaf(v)) continue;
    std::size_t best = t.children[v].front();
    for (std::size_t c : t.children[v])
      if (age[c] < age[best]) best = c;
    kept[v] = best;
  }
  barcode out;
  for (std::size_t l : t.leaves) {
    double death = inf;
    std::size_t arm = l;
    for (std::size_t b = t.parent(l); b != npos; arm = b, b = t.parent(b)) {
      if (kept[b] != arm) {
        death = t.height(b);
        break;
      }
    }
    out.intervals.push_back({t.height(l), death});
  }
  return out;
}

// Independent route to the same barcode: sweep vertex heights upward with a
// union-find over components, killing the younger component at each merge.
inline barcode filtration_barcode_oracle(const merge_tree& t) {
  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::tie(t.nodes[x].height, x) < std::tie(t.nodes[y].height, y);
  });
  std::vector<std::size_t> dsu(t.size());
  std::iota(dsu.begin(), dsu.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  std::vector<std::pair<double, std::size_t>> birth(t.size(), {inf, npos});
  barcode out;
  for (std::size_t v : order) {
    if (t.is_leaf(v)) {
      birth[v] = {t.height(v), v};
      continue;
    }
    std::vector<std::size_t> roots;
    for (std::size_t c : t.children[v]) {
      std::size_t r = find(c);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
    auto eldest = birth[roots.front()];
    for (std::size_t r : roots) eldest = std::min(eldest, birth[r]);
    for (std::size_t r : roots) {
      if (birth[r] != eldest) out.intervals.push_back({birth[r].first, t.height(v)});
      dsu[r] = v;
    }
    birth[v] = eldest;
  }
  out.intervals.push_back({birth[find(t.root)].first, inf});
  return out;
}

// Injective pairing between interval indices of two barcodes.
struct partial_matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

// Difference with the convention inf - inf = 0 and finite - inf = inf.
inline double endpoint_diff(double x, double y) {
  if (std::isinf(x) || std::isinf(y)) return x == y ? 0.0 : inf;
  return std::abs(x - y);
}

// Cost of a partial matching: worst matched endpoint displacement or
// unmatched half-persistence, whichever is larger.
inline double matching_cost(const barcode& b1, const barcode& b2, const partial_matching& m) {
  std::vector<bool> used1(b1.size(), false), used2(b2.size(), false);
  double cost = 0.0;
  for (auto [i, j] : m.pairs) {
    if (i >= b1.size() || j >= b2.size() || used1[i] || used2[j])
      fail(errc::invalid_matching, "matching is out of range or not injective");
    used1[i] = used2[j] = true;
    const interval &x = b1.intervals[i], &y = b2.intervals[j];
    cost = std::max(cost, std::max(endpoint_diff(x.birth, y.birth), endpoint_diff(x.death, y.death)));
  }
  for (std::size_t i = 0; i < b1.size(); ++i)
    if (!used1[i]) cost = std::max(cost, b1.intervals[i].persistence() / 2.0);
  for (std::size_t j = 0; j < b2.size(); ++j)
    if (!used2[j]) cost = std::max(cost, b2.intervals[j].persistence() / 2.0);
  return cost;
}

namespace detail {

// Pair cost max(|dL|, |dR|); +inf when exactly one endpoint pair is infinite.
inline double pair_cost(const interval& x, const interval& y) {
  return std::max(endpoint_diff(x.birth, y.birth), endpoint_diff(x.death, y.death));
}

// Perfect-matching feasibility at threshold tau, diagonal-augmented: left
// vertices are b1's intervals plus one dummy per b2 interval, right vertices
// symmetric. Returns the real-real pairs when feasible.
inline bool bottleneck_feasible(const barcode& b1, const barcode& b2, double tau,
                                std::vector<std::pair<std::size_t, std::size_t>>* out) {
  std::size_t n1 = b1.size(), n2 = b2.size();
  std::size_t nl = n1 + n2, nr = n2 + n1;
  std::vector<std::vector<std::size_t>> adj(nl);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j)
      if (pair_cost(b1.intervals[i], b2.intervals[j]) <= tau) adj[i].push_back(j);
    if (b1.intervals[i].persistence() / 2.0 <= tau) adj[i].push_back(n2 + i);
  }
  for (std::size_t d = 0; d < n2; ++d) {
    if (b2.intervals[d].persistence() / 2.0 <= tau) adj[n1 + d].push_back(d);
    for (std::size_t i = 0; i < n1; ++i) adj[n1 + d].push_back(n2 + i);
  }
  std::vector<std::size_t> match_l(nl, npos), match_r(nr, npos);
  std::vector<unsigned> visited(nr, 0);
  unsigned stamp = 0;
  auto augment = [&](auto&& self, std::size_t u) -> bool {
    for (std::size_t v : adj[u]) {
      if (visited[v] == stamp) continue;
      visited[v] = stamp;
      if (match_r[v] == npos || self(self, match_r[v])) {
        match_l[u] = v;
        match_r[v] = u;
        return true;
      }
    }
    return false;
  };
  std::size_t matched = 0;
  for (std::size_t u = 0; u < nl; ++u) {
    ++stamp;
    if (augment(augment, u)) ++matched;
  }
  if (matched != nl) return false;
  if (out) {
    out->clear();
    for (std::size_t i = 0; i < n1; ++i)
      if (match_l[i] < n2) out->push_back({i, match_l[i]});
  }
  return true;
}

}  // namespace detail

struct bottleneck_result {
  double distance = 0.0;
  partial_matching matching;
};

// Exact bottleneck distance with a witness matching. The optimum is one of
// the pairwise costs or half-persistences; binary search over that candidate
// set with a maximum-matching feasibility test pins it down.
inline bottleneck_result bottleneck(const barcode& b1, const barcode& b2) {
  std::size_t inf1 = 0, inf2 = 0;
  for (const auto& x : b1.intervals) inf1 += std::isinf(x.death) ? 1 : 0;
  for (const auto& y : b2.intervals) inf2 += std::isinf(y.death) ? 1 : 0;
  if (inf1 != inf2) return {inf, {}};

  std::vector<double> cands{0.0};
  for (const auto& x : b1.intervals)
    for (const auto& y : b2.intervals) {
      double c = detail::pair_cost(x, y);
      if (std::isfinite(c)) cands.push_back(c);
    }
  for (const auto& x : b1.intervals)
    if (std::isfinite(x.death)) cands.push_back(x.persistence() / 2.0);
  for (const auto& y : b2.intervals)
    if (std::isfinite(y.death)) cands.push_back(y.persistence() / 2.0);
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  std::size_t lo = 0, hi = cands.size() - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (detail::bottleneck_feasible(b1, b2, cands[mid], nullptr))
      hi = mid;
    else
      lo = mid + 1;
  }
  bottleneck_result r;
  r.distance = cands[lo];
  detail::bottleneck_feasible(b1, b2, r.distance, &r.matching.pairs);
  return r;
}

// Exhaustive minimum of matching_cost over all partial matchings; the oracle
// bottleneck() is checked against.
inline double bottleneck_bruteforce(const barcode& b1, const barcode& b2) {
  if (b1.size() + b2.size() > 8)
    fail(errc::too_large, "brute-force oracle accepts at most 8 intervals combined");
  double best = inf;
  partial_matching m;
  std::vector<bool> used(b2.size(), false);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == b1.size()) {
      best = std::min(best, matching_cost(b1, b2, m));
      return;
    }
    self(self, i + 1);  // leave interval i unmatched
    for (std::size_t j = 0; j < b2.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      m.pairs.push_back({i, j});
      self(self, i + 1);
      m.pairs.pop_back();
      used[j] = false;
    }
  };
  rec(rec, 0);
  return best;
}

}  // namespace mm

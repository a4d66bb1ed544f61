#pragma once

#include <map>
#include <numeric>

#include "mergemetrics/tree.hpp"

namespace mm {

// Leaf-indexed symmetric height matrix: diagonal holds leaf heights,
// off-diagonal entries the LCA heights.
struct cophenetic_matrix {
  std::vector<std::size_t> order;            // leaf node indices
  std::vector<std::vector<double>> entries;  // n x n, symmetric

  std::size_t size() const { return order.size(); }
  double at(std::size_t i, std::size_t j) const { return entries[i][j]; }
  std::vector<double> diagonal() const {
    std::vector<double> d(size());
    for (std::size_t i = 0; i < size(); ++i) d[i] = entries[i][i];
    return d;
  }
};

inline cophenetic_matrix cophenetic(const merge_tree& t, std::vector<std::size_t> order) {
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != t.leaves)
    fail(errc::order_mismatch, "leaf order is not a permutation of the tree's leaves");
  cophenetic_matrix m;
  m.order = std::move(order);
  std::size_t n = m.order.size();
  m.entries.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m.entries[i][i] = t.height(m.order[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      double h = t.height(lca_node(t, m.order[i], m.order[j]));
      m.entries[i][j] = m.entries[j][i] = h;
    }
  }
  return m;
}

inline cophenetic_matrix cophenetic(const merge_tree& t) { return cophenetic(t, t.leaves); }

// Three-point condition, checked exactly over all unordered triples.
inline bool satisfies_three_point(const std::vector<std::vector<double>>& m) {
  std::size_t n = m.size();
  auto e = [&](std::size_t a, std::size_t b) { return a < b ? m[a][b] : m[b][a]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        double ij = e(i, j), ik = e(i, k), jk = e(j, k);
        if (ij > std::max(ik, jk) || ik > std::max(ij, jk) || jk > std::max(ij, ik))
          return false;
      }
  return true;
}

// Result of rebuilding a tree from a labeled height matrix. Labels whose
// position coincides with a point above another label are dropped as leaves;
// label_points still locates every input label on the result.
struct reconstruction {
  merge_tree tree;
  std::vector<tree_point> label_points;  // one per input label
  std::vector<std::size_t> label_leaf;   // leaf node per surviving label, npos if dropped
};

// Inverse of cophenetic(): single-linkage construction of the unique merge
// tree realizing (diag, m). Requires m[i][j] >= max(diag[i], diag[j]) and the
// three-point condition (non-strict); only the upper triangle of m is read.
inline reconstruction reconstruct_from_matrix(const std::vector<double>& diag,
                                              const std::vector<std::vector<double>>& m) {
  std::size_t n = diag.size();
  if (n == 0 || m.size() != n)
    fail(errc::invalid_argument, "matrix and diagonal sizes disagree");
  auto e = [&](std::size_t a, std::size_t b) { return a < b ? m[a][b] : m[b][a]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (e(i, j) < std::max(diag[i], diag[j]))
        fail(errc::diagonal_dominance_violation,
             "entry (" + std::to_string(i) + "," + std::to_string(j) +
                 ") lies below a diagonal value");
  if (!satisfies_three_point(m))
    fail(errc::three_point_violation, "matrix violates the three-point condition");

  // Label i is redundant when it sits at a point on (or above) label j's
  // upward path; ties broken toward the smaller index.
  std::vector<bool> dropped(n, false);
  std::vector<std::size_t> witness(n, npos);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n && !dropped[i]; ++j) {
      if (j == i || e(i, j) != diag[i]) continue;
      if (diag[j] < diag[i] || (diag[j] == diag[i] && j < i)) {
        dropped[i] = true;
        witness[i] = j;
      }
    }

  reconstruction out;
  std::vector<std::size_t> survivors;
  out.label_leaf.assign(n, npos);
  for (std::size_t i = 0; i < n; ++i)
    if (!dropped[i]) {
      out.label_leaf[i] = out.tree.nodes.size();
      out.tree.nodes.push_back({diag[i], npos});
      survivors.push_back(i);
    }

  struct pair_entry {
    double v;
    std::size_t i, j;
  };
  std::vector<pair_entry> pairs;
  for (std::size_t a = 0; a < survivors.size(); ++a)
    for (std::size_t b = a + 1; b < survivors.size(); ++b)
      pairs.push_back({e(survivors[a], survivors[b]), survivors[a], survivors[b]});
  std::sort(pairs.begin(), pairs.end(), [](const pair_entry& x, const pair_entry& y) {
    return std::tie(x.v, x.i, x.j) < std::tie(y.v, y.i, y.j);
  });

  std::vector<std::size_t> dsu(n), top(n, npos);
  std::iota(dsu.begin(), dsu.end(), 0);
  for (std::size_t s : survivors) top[s] = out.label_leaf[s];
  auto find = [&](std::size_t x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };

  // Merge one height value at a time so simultaneous merges share one node.
  std::size_t g = 0;
  while (g < pairs.size()) {
    std::size_t gend = g;
    while (gend < pairs.size() && pairs[gend].v == pairs[g].v) ++gend;
    std::map<std::size_t, std::vector<std::size_t>> joined;  // dsu root -> cluster tops
    for (std::size_t k = g; k < gend; ++k) {
      std::size_t ri = find(pairs[k].i), rj = find(pairs[k].j);
      if (ri == rj) continue;
      if (!joined.count(ri)) joined[ri] = {top[ri]};
      if (!joined.count(rj)) joined[rj] = {top[rj]};
      dsu[rj] = ri;
      auto moved = std::move(joined[rj]);
      joined.erase(rj);
      auto& dst = joined[ri];
      dst.insert(dst.end(), moved.begin(), moved.end());
    }
    for (auto& [root, tops] : joined) {
      std::size_t v = out.tree.nodes.size();
      out.tree.nodes.push_back({pairs[g].v, npos});
      std::sort(tops.begin(), tops.end());
      for (std::size_t c : tops) out.tree.nodes[c].parent = v;
      top[root] = v;
    }
    g = gend;
  }

  out.tree.root = top[find(survivors.front())];
  out.tree.children.assign(out.tree.nodes.size(), {});
  for (std::size_t v = 0; v < out.tree.nodes.size(); ++v)
    if (out.tree.nodes[v].parent != npos) out.tree.children[out.tree.nodes[v].parent].push_back(v);
  for (auto& c : out.tree.children) std::sort(c.begin(), c.end());
  for (std::size_t v = 0; v < out.tree.nodes.size(); ++v)
    if (out.tree.children[v].empty()) out.tree.leaves.push_back(v);

  out.label_points.assign(n, tree_point{});
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t w = i;
    while (dropped[w]) w = witness[w];
    out.label_points[i] = point_at(out.tree, out.label_leaf[w], diag[i]);
  }
  return out;
}

// The merge tree i^eps(T, f): every point pushed eps upward, which prunes
// branches shorter than eps. Computed through the cophenetic matrix.
inline merge_tree shift(const merge_tree& t, double eps) {
  if (!(eps >= 0)) fail(errc::negative_epsilon, "shift amount must be >= 0");
  cophenetic_matrix m = cophenetic(t);
  std::size_t n = m.size();
  std::vector<double> diag(n);
  std::vector<std::vector<double>> shifted(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) diag[i] = m.entries[i][i] + eps;
  for (std::size_t i = 0; i < n; ++i) {
    shifted[i][i] = diag[i];
    for (std::size_t j = i + 1; j < n; ++j)
      shifted[i][j] = shifted[j][i] = std::max(m.entries[i][j], std::max(diag[i], diag[j]));
  }
  return reconstruct_from_matrix(diag, shifted).tree;
}

}  // namespace mm

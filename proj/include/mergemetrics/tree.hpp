#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mergemetrics/errors.hpp"

namespace mm {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);
inline constexpr double inf = std::numeric_limits<double>::infinity();

// One vertex. parent == npos marks the root; height strictly increases from
// child to parent.
struct tree_node {
  double height = 0.0;
  std::size_t parent = npos;
};

// Pre-validation node description.
struct raw_node {
  double height = 0.0;
  std::optional<std::size_t> parent;
};

// Canonical merge tree: one root, every internal vertex (root included) has
// >= 2 children unless the tree is a single node. The unbounded ray above the
// root is implicit. Built by validate(); immutable afterwards by convention.
struct merge_tree {
  std::vector<tree_node> nodes;
  std::size_t root = 0;
  std::vector<std::vector<std::size_t>> children;  // indexed like nodes
  std::vector<std::size_t> leaves;                 // ascending node index

  double height(std::size_t v) const { return nodes[v].height; }
  std::size_t parent(std::size_t v) const { return nodes[v].parent; }
  bool is_leaf(std::size_t v) const { return children[v].empty(); }
  std::size_t size() const { return nodes.size(); }
  std::size_t leaf_count() const { return leaves.size(); }
  double root_height() const { return nodes[root].height; }

  // Global minimum of the height function; attained at a leaf.
  double min_height() const {
    double m = nodes[leaves.front()].height;
    for (std::size_t l : leaves) m = std::min(m, nodes[l].height);
    return m;
  }
};

namespace detail {

inline void check_acyclic(const std::vector<raw_node>& raw) {
  std::vector<int> state(raw.size(), 0);  // 0 new, 1 on current walk, 2 done
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (state[i] == 2) continue;
    std::vector<std::size_t> walk;
    std::size_t j = i;
    while (true) {
      if (state[j] == 1) fail(errc::cycle_detected, "parent links contain a cycle");
      if (state[j] == 2) break;
      state[j] = 1;
      walk.push_back(j);
      if (!raw[j].parent) break;
      j = *raw[j].parent;
    }
    for (std::size_t v : walk) state[v] = 2;
  }
}

}  // namespace detail

// Validates an arbitrary node list and returns the canonical merge tree
// (degree-2 vertices smoothed away, node indices compacted in input order).
inline merge_tree validate(const std::vector<raw_node>& raw) {
  if (raw.empty()) fail(errc::empty_tree, "tree needs at least one node");
  std::size_t root = npos;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i].height))
      fail(errc::non_finite_height, "node " + std::to_string(i) + " has non-finite height");
    if (!raw[i].parent) {
      if (root != npos)
        fail(errc::multiple_roots,
             "nodes " + std::to_string(root) + " and " + std::to_string(i) + " both lack a parent");
      root = i;
    } else if (*raw[i].parent >= raw.size() || *raw[i].parent == i) {
      fail(errc::invalid_parent, "node " + std::to_string(i) + " has an out-of-range parent");
    }
  }
  if (root == npos) fail(errc::cycle_detected, "no root node; parent links must form a cycle");
  detail::check_acyclic(raw);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i].parent) continue;
    if (!(raw[i].height < raw[*raw[i].parent].height))
      fail(errc::non_increasing_height,
           "node " + std::to_string(i) + " is not strictly below its parent");
  }

  // Smooth degree-2 vertices: splice out non-root nodes with exactly one
  // child; drop a single-child root in favor of its child.
  std::vector<std::size_t> parent(raw.size());
  std::vector<std::vector<std::size_t>> kids(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    parent[i] = raw[i].parent ? *raw[i].parent : npos;
    if (raw[i].parent) kids[*raw[i].parent].push_back(i);
  }
  std::vector<bool> removed(raw.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t v = 0; v < raw.size(); ++v) {
      if (removed[v] || kids[v].size() != 1) continue;
      std::size_t c = kids[v].front();
      if (v == root) {
        removed[v] = true;
        parent[c] = npos;
        root = c;
      } else {
        removed[v] = true;
        std::size_t p = parent[v];
        parent[c] = p;
        std::replace(kids[p].begin(), kids[p].end(), v, c);
      }
      kids[v].clear();
      changed = true;
    }
  }

  std::vector<std::size_t> remap(raw.size(), npos);
  merge_tree t;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (removed[i]) continue;
    remap[i] = t.nodes.size();
    t.nodes.push_back({raw[i].height, npos});
  }
  t.children.assign(t.nodes.size(), {});
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (removed[i]) continue;
    if (parent[i] != npos) {
      t.nodes[remap[i]].parent = remap[parent[i]];
      t.children[remap[parent[i]]].push_back(remap[i]);
    } else {
      t.root = remap[i];
    }
  }
  for (auto& c : t.children) std::sort(c.begin(), c.end());
  for (std::size_t v = 0; v < t.nodes.size(); ++v)
    if (t.children[v].empty()) t.leaves.push_back(v);
  return t;
}

// A point of the tree: the unique point at `height` on the increasing path
// from `base` toward the root and the implicit ray. Normalized form keeps the
// highest node at or below the point, so equality is member-wise.
struct tree_point {
  std::size_t base = 0;
  double height = 0.0;
  friend bool operator==(const tree_point&, const tree_point&) = default;
};

inline tree_point point_at(const merge_tree& t, std::size_t base, double height) {
  if (base >= t.size())
    fail(errc::invalid_point, "node index " + std::to_string(base) + " out of range");
  if (!(height >= t.height(base)))
    fail(errc::invalid_point, "point height lies below its base node");
  while (t.parent(base) != npos && t.height(t.parent(base)) <= height) base = t.parent(base);
  return {base, height};
}

inline tree_point node_point(const merge_tree& t, std::size_t v) { return {v, t.height(v)}; }

// The i^delta map on points: the point delta higher along the upward path.
inline tree_point shift_point(const merge_tree& t, tree_point p, double delta) {
  if (delta < 0) fail(errc::negative_epsilon, "point shift must be non-negative");
  return point_at(t, p.base, p.height + delta);
}

inline std::size_t lca_node(const merge_tree& t, std::size_t a, std::size_t b) {
  while (a != b) {
    if (t.height(a) < t.height(b)) {
      a = t.parent(a);
    } else if (t.height(b) < t.height(a)) {
      b = t.parent(b);
    } else {
      a = t.parent(a);
      b = t.parent(b);
    }
  }
  return a;
}

// Least common ancestor of two points; lca(x, x) == x.
inline tree_point lca(const merge_tree& t, tree_point u, tree_point v) {
  u = point_at(t, u.base, u.height);
  v = point_at(t, v.base, v.height);
  std::size_t w = lca_node(t, u.base, v.base);
  double h = std::max(t.height(w), std::max(u.height, v.height));
  return point_at(t, w, h);
}

inline std::vector<std::size_t> subtree_leaves(const merge_tree& t, std::size_t v) {
  std::vector<std::size_t> out, stack{v};
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    if (t.is_leaf(u)) out.push_back(u);
    for (std::size_t c : t.children[u]) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// All points of the tree at exactly height h: one per edge spanning h plus
// the root ray. Ordered by base node index.
inline std::vector<tree_point> points_at_height(const merge_tree& t, double h) {
  std::vector<tree_point> out;
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (t.height(v) > h) continue;
    if (v == t.root || t.height(t.parent(v)) > h) out.push_back({v, h});
  }
  return out;
}

namespace detail {

inline std::string height_bits(double h) {
  if (h == 0.0) h = 0.0;  // collapse signed zeros
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(h)));
  return buf;
}

// Canonical encoding of the subtree at v, with children ordered by
// (subtree min height, encoding). Returns (subtree min height, encoding).
inline std::pair<double, std::string> canonical_rec(const merge_tree& t, std::size_t v) {
  if (t.is_leaf(v)) return {t.height(v), "(" + height_bits(t.height(v)) + ")"};
  std::vector<std::pair<double, std::string>> ks;
  ks.reserve(t.children[v].size());
  double mn = inf;
  for (std::size_t c : t.children[v]) {
    ks.push_back(canonical_rec(t, c));
    mn = std::min(mn, ks.back().first);
  }
  std::sort(ks.begin(), ks.end());
  std::string enc = "(" + height_bits(t.height(v));
  for (auto& k : ks) enc += k.second;
  enc += ")";
  return {mn, enc};
}

}  // namespace detail

inline std::string canonical_key(const merge_tree& t) {
  return detail::canonical_rec(t, t.root).second;
}

// Height-labeled rooted tree isomorphism; heights compared exactly.
inline bool isomorphic(const merge_tree& a, const merge_tree& b) {
  return canonical_key(a) == canonical_key(b);
}

// A - B with A = max of the two root heights and B = the smaller of the two
// minimum heights; always an upper bound for the interleaving distance.
inline double trivial_interleaving_bound(const merge_tree& a, const merge_tree& b) {
  double top = std::max(a.root_height(), b.root_height());
  double bottom = std::min(a.min_height(), b.min_height());
  return top - bottom;
}

}  // namespace mm

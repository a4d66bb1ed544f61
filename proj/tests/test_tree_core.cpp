#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace mm;
using namespace mmtest;

TEST_CASE("validate accepts the basic fixtures") {
  merge_tree single = single_leaf(2.0);
  CHECK(single.leaf_count() == 1);
  CHECK(single.root_height() == 2.0);

  merge_tree a = tree_A();
  CHECK(a.leaf_count() == 2);
  CHECK(a.root_height() == 3.0);
  CHECK(a.min_height() == 0.0);

  merge_tree c = tree_C();
  CHECK(c.leaf_count() == 3);
  CHECK(c.size() == 5);
}

TEST_CASE("validate rejects malformed input") {
  CHECK(thrown_code([] { make_tree({{3.0, 1}, {3.0, -1}}); }) == errc::non_increasing_height);
  CHECK(thrown_code([] { make_tree({{0.0, 1}, {1.0, 0}}); }) == errc::cycle_detected);
  CHECK(thrown_code([] { make_tree({{0.0, -1}, {1.0, -1}}); }) == errc::multiple_roots);
  CHECK(thrown_code([] {
          make_tree({{std::numeric_limits<double>::quiet_NaN(), 1}, {1.0, -1}});
        }) == errc::non_finite_height);
  CHECK(thrown_code([] { mm::validate({}); }) == errc::empty_tree);
  CHECK(thrown_code([] { make_tree({{0.0, 7}, {1.0, -1}}); }) == errc::invalid_parent);
}

TEST_CASE("validate smooths degree-2 vertices") {
  // chain root(3) - mid(2) - leaf(0) collapses to the single point at 0
  merge_tree chain = make_tree({{0.0, 1}, {2.0, 2}, {3.0, -1}});
  CHECK(chain.size() == 1);
  CHECK(chain.root_height() == 0.0);

  // single-child root hands the root role to the branch point below it
  merge_tree crown = make_tree({{0.0, 2}, {1.0, 2}, {3.0, 3}, {5.0, -1}});
  CHECK(crown.size() == 3);
  CHECK(crown.root_height() == 3.0);
  CHECK(isomorphic(crown, tree_A()));
}

TEST_CASE("point normalization and lca") {
  merge_tree a = tree_A();
  std::size_t leaf0 = a.leaves[0], leaf1 = a.leaves[1];

  tree_point root_pt = lca(a, node_point(a, leaf0), node_point(a, leaf1));
  CHECK(root_pt == node_point(a, a.root));
  CHECK(root_pt.height == 3.0);

  tree_point x = point_at(a, leaf0, 1.5);
  CHECK(lca(a, x, x) == x);
  CHECK(lca(a, x, point_at(a, leaf1, 1.5)).height == 3.0);

  // normalization walks up to the deepest node at or below the point
  CHECK(point_at(a, leaf0, 3.0) == node_point(a, a.root));
  CHECK(point_at(a, leaf0, 9.0) == point_at(a, a.root, 9.0));

  merge_tree c = tree_C();
  tree_point j = lca(c, node_point(c, c.leaves[1]), node_point(c, c.leaves[2]));
  CHECK(j.height == 2.5);

  CHECK(thrown_code([&] { point_at(a, leaf1, 0.5); }) == errc::invalid_point);
  CHECK(thrown_code([&] { point_at(a, 99, 5.0); }) == errc::invalid_point);
}

TEST_CASE("cophenetic matrices of the fixtures") {
  cophenetic_matrix ma = cophenetic(tree_A());
  CHECK(ma.entries == std::vector<std::vector<double>>{{0.0, 3.0}, {3.0, 1.0}});

  cophenetic_matrix ms = cophenetic(single_leaf(4.5));
  CHECK(ms.entries == std::vector<std::vector<double>>{{4.5}});

  cophenetic_matrix mc = cophenetic(tree_C());
  CHECK(mc.entries ==
        std::vector<std::vector<double>>{{0.0, 4.0, 4.0}, {4.0, 1.0, 2.5}, {4.0, 2.5, 2.0}});

  merge_tree a = tree_A();
  CHECK(thrown_code([&] { cophenetic(a, {a.leaves[0], a.leaves[0]}); }) == errc::order_mismatch);
  CHECK(thrown_code([&] { cophenetic(a, {a.leaves[0]}); }) == errc::order_mismatch);
}

TEST_CASE("cophenetic invariants on random trees") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    merge_tree t = random_tree(1 + seed % 6, seed);
    cophenetic_matrix m = cophenetic(t);
    CHECK(satisfies_three_point(m.entries));
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j)
        CHECK(m.entries[i][j] > std::max(m.entries[i][i], m.entries[j][j]));
  }
}

TEST_CASE("reconstruct_from_matrix on the worked examples") {
  reconstruction r = reconstruct_from_matrix({0.0, 1.0}, {{0.0, 3.0}, {3.0, 1.0}});
  CHECK(isomorphic(r.tree, tree_A()));
  CHECK(r.label_leaf[0] != npos);
  CHECK(r.label_leaf[1] != npos);

  // the second label sits at the point 0.5 above the first; only one leaf
  reconstruction s = reconstruct_from_matrix({0.0, 0.5}, {{0.0, 0.5}, {0.5, 0.5}});
  CHECK(s.tree.size() == 1);
  CHECK(s.tree.root_height() == 0.0);
  CHECK(s.label_leaf[1] == npos);
  CHECK(s.label_points[1] == point_at(s.tree, 0, 0.5));

  reconstruction u = reconstruct_from_matrix({7.25}, {{7.25}});
  CHECK(u.tree.size() == 1);
  CHECK(u.tree.root_height() == 7.25);

  CHECK(thrown_code([] {
          reconstruct_from_matrix({0.0, 1.0}, {{0.0, 0.5}, {0.5, 1.0}});
        }) == errc::diagonal_dominance_violation);
  CHECK(thrown_code([] {
          reconstruct_from_matrix({0.0, 0.0, 0.0},
                                  {{0.0, 1.0, 5.0}, {1.0, 0.0, 1.0}, {5.0, 1.0, 0.0}});
        }) == errc::three_point_violation);
}

TEST_CASE("reconstruct round-trips random trees and reproduces entries") {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    merge_tree t = random_tree(1 + seed % 7, seed);
    cophenetic_matrix m = cophenetic(t);
    reconstruction r = reconstruct_from_matrix(m.diagonal(), m.entries);
    CHECK(isomorphic(r.tree, t));
    for (std::size_t i = 0; i < m.size(); ++i) {
      CHECK(r.label_points[i].height == m.entries[i][i]);
      for (std::size_t j = i + 1; j < m.size(); ++j)
        CHECK(lca_height(r.tree, r.label_points[i], r.label_points[j]) == m.entries[i][j]);
    }
  }
}

TEST_CASE("reconstruct merges simultaneous equal-height joins into one vertex") {
  // three labels pairwise at distance 2: one trifurcation, not a stack
  reconstruction r = reconstruct_from_matrix({0.0, 0.5, 1.0},
                                             {{0.0, 2.0, 2.0}, {2.0, 0.5, 2.0}, {2.0, 2.0, 1.0}});
  CHECK(r.tree.leaf_count() == 3);
  CHECK(r.tree.size() == 4);
  CHECK(r.tree.children[r.tree.root].size() == 3);
}

TEST_CASE("shift matches the worked examples") {
  CHECK(isomorphic(shift(tree_A(), 0.0), tree_A()));

  // the 2.5-branch of tree_C is absorbed at eps = 0.75
  merge_tree expected = make_tree({{0.75, 2}, {1.75, 2}, {4.0, -1}});
  CHECK(isomorphic(shift(tree_C(), 0.75), expected));

  merge_tree s = shift(single_leaf(1.5), 2.25);
  CHECK(s.size() == 1);
  CHECK(s.root_height() == 3.75);

  CHECK(thrown_code([] { shift(tree_A(), -0.5); }) == errc::negative_epsilon);
}

TEST_CASE("shift semigroup law and leaf-count monotonicity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 80; ++trial) {
    merge_tree t = random_tree(1 + rng() % 6, rng());
    double a = dyadic(rng, 0.0, 2.0), b = dyadic(rng, 0.0, 2.0);
    CHECK(isomorphic(shift(shift(t, a), b), shift(t, a + b)));
    CHECK(shift(t, a).leaf_count() <= t.leaf_count());
    CHECK(shift(t, a + b).leaf_count() <= shift(t, a).leaf_count());
  }
}

TEST_CASE("isomorphic distinguishes shape and ignores labeling") {
  merge_tree a = tree_A();
  merge_tree a_relabeled = make_tree({{1.0, 2}, {0.0, 2}, {3.0, -1}});
  CHECK(isomorphic(a, a_relabeled));
  CHECK_FALSE(isomorphic(a, tree_B()));

  merge_tree c_mirror = make_tree({{2.0, 3}, {1.0, 3}, {0.0, 4}, {2.5, 4}, {4.0, -1}});
  CHECK(isomorphic(tree_C(), c_mirror));
}

TEST_CASE("random_tree is deterministic and well-formed") {
  merge_tree t1 = random_tree(4, 42);
  merge_tree t2 = random_tree(4, 42);
  CHECK(canonical_key(t1) == canonical_key(t2));
  CHECK(t1.leaf_count() == 4);
  CHECK(random_tree(1, 3).size() == 1);
  CHECK(thrown_code([] { random_tree(0, 1); }) == errc::invalid_leaf_count);

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    merge_tree t = random_tree(1 + seed % 8, seed * 31 + 5);
    std::vector<double> hs;
    for (const auto& n : t.nodes) hs.push_back(n.height);
    std::sort(hs.begin(), hs.end());
    CHECK(std::adjacent_find(hs.begin(), hs.end()) == hs.end());
    for (std::size_t v = 0; v < t.size(); ++v)
      if (!t.is_leaf(v)) CHECK(t.children[v].size() >= 2);
  }
}

TEST_CASE("perturb_leaf_heights lowers leaves onto distinct values") {
  merge_tree twins = make_tree({{0.0, 2}, {0.0, 2}, {1.0, -1}});
  merge_tree p = perturb_leaf_heights(twins, 0.1, 9);
  REQUIRE(p.leaf_count() == 2);
  double h0 = p.height(p.leaves[0]), h1 = p.height(p.leaves[1]);
  CHECK(h0 != h1);
  CHECK((h0 >= -0.1 && h0 < 0.0));
  CHECK((h1 >= -0.1 && h1 < 0.0));

  merge_tree c = tree_C();
  merge_tree q = perturb_leaf_heights(c, 0.5, 11);
  CHECK(q.leaf_count() == 3);
  std::vector<double> hs;
  for (std::size_t l : q.leaves) hs.push_back(q.height(l));
  std::sort(hs.begin(), hs.end());
  CHECK(std::adjacent_find(hs.begin(), hs.end()) == hs.end());
  for (std::size_t i = 0; i < 3; ++i) {
    double drop = c.height(c.leaves[i]) - q.height(q.leaves[i]);
    CHECK(drop > 0.0);
    CHECK(drop <= 0.5);
  }
  CHECK(perturb_leaf_heights(c, 0.5, 11).height(q.leaves[0]) == q.height(q.leaves[0]));
  CHECK(thrown_code([&] { perturb_leaf_heights(c, 0.0, 1); }) == errc::negative_epsilon);
}

TEST_CASE("add_padding_leaves follows the construction") {
  merge_tree padded = add_padding_leaves(single_leaf(0.0), 2, 0.1, {0, 0.5});
  merge_tree expected = make_tree({{0.0, 2}, {0.4, 2}, {0.5, -1}});
  CHECK(isomorphic(padded, expected));

  merge_tree a = tree_A();
  CHECK(isomorphic(add_padding_leaves(a, 2, 0.1, point_at(a, a.root, 5.0)), a));
  CHECK(thrown_code([&] { add_padding_leaves(a, 1, 0.1, {0, 0.5}); }) == errc::too_many_leaves);
  CHECK(thrown_code([&] {
          add_padding_leaves(a, 3, 0.1, node_point(a, a.leaves[0]));
        }) == errc::invalid_point);

  // attach on an edge interior, at a branch point, and above the root
  merge_tree c = tree_C();
  CHECK(add_padding_leaves(c, 5, 0.25, point_at(c, c.leaves[0], 3.0)).leaf_count() == 5);
  merge_tree at_branch = add_padding_leaves(c, 4, 0.25, point_at(c, c.leaves[1], 2.5));
  CHECK(at_branch.leaf_count() == 4);
  CHECK(at_branch.size() == 6);
  merge_tree above = add_padding_leaves(c, 4, 0.25, point_at(c, c.root, 6.0));
  CHECK(above.leaf_count() == 4);
  CHECK(above.root_height() == 6.0);
}

TEST_CASE("trivial interleaving bound reads off extreme heights") {
  CHECK(trivial_interleaving_bound(tree_A(), tree_B()) == 3.0);
  merge_tree s = single_leaf(4.0);
  CHECK(trivial_interleaving_bound(s, s) == 0.0);
  CHECK(trivial_interleaving_bound(tree_C(), single_leaf(-1.0)) == 5.0);
}

TEST_CASE("lca of distinct leaves strictly exceeds both leaf heights") {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    merge_tree t = random_tree(2 + seed % 5, seed);
    for (std::size_t i = 0; i < t.leaf_count(); ++i)
      for (std::size_t j = i + 1; j < t.leaf_count(); ++j) {
        double h = t.height(lca_node(t, t.leaves[i], t.leaves[j]));
        CHECK(h > t.height(t.leaves[i]));
        CHECK(h > t.height(t.leaves[j]));
      }
  }
}

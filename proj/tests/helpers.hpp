#pragma once

#include <optional>
#include <random>

#include "mergemetrics/mergemetrics.hpp"

namespace mmtest {

// Node list shorthand: parent < 0 marks the root.
inline mm::merge_tree make_tree(const std::vector<std::pair<double, int>>& spec) {
  std::vector<mm::raw_node> raw;
  for (const auto& [h, p] : spec) {
    mm::raw_node n;
    n.height = h;
    if (p >= 0) n.parent = static_cast<std::size_t>(p);
    raw.push_back(n);
  }
  return mm::validate(raw);
}

// Two-leaf tree, leaves at 0 and 1 merging at 3.
inline mm::merge_tree tree_A() { return make_tree({{0.0, 2}, {1.0, 2}, {3.0, -1}}); }

// Same leaves as tree_A but merging at 2.
inline mm::merge_tree tree_B() { return make_tree({{0.0, 2}, {1.0, 2}, {2.0, -1}}); }

// Leaves at 0, 1, 2; the 1- and 2-leaves join at 2.5, everything joins at 4.
inline mm::merge_tree tree_C() {
  return make_tree({{0.0, 4}, {1.0, 3}, {2.0, 3}, {2.5, 4}, {4.0, -1}});
}

inline mm::merge_tree single_leaf(double h) { return make_tree({{h, -1}}); }

template <typename F>
std::optional<mm::errc> thrown_code(F&& f) {
  try {
    f();
  } catch (const mm::error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Dyadic random values (multiples of 1/256) so float sums stay exact.
inline double dyadic(std::mt19937_64& rng, double lo, double hi) {
  auto steps = static_cast<std::uint64_t>((hi - lo) * 256.0);
  return lo + static_cast<double>(rng() % (steps + 1)) * 0x1p-8;
}

// In-chamber partner by bounded order-preserving jitter of the cophenetic
// entries. Jitters below a third of the smallest value gap keep the ranking
// (ties included), hence the chamber; capping them at an eighth of the
// smallest finite bar persistence keeps the pair in the regime where every
// matching of cost < max|dM| would have to match all bars, which forces
// d_B = d_I = max|dM|. Far same-chamber pairs can violate that equality:
// see the frozen counterexample in test_chambers.cpp.
inline mm::merge_tree same_chamber_partner(const mm::merge_tree& t, std::mt19937_64& rng) {
  auto m = mm::cophenetic(t, mm::leaves_by_height(t));
  std::size_t n = m.size();
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) values.push_back(m.entries[i][j]);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  double gap = mm::inf;
  for (std::size_t k = 1; k < values.size(); ++k) gap = std::min(gap, values[k] - values[k - 1]);
  double min_pers = mm::inf;
  for (const mm::interval& iv : mm::elder_rule(t).intervals)
    if (std::isfinite(iv.death)) min_pers = std::min(min_pers, iv.persistence());
  double limit = std::min({gap / 3.0, min_pers / 8.0, 1.0});
  auto steps = static_cast<std::uint64_t>(limit * 1024.0);

  std::vector<double> mapped(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    double jitter = steps == 0 ? 0.0
                               : (static_cast<double>(rng() % (2 * steps + 1)) -
                                  static_cast<double>(steps)) *
                                     0x1p-10;
    mapped[k] = values[k] + jitter;
  }
  auto remap = [&](double v) {
    return mapped[std::lower_bound(values.begin(), values.end(), v) - values.begin()];
  };
  std::vector<double> diag(n);
  std::vector<std::vector<double>> entries(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = remap(m.entries[i][i]);
    for (std::size_t j = 0; j < n; ++j) entries[i][j] = remap(m.entries[i][j]);
  }
  return mm::reconstruct_from_matrix(diag, entries).tree;
}

inline mm::barcode random_barcode(std::mt19937_64& rng, std::size_t max_bars,
                                  bool allow_infinite = true) {
  mm::barcode b;
  std::size_t n = rng() % (max_bars + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double birth = dyadic(rng, 0.0, 4.0);
    if (allow_infinite && rng() % 8 == 0) {
      b.intervals.push_back({birth, mm::inf});
    } else {
      b.intervals.push_back({birth, birth + dyadic(rng, 0.0, 3.0) + 0x1p-8});
    }
  }
  return b;
}

}  // namespace mmtest

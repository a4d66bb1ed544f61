#pragma once

#include "mergemetrics/paths.hpp"

namespace mm {

// Total preorder on the cophenetic entries, taken with leaves relabeled in
// strictly increasing height order. Trees sharing a signature lie in one
// chamber, where d_B = d_I = max |delta M|.
struct chamber_signature {
  std::size_t n = 0;
  std::vector<std::size_t> ranking;  // dense ranks for pairs (i <= j), row-major
  friend bool operator==(const chamber_signature&, const chamber_signature&) = default;
};

// Leaves sorted by strictly increasing height; duplicate heights are refused.
inline std::vector<std::size_t> leaves_by_height(const merge_tree& t) {
  auto ls = t.leaves;
  std::sort(ls.begin(), ls.end(), [&](std::size_t x, std::size_t y) {
    return std::tie(t.nodes[x].height, x) < std::tie(t.nodes[y].height, y);
  });
  for (std::size_t i = 1; i < ls.size(); ++i)
    if (t.height(ls[i - 1]) == t.height(ls[i]))
      fail(errc::duplicate_leaf_heights, "chamber signatures need distinct leaf heights");
  return ls;
}

inline chamber_signature chamber_signature_of(const merge_tree& t) {
  auto m = cophenetic(t, leaves_by_height(t));
  std::size_t n = m.size();
  std::vector<double> flat;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) flat.push_back(m.entries[i][j]);
  std::vector<double> values = flat;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  chamber_signature sig;
  sig.n = n;
  for (double v : flat)
    sig.ranking.push_back(std::lower_bound(values.begin(), values.end(), v) - values.begin());
  return sig;
}

inline bool same_chamber(const merge_tree& a, const merge_tree& b) {
  return chamber_signature_of(a) == chamber_signature_of(b);
}

// In-chamber distance: max entry-wise |delta M| under the ascending-height
// leaf order. Equals both the bottleneck and the interleaving distance for
// same-chamber pairs whose finite bars all persist longer than twice this
// value; farther pairs can have strictly smaller d_B and d_I, because short
// bars may be matched to the diagonal.
inline double chamber_distance(const merge_tree& a, const merge_tree& b) {
  if (!same_chamber(a, b)) fail(errc::not_same_chamber, "trees lie in different chambers");
  auto ma = cophenetic(a, leaves_by_height(a));
  auto mb = cophenetic(b, leaves_by_height(b));
  double d = 0.0;
  for (std::size_t i = 0; i < ma.size(); ++i)
    for (std::size_t j = 0; j < ma.size(); ++j)
      d = std::max(d, std::abs(ma.entries[i][j] - mb.entries[i][j]));
  return d;
}

// Right endpoints a_j of the Elder Rule bars in ascending-birth order:
// a_1 = +infinity and a_j = min_{k<j} f(LCA(l_j, l_k)).
inline std::vector<double> elder_right_endpoints(const merge_tree& t) {
  auto m = cophenetic(t, leaves_by_height(t));
  std::vector<double> ends{inf};
  for (std::size_t j = 1; j < m.size(); ++j) {
    double v = m.entries[j][0];
    for (std::size_t k = 1; k < j; ++k) v = std::min(v, m.entries[j][k]);
    ends.push_back(v);
  }
  return ends;
}

// Sorted-bar displacement max_j max(|f(l_j) - f'(l'_j)|, |a_j - a'_j|). A
// genuine lower bound equal to the bottleneck distance in the same proximity
// regime as chamber_distance; out of it the sorted pairing need not be
// optimal and the value can exceed d_B.
inline double matching_lower_bound(const merge_tree& a, const merge_tree& b) {
  if (!same_chamber(a, b)) fail(errc::not_same_chamber, "trees lie in different chambers");
  auto la = leaves_by_height(a), lb = leaves_by_height(b);
  auto ea = elder_right_endpoints(a), eb = elder_right_endpoints(b);
  double bound = 0.0;
  for (std::size_t j = 0; j < la.size(); ++j) {
    bound = std::max(bound, std::abs(a.height(la[j]) - b.height(lb[j])));
    bound = std::max(bound, endpoint_diff(ea[j], eb[j]));
  }
  return bound;
}

// Straight-line matrix interpolation between same-chamber trees: the shared
// order pattern keeps every sample inside the chamber. Once legs are short
// enough to sit in the close regime, their bottleneck distances add up to
// chamber_distance.
inline discrete_path chamber_linear_path(const merge_tree& a, const merge_tree& b, std::size_t K) {
  if (K < 1) fail(errc::invalid_argument, "need at least one leg");
  if (!same_chamber(a, b)) fail(errc::not_same_chamber, "trees lie in different chambers");
  auto ma = cophenetic(a, leaves_by_height(a));
  auto mb = cophenetic(b, leaves_by_height(b));
  std::size_t n = ma.size();
  discrete_path out;
  std::vector<double> diag(n);
  std::vector<std::vector<double>> mt(n, std::vector<double>(n));
  for (std::size_t k = 0; k <= K; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(K);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        mt[i][j] = (1.0 - t) * ma.entries[i][j] + t * mb.entries[i][j];
    for (std::size_t i = 0; i < n; ++i) diag[i] = mt[i][i];
    out.waypoints.push_back({t, reconstruct_from_matrix(diag, mt).tree});
  }
  return out;
}

}  // namespace mm

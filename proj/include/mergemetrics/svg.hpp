#pragma once

#include <numeric>

#include "mergemetrics/barcode.hpp"
#include "mergemetrics/tree.hpp"

namespace mm {

namespace detail {

inline std::string svg_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string svg_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline const char* svg_arrow_defs() {
  return "  <defs>\n"
         "    <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"8\" refY=\"5\" "
         "markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">\n"
         "      <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#333\"/>\n"
         "    </marker>\n"
         "  </defs>\n";
}

}  // namespace detail

// Dendrogram-style drawing: vertical axis is the height function, leaves get
// evenly spaced columns in traversal order, and the implicit ray above the
// root ends in an arrowhead.
inline std::string render_svg(const merge_tree& t) {
  const double margin = 36.0, column = 56.0, plot_h = 200.0;
  double lo = t.min_height();
  double span = t.root_height() - lo;
  double ray = span > 0.0 ? 0.25 * span : 1.0;
  double top = t.root_height() + ray;
  double scale = plot_h / (top - lo);
  auto y = [&](double h) { return margin + (top - h) * scale; };

  // leaf columns in DFS order, children visited in stored (index) order
  std::vector<double> x(t.size(), 0.0);
  std::vector<std::size_t> stack{t.root}, dfs_leaves;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (t.is_leaf(v)) dfs_leaves.push_back(v);
    for (auto it = t.children[v].rbegin(); it != t.children[v].rend(); ++it) stack.push_back(*it);
  }
  for (std::size_t i = 0; i < dfs_leaves.size(); ++i)
    x[dfs_leaves[i]] = margin + static_cast<double>(i) * column;
  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(t.nodes[a].height, a) < std::tie(t.nodes[b].height, b);
  });
  for (std::size_t v : order) {
    if (t.is_leaf(v)) continue;
    double sum = 0.0;
    for (std::size_t c : t.children[v]) sum += x[c];
    x[v] = sum / static_cast<double>(t.children[v].size());
  }

  double width = margin * 2 + column * static_cast<double>(t.leaf_count() > 1 ? t.leaf_count() - 1 : 1);
  double height = margin * 2 + plot_h;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(width) +
         "\" height=\"" + detail::svg_num(height) + "\" viewBox=\"0 0 " + detail::svg_num(width) +
         " " + detail::svg_num(height) + "\">\n";
  out += detail::svg_arrow_defs();
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (t.parent(v) == npos) continue;
    std::size_t p = t.parent(v);
    out += "  <path d=\"M " + detail::svg_num(x[v]) + " " + detail::svg_num(y(t.height(v))) +
           " L " + detail::svg_num(x[v]) + " " + detail::svg_num(y(t.height(p))) + " L " +
           detail::svg_num(x[p]) + " " + detail::svg_num(y(t.height(p))) +
           "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1.5\"/>\n";
  }
  out += "  <line x1=\"" + detail::svg_num(x[t.root]) + "\" y1=\"" +
         detail::svg_num(y(t.root_height())) + "\" x2=\"" + detail::svg_num(x[t.root]) +
         "\" y2=\"" + detail::svg_num(y(top)) +
         "\" stroke=\"#333\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>\n";
  for (std::size_t v = 0; v < t.size(); ++v) {
    out += "  <circle class=\"" + std::string(t.is_leaf(v) ? "leaf" : "branch") + "\" cx=\"" +
           detail::svg_num(x[v]) + "\" cy=\"" + detail::svg_num(y(t.height(v))) +
           "\" r=\"3\" fill=\"#333\"/>\n";
    out += "  <text x=\"" + detail::svg_num(x[v] + 5.0) + "\" y=\"" +
           detail::svg_num(y(t.height(v)) - 5.0) + "\" font-size=\"10\">" +
           detail::svg_label(t.height(v)) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

// Horizontal bars sorted by (birth, death); infinite bars run to the right
// edge and are capped with an arrowhead marker.
inline std::string render_svg(const barcode& b) {
  const double margin = 36.0, row = 18.0, plot_w = 360.0;
  auto bars = sorted_intervals(b);
  double lo = 0.0, hi = 1.0;
  if (!bars.empty()) {
    lo = bars.front().birth;
    hi = lo;
    for (const interval& iv : bars) {
      lo = std::min(lo, iv.birth);
      hi = std::max(hi, std::isfinite(iv.death) ? iv.death : iv.birth);
    }
  }
  double pad = hi > lo ? 0.15 * (hi - lo) : 1.0;
  double right = hi + pad;
  double scale = plot_w / (right - lo);
  auto xplot = [&](double h) { return margin + (h - lo) * scale; };

  double width = margin * 2 + plot_w;
  double height = margin * 2 + row * static_cast<double>(bars.empty() ? 1 : bars.size());
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(width) +
         "\" height=\"" + detail::svg_num(height) + "\" viewBox=\"0 0 " + detail::svg_num(width) +
         " " + detail::svg_num(height) + "\">\n";
  out += detail::svg_arrow_defs();
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const interval& iv = bars[i];
    double ybar = margin + row * (static_cast<double>(i) + 0.5);
    bool infinite = !std::isfinite(iv.death);
    double xe = infinite ? xplot(right) : xplot(iv.death);
    out += "  <line class=\"" + std::string(infinite ? "bar-infinite" : "bar") + "\" x1=\"" +
           detail::svg_num(xplot(iv.birth)) + "\" y1=\"" + detail::svg_num(ybar) + "\" x2=\"" +
           detail::svg_num(xe) + "\" y2=\"" + detail::svg_num(ybar) +
           "\" stroke=\"#06c\" stroke-width=\"4\"" +
           (infinite ? " marker-end=\"url(#arrow)\"" : "") + "/>\n";
  }
  double axis_y = height - margin * 0.5;
  out += "  <line x1=\"" + detail::svg_num(xplot(lo)) + "\" y1=\"" + detail::svg_num(axis_y) +
         "\" x2=\"" + detail::svg_num(xplot(right)) + "\" y2=\"" + detail::svg_num(axis_y) +
         "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  out += "  <text x=\"" + detail::svg_num(xplot(lo)) + "\" y=\"" + detail::svg_num(axis_y - 4.0) +
         "\" font-size=\"10\">" + detail::svg_label(lo) + "</text>\n";
  out += "  <text x=\"" + detail::svg_num(xplot(hi)) + "\" y=\"" + detail::svg_num(axis_y - 4.0) +
         "\" font-size=\"10\">" + detail::svg_label(hi) + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace mm

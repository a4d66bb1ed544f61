#pragma once

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mergemetrics/chambers.hpp"

namespace mm {

using json = nlohmann::ordered_json;

inline json tree_to_json(const merge_tree& t) {
  json doc;
  doc["format_version"] = 1;
  json nodes = json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    json n;
    n["id"] = i;
    if (t.parent(i) == npos)
      n["parent"] = nullptr;
    else
      n["parent"] = t.parent(i);
    n["height"] = t.height(i);
    nodes.push_back(std::move(n));
  }
  doc["nodes"] = std::move(nodes);
  return doc;
}

namespace detail {

inline const json& require_field(const json& obj, const char* field, const char* where) {
  if (!obj.is_object() || !obj.contains(field))
    fail(errc::syntax_error, std::string("missing field '") + field + "' in " + where);
  return obj.at(field);
}

// Heights are numbers; the strings "NaN"/"Infinity"/"-Infinity" are accepted
// textually and rejected later by validation.
inline double height_value(const json& v, const char* where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    const char* c = s.c_str();
    char* end = nullptr;
    double x = std::strtod(c, &end);
    if (end != c && *end == '\0') return x;
  }
  fail(errc::syntax_error, std::string("field 'height' in ") + where + " is not numeric");
}

}  // namespace detail

inline merge_tree tree_from_json(const json& doc) {
  const json& ver = detail::require_field(doc, "format_version", "tree document");
  if (!ver.is_number_integer() || ver.get<int>() != 1)
    fail(errc::syntax_error, "unsupported tree document format_version");
  const json& nodes = detail::require_field(doc, "nodes", "tree document");
  if (!nodes.is_array() || nodes.empty())
    fail(errc::syntax_error, "'nodes' must be a non-empty array");

  std::map<std::uint64_t, std::size_t> index_of;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string where = "node record " + std::to_string(i);
    const json& id = detail::require_field(nodes[i], "id", where.c_str());
    if (!id.is_number_integer())
      fail(errc::syntax_error, "field 'id' in " + where + " is not an integer");
    if (!index_of.emplace(id.get<std::uint64_t>(), i).second)
      fail(errc::syntax_error, "duplicate node id in " + where);
  }
  std::vector<raw_node> raw(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string where = "node record " + std::to_string(i);
    raw[i].height = detail::height_value(detail::require_field(nodes[i], "height", where.c_str()),
                                         where.c_str());
    const json& p = detail::require_field(nodes[i], "parent", where.c_str());
    if (p.is_null()) continue;
    if (!p.is_number_integer())
      fail(errc::syntax_error, "field 'parent' in " + where + " is not an id or null");
    auto it = index_of.find(p.get<std::uint64_t>());
    if (it == index_of.end())
      fail(errc::syntax_error, "field 'parent' in " + where + " names an unknown id");
    raw[i].parent = it->second;
  }
  return validate(raw);
}

inline std::string serialize_tree(const merge_tree& t) { return tree_to_json(t).dump(2) + "\n"; }

inline merge_tree parse_tree(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(errc::syntax_error, e.what());
  }
  return tree_from_json(doc);
}

inline json barcode_to_json(const barcode& b) {
  json doc;
  doc["format_version"] = 1;
  json bars = json::array();
  for (const interval& iv : sorted_intervals(b)) {
    json r;
    r["birth"] = iv.birth;
    if (std::isinf(iv.death))
      r["death"] = nullptr;  // infinite death is null, never a sentinel number
    else
      r["death"] = iv.death;
    bars.push_back(std::move(r));
  }
  doc["intervals"] = std::move(bars);
  return doc;
}

inline barcode barcode_from_json(const json& doc) {
  const json& ver = detail::require_field(doc, "format_version", "barcode document");
  if (!ver.is_number_integer() || ver.get<int>() != 1)
    fail(errc::syntax_error, "unsupported barcode document format_version");
  const json& bars = detail::require_field(doc, "intervals", "barcode document");
  if (!bars.is_array()) fail(errc::syntax_error, "'intervals' must be an array");
  barcode out;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    std::string where = "interval record " + std::to_string(i);
    const json& birth = detail::require_field(bars[i], "birth", where.c_str());
    if (!birth.is_number())
      fail(errc::syntax_error, "field 'birth' in " + where + " is not a number");
    const json& death = detail::require_field(bars[i], "death", where.c_str());
    interval iv{birth.get<double>(), inf};
    if (!death.is_null()) {
      if (!death.is_number())
        fail(errc::syntax_error, "field 'death' in " + where + " is not a number or null");
      iv.death = death.get<double>();
    }
    if (!std::isfinite(iv.birth) || !(iv.birth < iv.death))
      fail(errc::invalid_argument, where + " needs finite birth < death");
    out.intervals.push_back(iv);
  }
  return out;
}

inline std::string serialize_barcode(const barcode& b) { return barcode_to_json(b).dump(2) + "\n"; }

inline barcode parse_barcode(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(errc::syntax_error, e.what());
  }
  return barcode_from_json(doc);
}

inline json path_to_json(const discrete_path& p) {
  json doc;
  doc["format_version"] = 1;
  json ws = json::array();
  for (const waypoint& w : p.waypoints) {
    json r;
    r["t"] = w.t;
    r["tree"] = tree_to_json(w.tree);
    ws.push_back(std::move(r));
  }
  doc["waypoints"] = std::move(ws);
  return doc;
}

inline json report_to_json(const theorem_report& rep) {
  json doc;
  doc["format_version"] = 1;
  doc["trials"] = rep.trials;
  doc["max_leaves"] = rep.max_leaves;
  doc["samples"] = rep.samples;
  doc["seed"] = rep.seed;
  doc["hard_pass"] = rep.hard_pass;
  doc["soft_pass"] = rep.soft_pass;
  doc["all_hard"] = rep.all_hard();
  doc["soft_rate"] = rep.soft_rate();
  json records = json::array();
  json failures = json::array();
  for (const theorem_trial& tr : rep.records) {
    json r;
    r["index"] = tr.index;
    r["leaves_a"] = tr.a.leaf_count();
    r["leaves_b"] = tr.b.leaf_count();
    r["d_i"] = tr.d_i;
    r["s"] = tr.s;
    r["s_coarse"] = tr.s_coarse;
    r["d_b"] = tr.d_b;
    r["hard"] = tr.hard();
    r["soft"] = tr.soft;
    records.push_back(std::move(r));
    if (!tr.hard() || !tr.soft) {
      json f;
      f["index"] = tr.index;
      f["a"] = tree_to_json(tr.a);
      f["b"] = tree_to_json(tr.b);
      failures.push_back(std::move(f));
    }
  }
  doc["records"] = std::move(records);
  doc["failing_fixtures"] = std::move(failures);
  return doc;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::file_not_found, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline merge_tree load_tree(const std::string& path) { return parse_tree(read_file(path)); }

}  // namespace mm

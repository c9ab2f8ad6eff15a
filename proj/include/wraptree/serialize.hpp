#pragma once

#include <cstddef>
#include <istream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wraptree/aabb.hpp"
#include "wraptree/boundary.hpp"
#include "wraptree/diagnostics.hpp"
#include "wraptree/rtree.hpp"

namespace wraptree {

/// Malformed input document (snapshot, dataset line, boundary spec).
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view snapshot_format = "wraptree-snapshot";
inline constexpr int snapshot_version = 1;

/// Dimension-erased boundary description, as read from a command line or a
/// document before the dimension is known.
struct boundary_spec {
  bool periodic = false;
  std::vector<double> lower;
  std::vector<double> upper;

  std::optional<std::size_t> dimension() const {
    if (!periodic) return std::nullopt;
    return lower.size();
  }
};

namespace detail {

inline std::vector<double> parse_number_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw parse_error(std::string(what) + ": cannot parse number '" + item + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename Real, std::size_t D>
vec<Real, D> to_vec(const std::vector<double>& values, std::string_view what) {
  if (values.size() != D) {
    std::ostringstream os;
    os << what << ": expected " << D << " components, got " << values.size();
    throw dimension_mismatch(os.str());
  }
  vec<Real, D> out;
  for (std::size_t k = 0; k < D; ++k) out[k] = static_cast<Real>(values[k]);
  return out;
}

template <typename Real, std::size_t D>
std::vector<double> to_list(const vec<Real, D>& p) {
  return std::vector<double>(p.begin(), p.end());
}

inline std::vector<double> number_array(const nlohmann::json& j, std::string_view key) {
  const auto it = j.find(std::string(key));
  if (it == j.end() || !it->is_array()) {
    throw parse_error("missing array field '" + std::string(key) + "'");
  }
  std::vector<double> out;
  for (const auto& x : *it) {
    if (!x.is_number()) throw parse_error("non-numeric entry in '" + std::string(key) + "'");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace detail

/// Parses "lx,ly:ux,uy" (periodic cell) or "unbounded".
inline boundary_spec parse_boundary_spec(std::string_view text) {
  if (text == "unbounded" || text == "none") return {};
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw parse_error("boundary spec must be 'unbounded' or 'lower:upper', got '" +
                      std::string(text) + "'");
  }
  boundary_spec spec{true, detail::parse_number_list(text.substr(0, colon), "boundary lower"),
                     detail::parse_number_list(text.substr(colon + 1), "boundary upper")};
  if (spec.lower.size() != spec.upper.size()) {
    throw dimension_mismatch("boundary lower and upper corners differ in dimension");
  }
  return spec;
}

inline std::vector<double> parse_coordinate_list(std::string_view text, std::string_view what) {
  return detail::parse_number_list(text, what);
}

inline boundary_spec boundary_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw parse_error("boundary must be an object with a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind == "unbounded") return {};
  if (kind != "periodic") throw parse_error("unknown boundary kind '" + kind + "'");
  boundary_spec spec{true, detail::number_array(j, "lower"), detail::number_array(j, "upper")};
  if (spec.lower.size() != spec.upper.size()) {
    throw dimension_mismatch("boundary lower and upper corners differ in dimension");
  }
  return spec;
}

template <typename Real, std::size_t D>
boundary_condition<Real, D> to_boundary(const boundary_spec& spec) {
  if (!spec.periodic) return boundary_condition<Real, D>::unbounded();
  return boundary_condition<Real, D>::periodic(detail::to_vec<Real, D>(spec.lower, "boundary lower"),
                                               detail::to_vec<Real, D>(spec.upper, "boundary upper"));
}

template <typename Real, std::size_t D>
nlohmann::json to_json(const boundary_condition<Real, D>& b) {
  if (!b.is_periodic()) return {{"kind", "unbounded"}};
  return {{"kind", "periodic"},
          {"lower", detail::to_list(b.cell().lower())},
          {"upper", detail::to_list(b.cell().upper())}};
}

template <typename Real, std::size_t D>
boundary_condition<Real, D> boundary_from_json(const nlohmann::json& j) {
  return to_boundary<Real, D>(boundary_spec_from_json(j));
}

template <typename Real, std::size_t D>
nlohmann::json to_json(const aabb<Real, D>& box) {
  return {{"center", detail::to_list(box.center)}, {"radius", detail::to_list(box.radius)}};
}

/// Reads a box verbatim; callers canonicalize if they need to.
template <typename Real, std::size_t D>
aabb<Real, D> aabb_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw parse_error("box must be an object with 'center' and 'radius'");
  return {detail::to_vec<Real, D>(detail::number_array(j, "center"), "box center"),
          detail::to_vec<Real, D>(detail::number_array(j, "radius"), "box radius")};
}

namespace detail {

template <typename Real, std::size_t D>
nlohmann::json node_to_json(const typename rtree<Real, D>::node& n) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : n.entries) {
    nlohmann::json je{{"box", to_json(e.box)}};
    if (e.holds_id()) {
      je["id"] = e.id();
    } else {
      je["child"] = node_to_json<Real, D>(e.child());
    }
    entries.push_back(std::move(je));
  }
  return {{"level", n.level}, {"entries", std::move(entries)}};
}

template <typename Real, std::size_t D>
std::unique_ptr<typename rtree<Real, D>::node> node_from_json(const nlohmann::json& j,
                                                              const std::string& path) {
  using node = typename rtree<Real, D>::node;
  using entry = typename rtree<Real, D>::entry;
  if (!j.is_object() || !j.contains("level") || !j["level"].is_number_integer() ||
      !j.contains("entries") || !j["entries"].is_array()) {
    throw parse_error(path + ": node needs integer 'level' and array 'entries'");
  }
  auto n = std::make_unique<node>();
  n->level = j["level"].get<int>();
  std::size_t i = 0;
  for (const auto& je : j["entries"]) {
    const std::string here = path + "/" + std::to_string(i++);
    if (!je.is_object() || !je.contains("box")) throw parse_error(here + ": entry without 'box'");
    const bool has_id = je.contains("id");
    const bool has_child = je.contains("child");
    if (has_id == has_child) {
      throw parse_error(here + ": entry needs exactly one of 'id' or 'child'");
    }
    aabb<Real, D> box;
    try {
      box = aabb_from_json<Real, D>(je["box"]);
    } catch (const parse_error& e) {
      throw parse_error(here + ": " + e.what());
    }
    if (has_id) {
      if (!je["id"].is_number_unsigned()) throw parse_error(here + ": 'id' must be unsigned");
      n->entries.push_back(entry{box, je["id"].get<object_id>()});
    } else {
      n->entries.push_back(entry{box, node_from_json<Real, D>(je["child"], here)});
    }
  }
  return n;
}

}  // namespace detail

/// Versioned JSON snapshot of a whole tree.
template <typename Real, std::size_t D>
nlohmann::json to_json(const rtree<Real, D>& tree) {
  return {{"format", snapshot_format},
          {"version", snapshot_version},
          {"dimension", D},
          {"boundary", to_json(tree.boundary())},
          {"min_entries", tree.min_entries()},
          {"max_entries", tree.max_entries()},
          {"count", tree.size()},
          {"root", detail::node_to_json<Real, D>(tree.root())}};
}

/// Reads the dimension field of a snapshot after checking format and version.
inline std::size_t snapshot_dimension(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", std::string()) != snapshot_format) {
    throw parse_error("not a tree snapshot (missing format tag)");
  }
  if (!j.contains("version") || j["version"] != snapshot_version) {
    throw parse_error("unsupported snapshot version");
  }
  if (!j.contains("dimension") || !j["dimension"].is_number_unsigned()) {
    throw parse_error("snapshot lacks an unsigned 'dimension'");
  }
  return j["dimension"].get<std::size_t>();
}

/// Rebuilds a tree from a snapshot. Structure is taken as-is; run
/// validate() to check it.
template <typename Real, std::size_t D>
rtree<Real, D> tree_from_json(const nlohmann::json& j) {
  if (snapshot_dimension(j) != D) {
    throw dimension_mismatch("snapshot dimension " + std::to_string(j["dimension"].get<std::size_t>()) +
                             " does not match " + std::to_string(D));
  }
  for (const char* key : {"min_entries", "max_entries", "count"}) {
    if (!j.contains(key) || !j[key].is_number_unsigned()) {
      throw parse_error(std::string("snapshot lacks unsigned '") + key + "'");
    }
  }
  if (!j.contains("boundary") || !j.contains("root")) {
    throw parse_error("snapshot lacks 'boundary' or 'root'");
  }
  return rtree<Real, D>::assemble(boundary_from_json<Real, D>(j["boundary"]),
                                  j["min_entries"].get<std::size_t>(),
                                  j["max_entries"].get<std::size_t>(),
                                  detail::node_from_json<Real, D>(j["root"], "root"),
                                  j["count"].get<std::size_t>());
}

/// One object of a JSONL dataset: {"id": n, "center": [...], "radius": [...]}.
struct dataset_record {
  object_id id = 0;
  std::vector<double> center;
  std::vector<double> radius;
  std::size_t line = 0;
};

/// Parses a JSONL dataset. Blank lines are skipped; errors carry line numbers.
inline std::vector<dataset_record> read_jsonl(std::istream& in) {
  std::vector<dataset_record> out;
  std::string text;
  std::size_t line = 0;
  std::optional<std::size_t> dim;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw parse_error(where + ": " + e.what());
    }
    dataset_record r;
    r.line = line;
    try {
      if (!j.is_object() || !j.contains("id") || !j["id"].is_number_unsigned()) {
        throw parse_error("record needs an unsigned 'id'");
      }
      r.id = j["id"].get<object_id>();
      r.center = detail::number_array(j, "center");
      r.radius = detail::number_array(j, "radius");
    } catch (const parse_error& e) {
      throw parse_error(where + ": " + e.what());
    }
    if (r.center.size() != r.radius.size() || r.center.empty()) {
      throw dimension_mismatch(where + ": center and radius must have the same, nonzero length");
    }
    if (dim && *dim != r.center.size()) {
      throw dimension_mismatch(where + ": dimension " + std::to_string(r.center.size()) +
                               " differs from earlier records (" + std::to_string(*dim) + ")");
    }
    dim = r.center.size();
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string to_jsonl_line(object_id id, const std::vector<double>& center,
                                 const std::vector<double>& radius) {
  return nlohmann::json{{"id", id}, {"center", center}, {"radius", radius}}.dump();
}

}  // namespace wraptree

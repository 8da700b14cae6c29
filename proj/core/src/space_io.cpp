#include "nkstab/space_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nkstab {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

[[noreturn]] void schema(const std::string& msg) { throw SpaceError("schema violation: " + msg); }

const json& field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) schema(std::string("missing field '") + key + "'");
  return *it;
}

int as_int(const json& v, const std::string& what) {
  if (!v.is_number_integer()) schema(what + " must be an integer");
  return v.get<int>();
}

double as_double(const json& v, const std::string& what) {
  if (!v.is_number()) schema(what + " must be a number");
  return v.get<double>();
}

Matrix matrix_from_json(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 6) schema(what + " must be a 6x6 array");
  Matrix m(6, 6);
  for (int r = 0; r < 6; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 6) schema(what + " must be a 6x6 array");
    for (int c = 0; c < 6; ++c) m(r, c) = as_double(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

std::vector<int> index_list(const json& v, const std::string& what) {
  if (!v.is_array()) schema(what + " must be an array");
  std::vector<int> out;
  for (const auto& x : v) out.push_back(as_int(x, what));
  return out;
}

}  // namespace

std::string dump_space(const SpaceDefinition& def) {
  json doc;
  doc["name"] = def.name;
  doc["dim"] = def.dim;
  json sc = json::array();
  for (const auto& c : def.structure_constants) sc.push_back({{"i", c.i}, {"j", c.j}, {"k", c.k}, {"value", c.value}});
  doc["structure_constants"] = std::move(sc);
  doc["h_indices"] = def.h_indices;
  doc["m_indices"] = def.m_indices;
  if (def.metric_m) {
    doc["metric_m"] = matrix_to_json(*def.metric_m);
  } else {
    doc["metric_m"] = "normal";
    doc["normal_scale"] = def.normal_scale;
  }
  doc["J"] = matrix_to_json(def.J);
  return doc.dump(1);
}

SpaceDefinition parse_space(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpaceError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema("document must be an object");
  static const std::set<std::string> known = {"name", "dim", "structure_constants", "h_indices",
                                              "m_indices", "metric_m", "normal_scale", "J"};
  for (const auto& [key, value] : doc.items())
    if (!known.contains(key)) schema("unknown field '" + key + "'");

  SpaceDefinition def;
  const json& name = field(doc, "name");
  if (!name.is_string()) schema("name must be a string");
  def.name = name.get<std::string>();
  def.dim = as_int(field(doc, "dim"), "dim");
  const json& sc = field(doc, "structure_constants");
  if (!sc.is_array()) schema("structure_constants must be an array");
  for (const auto& e : sc) {
    if (!e.is_object() || e.size() != 4) schema("structure constant entries need exactly i, j, k, value");
    def.structure_constants.push_back({as_int(field(e, "i"), "i"), as_int(field(e, "j"), "j"),
                                       as_int(field(e, "k"), "k"), as_double(field(e, "value"), "value")});
  }
  def.h_indices = index_list(field(doc, "h_indices"), "h_indices");
  def.m_indices = index_list(field(doc, "m_indices"), "m_indices");
  const json& metric = field(doc, "metric_m");
  if (metric.is_string()) {
    if (metric.get<std::string>() != "normal") schema("metric_m must be \"normal\" or a 6x6 array");
    if (doc.contains("normal_scale")) def.normal_scale = as_double(doc["normal_scale"], "normal_scale");
  } else {
    if (doc.contains("normal_scale")) schema("normal_scale is only valid with the normal metric");
    def.metric_m = matrix_from_json(metric, "metric_m");
  }
  def.J = matrix_from_json(field(doc, "J"), "J");
  return def;
}

SpaceDefinition read_space_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpaceError("cannot open space file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_space(ss.str());
}

void write_space_file(const std::filesystem::path& path, const SpaceDefinition& def) {
  std::ofstream out(path);
  if (!out) throw SpaceError("cannot write space file " + path.string());
  out << dump_space(def) << '\n';
}

bool identical(const SpaceDefinition& a, const SpaceDefinition& b) {
  auto same = [](const Matrix& x, const Matrix& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && (x.array() == y.array()).all();
  };
  if (a.metric_m.has_value() != b.metric_m.has_value()) return false;
  if (a.metric_m && !same(*a.metric_m, *b.metric_m)) return false;
  return a.name == b.name && a.dim == b.dim && a.structure_constants == b.structure_constants &&
         a.h_indices == b.h_indices && a.m_indices == b.m_indices && a.normal_scale == b.normal_scale &&
         same(a.J, b.J);
}

}  // namespace nkstab

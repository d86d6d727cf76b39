#include "bmo_cli/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <vector>

#include "bmo/error.hpp"

namespace bmo::cli {

namespace {

double number(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw Error(where + ": missing numeric field \"" + key + "\"");
  return j.at(key).get<double>();
}

NodeSpec parse_node(const Json& j, const std::string& where) {
  if (!j.is_object()) throw Error(where + ": node must be an object");
  NodeSpec s;
  s.measure = number(j, "measure", where);
  if (j.contains("value")) s.value = number(j, "value", where);
  if (j.contains("children")) {
    const Json& c = j.at("children");
    if (!c.is_array()) throw Error(where + ": children must be an array");
    for (std::size_t i = 0; i < c.size(); ++i) s.children.push_back(parse_node(c[i], where + "/" + std::to_string(i)));
  }
  return s;
}

MartingaleSpec parse_mnode(const Json& j, const std::string& where) {
  if (!j.is_object()) throw Error(where + ": node must be an object");
  MartingaleSpec s;
  s.measure = number(j, "measure", where);
  const Json* p = j.contains("point") ? &j.at("point") : nullptr;
  if (!p || !p->is_array() || p->size() != 2 || !(*p)[0].is_number() || !(*p)[1].is_number())
    throw Error(where + ": point must be [x1, x2]");
  s.point = {(*p)[0].get<double>(), (*p)[1].get<double>()};
  if (j.contains("children")) {
    const Json& c = j.at("children");
    if (!c.is_array()) throw Error(where + ": children must be an array");
    for (std::size_t i = 0; i < c.size(); ++i) s.children.push_back(parse_mnode(c[i], where + "/" + std::to_string(i)));
  }
  return s;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Scalar cell for CSV and tables: numbers at full precision, null empty.
std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) {
    const std::string s = format_number(v.get<double>());
    return s.front() == '"' ? s.substr(1, s.size() - 2) : s;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_value(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        os << inner << Json(it.key()).dump() << ": ";
        write_value(os, it.value(), indent + 1);
        os << (i + 1 < j.size() ? ",\n" : "\n");
      }
      os << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Short arrays of scalars stay on one line.
      const bool flat = j.size() <= 4 && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      os << (flat ? "[" : "[\n");
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (!flat) os << inner;
        write_value(os, j[i], indent + 1);
        if (i + 1 < j.size()) os << (flat ? ", " : ",\n");
      }
      os << (flat ? "]" : "\n" + pad + "]");
      return;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::vector<std::string> row_columns(const Json& rows) {
  std::vector<std::string> cols;
  for (const Json& r : rows)
    for (auto it = r.begin(); it != r.end(); ++it)
      if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
  return cols;
}

}  // namespace

TreeFile parse_tree(const Json& j) {
  if (!j.is_object() || !j.contains("root")) throw Error("tree file: expected {\"alpha\": ..., \"root\": {...}}");
  return {number(j, "alpha", "tree file"), parse_node(j.at("root"), "root")};
}

MartingaleFile parse_martingale(const Json& j) {
  if (!j.is_object() || !j.contains("root")) throw Error("martingale file: expected {\"eps\": ..., \"root\": {...}}");
  return {number(j, "eps", "martingale file"), parse_mnode(j.at("root"), "root")};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

Json to_json(const NodeSpec& spec) {
  Json j;
  j["measure"] = spec.measure;
  if (spec.value) j["value"] = *spec.value;
  if (!spec.children.empty()) {
    j["children"] = Json::array();
    for (const NodeSpec& c : spec.children) j["children"].push_back(to_json(c));
  }
  return j;
}

Json to_json(const OmegaPoint& x) { return Json::array({x.x1, x.x2}); }

Json to_json(const ExtendedReal& x) { return x.is_infinite() ? Json("inf") : Json(x.value()); }

void write_json(std::ostream& os, const Json& j) {
  write_value(os, j, 0);
  os << '\n';
}

void write_csv(std::ostream& os, const Json& j) {
  if (j.contains("rows") && j.at("rows").is_array()) {
    const Json& rows = j.at("rows");
    const std::vector<std::string> cols = row_columns(rows);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << csv_escape(cols[i]);
    os << '\n';
    for (const Json& r : rows) {
      for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << (r.contains(cols[i]) ? csv_escape(cell(r.at(cols[i]))) : "");
      os << '\n';
    }
    return;
  }
  os << "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.value().is_primitive()) os << csv_escape(it.key()) << ',' << csv_escape(cell(it.value())) << '\n';
}

void write_table(std::ostream& os, const Json& j) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.value().is_primitive()) os << it.key() << ": " << cell(it.value()) << '\n';
  if (!j.contains("rows") || !j.at("rows").is_array() || j.at("rows").empty()) return;

  const Json& rows = j.at("rows");
  const std::vector<std::string> cols = row_columns(rows);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) width[i] = cols[i].size();
  for (const Json& r : rows) {
    auto& line = cells.emplace_back();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      line.push_back(r.contains(cols[i]) ? cell(r.at(cols[i])) : "");
      width[i] = std::max(width[i], line.back().size());
    }
  }
  os << '\n';
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      os << (i ? "  " : "") << line[i];
      if (i + 1 < line.size()) os << std::string(width[i] - line[i].size(), ' ');
    }
    os << '\n';
  };
  emit(cols);
  for (const auto& line : cells) emit(line);
}

}  // namespace bmo::cli

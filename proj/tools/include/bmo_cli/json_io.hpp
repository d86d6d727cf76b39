#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "bmo/martingale.hpp"
#include "bmo/tree.hpp"
#include "bmo/types.hpp"

namespace bmo::cli {

using Json = nlohmann::ordered_json;

struct TreeFile {
  double alpha = 0.5;
  NodeSpec root;
};

struct MartingaleFile {
  double eps = 1.0;
  MartingaleSpec root;
};

/// {"alpha": a, "root": {"measure": m, "children": [...], "value": v}}
TreeFile parse_tree(const Json& j);
/// {"eps": e, "root": {"measure": m, "point": [x1, x2], "children": [...]}}
MartingaleFile parse_martingale(const Json& j);

Json read_json_file(const std::string& path);

Json to_json(const NodeSpec& spec);
Json to_json(const OmegaPoint& x);
/// Infinite values become the string "inf".
Json to_json(const ExtendedReal& x);

/// Pretty JSON with every number at 17 significant digits and non-finite
/// numbers written as strings.
void write_json(std::ostream& os, const Json& j);

/// Rows ("rows" array of flat objects) as CSV; scalars as key,value pairs
/// when there are no rows.
void write_csv(std::ostream& os, const Json& j);

/// Scalars as "key: value" followed by the rows as an aligned table.
void write_table(std::ostream& os, const Json& j);

}  // namespace bmo::cli

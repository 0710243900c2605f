#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sqlreward::mutate {

// Business dimensions, their entities and the SQL condition each entity
// stands for. Entity names are unique across dimensions.
struct DimensionInventory {
  int version = 1;
  std::map<std::string, std::vector<std::string>> dimensions;
  std::map<std::string, std::string> fragments;  // entity -> predicate
  // Optional sampling weights; missing entities weigh 1.
  std::map<std::string, std::map<std::string, double>> priors;
  // Column each dimension groups by, used for a template's group_by.
  std::map<std::string, std::string> group_columns;

  // Throws InvalidArgument: entity without a fragment, entity listed twice,
  // fragment that is not a predicate expression, bad prior.
  void validate() const;
};

struct QueryTemplate {
  std::string template_id;
  std::vector<std::string> slots;  // dimension names, in order
  std::optional<std::string> group_by;
  std::string from;                    // table expression
  std::string select = "COUNT(*)";     // projected measure
};

struct SlotFilling {
  std::string template_id;
  std::vector<std::pair<std::string, std::string>> bindings;  // slot -> entity
  std::uint64_t seed = 0;
  std::string sql;  // skeleton query composed from the fragments
};

// Throws InvalidArgument when a slot or group_by names an unknown dimension.
void validate_template(const QueryTemplate& tpl, const DimensionInventory& inventory);

// Draws one entity per slot from an mt19937_64 seeded with `seed`, weighted
// by the inventory priors. The skeleton is
//   SELECT [g,] <select> FROM <from> WHERE f1 AND f2 ... [GROUP BY g]
// and is checked to parse. Throws EmptyDimension or InvalidArgument.
SlotFilling instantiate(const QueryTemplate& tpl, const DimensionInventory& inventory, std::uint64_t seed);

// JSON files:
//   inventory: {"version": 1, "dimensions": {dim: [entity...]},
//               "fragments": {entity: sql}, "priors": {dim: {entity: w}},
//               "group_columns": {dim: column}}
//   templates: {"version": 1, "from": default table,
//               "templates": [{"template_id", "slots", "group_by"?, "from"?, "select"?}]}
// Throws IoError or InvalidArgument.
DimensionInventory load_inventory(const std::filesystem::path& path);
std::vector<QueryTemplate> load_templates(const std::filesystem::path& path);

}  // namespace sqlreward::mutate

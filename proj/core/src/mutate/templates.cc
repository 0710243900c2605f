#include "sqlreward/mutate/templates.h"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "mutate/draw.h"
#include "sqlreward/error.h"
#include "sqlreward/sql/parser.h"

namespace sqlreward::mutate {

using nlohmann::json;

void DimensionInventory::validate() const {
  std::set<std::string> seen;
  for (const auto& [dim, entities] : dimensions) {
    for (const std::string& entity : entities) {
      if (!seen.insert(entity).second) throw InvalidArgument("entity '" + entity + "' is listed more than once");
      auto it = fragments.find(entity);
      if (it == fragments.end()) throw InvalidArgument("entity '" + entity + "' has no SQL fragment");
      try {
        sql::parse_expression(it->second);
      } catch (const Error& e) {
        throw InvalidArgument("fragment for '" + entity + "' is not a predicate: " + e.what());
      }
    }
  }
  for (const auto& [entity, fragment] : fragments) {
    if (!seen.count(entity)) throw InvalidArgument("fragment '" + entity + "' belongs to no dimension");
  }
  for (const auto& [dim, weights] : priors) {
    if (!dimensions.count(dim)) throw InvalidArgument("priors name unknown dimension '" + dim + "'");
    for (const auto& [entity, w] : weights) {
      if (!(w >= 0.0)) throw InvalidArgument("prior for '" + entity + "' must be >= 0");
    }
  }
}

void validate_template(const QueryTemplate& tpl, const DimensionInventory& inventory) {
  if (tpl.slots.empty()) throw InvalidArgument("template " + tpl.template_id + " has no slots");
  if (tpl.from.empty()) throw InvalidArgument("template " + tpl.template_id + " has no FROM table");
  for (const std::string& slot : tpl.slots) {
    if (!inventory.dimensions.count(slot)) {
      throw InvalidArgument("template " + tpl.template_id + ": unknown dimension '" + slot + "'");
    }
  }
  if (tpl.group_by) {
    if (!inventory.dimensions.count(*tpl.group_by)) {
      throw InvalidArgument("template " + tpl.template_id + ": unknown group_by dimension '" + *tpl.group_by + "'");
    }
    if (!inventory.group_columns.count(*tpl.group_by)) {
      throw InvalidArgument("template " + tpl.template_id + ": dimension '" + *tpl.group_by + "' has no group column");
    }
  }
}

SlotFilling instantiate(const QueryTemplate& tpl, const DimensionInventory& inventory, std::uint64_t seed) {
  validate_template(tpl, inventory);
  std::mt19937_64 rng(seed);
  SlotFilling out;
  out.template_id = tpl.template_id;
  out.seed = seed;

  std::string where;
  for (const std::string& slot : tpl.slots) {
    const auto& entities = inventory.dimensions.at(slot);
    if (entities.empty()) throw EmptyDimension("dimension '" + slot + "' has no entities");
    std::vector<double> weights(entities.size(), 1.0);
    if (auto p = inventory.priors.find(slot); p != inventory.priors.end()) {
      for (std::size_t i = 0; i < entities.size(); ++i) {
        if (auto w = p->second.find(entities[i]); w != p->second.end()) weights[i] = w->second;
      }
    }
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw EmptyDimension("dimension '" + slot + "' has zero total prior weight");
    const std::string& entity = entities[detail::draw_weighted(rng, weights)];
    out.bindings.emplace_back(slot, entity);
    if (!where.empty()) where += " AND ";
    where += "(" + inventory.fragments.at(entity) + ")";
  }

  std::string sql = "SELECT ";
  std::string group;
  if (tpl.group_by) {
    group = inventory.group_columns.at(*tpl.group_by);
    sql += group + ", ";
  }
  sql += tpl.select + " FROM " + tpl.from + " WHERE " + where;
  if (!group.empty()) sql += " GROUP BY " + group;
  try {
    sql::parse(sql);
  } catch (const Error& e) {
    throw InvalidArgument("template " + tpl.template_id + " composes invalid SQL: " + e.what());
  }
  out.sql = std::move(sql);
  return out;
}

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void check_version(const json& j, const std::filesystem::path& path) {
  const int version = j.value("version", 1);
  if (version != 1) throw InvalidArgument(path.string() + ": unsupported version " + std::to_string(version));
}

}  // namespace

DimensionInventory load_inventory(const std::filesystem::path& path) {
  const json j = read_json(path);
  DimensionInventory inv;
  try {
    check_version(j, path);
    inv.dimensions = j.at("dimensions").get<decltype(inv.dimensions)>();
    inv.fragments = j.at("fragments").get<decltype(inv.fragments)>();
    if (j.contains("priors")) inv.priors = j["priors"].get<decltype(inv.priors)>();
    if (j.contains("group_columns")) inv.group_columns = j["group_columns"].get<decltype(inv.group_columns)>();
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  inv.validate();
  return inv;
}

std::vector<QueryTemplate> load_templates(const std::filesystem::path& path) {
  const json j = read_json(path);
  std::vector<QueryTemplate> out;
  try {
    check_version(j, path);
    const std::string default_from = j.value("from", "");
    for (const json& t : j.at("templates")) {
      QueryTemplate tpl;
      tpl.template_id = t.at("template_id").get<std::string>();
      tpl.slots = t.at("slots").get<std::vector<std::string>>();
      if (t.contains("group_by") && !t["group_by"].is_null()) tpl.group_by = t["group_by"].get<std::string>();
      tpl.from = t.value("from", default_from);
      tpl.select = t.value("select", tpl.select);
      out.push_back(std::move(tpl));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace sqlreward::mutate

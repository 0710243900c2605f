#include "sqlreward/reward/task.h"

#include <array>

namespace sqlreward::reward {
namespace {

constexpr std::array<std::pair<Category, const char*>, 8> kNames{{
    {Category::kStandardSql, "standard_sql"},
    {Category::kMultiStep, "multi_step"},
    {Category::kReflection, "reflection"},
    {Category::kDegenerateDimension, "degenerate_dimension"},
    {Category::kAmbiguityClarification, "ambiguity_clarification"},
    {Category::kConstraintFollowUp, "constraint_follow_up"},
    {Category::kDimensionRejection, "dimension_rejection"},
    {Category::kMetricRejection, "metric_rejection"},
}};

}  // namespace

const char* to_string(Category category) {
  for (const auto& [c, name] : kNames) {
    if (c == category) return name;
  }
  return "?";
}

std::optional<Category> category_from_string(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (name == n) return c;
  }
  return std::nullopt;
}

const char* to_string(Modality modality) { return modality == Modality::kSql ? "sql" : "nl"; }

Modality modality_of(Category category) {
  switch (category) {
    case Category::kStandardSql:
    case Category::kMultiStep:
    case Category::kReflection:
    case Category::kDegenerateDimension:
      return Modality::kSql;
    default:
      return Modality::kNl;
  }
}

}  // namespace sqlreward::reward

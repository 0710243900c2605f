#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace sqlreward::reward {

enum class Category {
  kStandardSql,
  kMultiStep,
  kReflection,
  kDegenerateDimension,
  kAmbiguityClarification,
  kConstraintFollowUp,
  kDimensionRejection,
  kMetricRejection,
};

enum class Modality { kSql, kNl };

// snake_case names, e.g. "degenerate_dimension".
const char* to_string(Category category);
std::optional<Category> category_from_string(std::string_view name);
const char* to_string(Modality modality);

// The first four categories expect SQL, the rest a natural-language reply.
Modality modality_of(Category category);

struct TaskSample {
  std::string question;
  std::string model_output;  // raw, with tags
  std::string gold_target;
  Category category = Category::kStandardSql;
  std::string fixture_ref;
  // Supplied by the trainer; counted from model_output when absent.
  std::optional<std::size_t> token_count;
};

}  // namespace sqlreward::reward

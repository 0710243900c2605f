#include "sqlreward/mutate/record.h"

namespace sqlreward::mutate {

const char* to_string(MutationKind kind) {
  return kind == MutationKind::kReflectionError ? "reflection_error" : "degenerate_dimension";
}

std::optional<MutationKind> mutation_kind_from_string(std::string_view name) {
  if (name == "reflection_error") return MutationKind::kReflectionError;
  if (name == "degenerate_dimension") return MutationKind::kDegenerateDimension;
  return std::nullopt;
}

std::optional<std::string> MutationRecord::get(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

}  // namespace sqlreward::mutate

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sqlreward::mutate {

enum class MutationKind { kReflectionError, kDegenerateDimension };

const char* to_string(MutationKind kind);
std::optional<MutationKind> mutation_kind_from_string(std::string_view name);

// One applied mutation. `metadata` is an ordered list of key/value pairs,
// enough to replay the operation from `input_sql`.
struct MutationRecord {
  MutationKind kind = MutationKind::kReflectionError;
  std::string input_sql;
  std::string output_sql;
  std::vector<std::pair<std::string, std::string>> metadata;

  // Value of the first entry named `key`.
  std::optional<std::string> get(std::string_view key) const;
};

}  // namespace sqlreward::mutate

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sqlreward/exec/fixture.h"

namespace sqlreward::service {

// Fixtures a process serves, addressable by name or fixture_id.
class FixtureRegistry {
 public:
  // Loads `dir/manifest.json` if present and every `dir/*/manifest.json`.
  // Throws IoError when nothing is found, plus any fixture load error.
  static FixtureRegistry load_dir(const std::filesystem::path& dir);

  // Throws InvalidArgument when the name is already taken.
  void add(exec::DatabaseFixture fixture);

  // Throws UnknownFixture.
  const exec::DatabaseFixture& resolve(std::string_view ref) const;
  const exec::DatabaseFixture* find(std::string_view ref) const;

  // Sorted by name.
  std::vector<const exec::DatabaseFixture*> all() const;
  std::size_t size() const { return by_name_.size(); }

 private:
  std::map<std::string, exec::DatabaseFixture, std::less<>> by_name_;
  std::map<std::string, std::string, std::less<>> id_to_name_;
};

}  // namespace sqlreward::service

#include "sqlreward/service/registry.h"

#include <algorithm>

#include "sqlreward/error.h"

namespace sqlreward::service {

namespace fs = std::filesystem;

FixtureRegistry FixtureRegistry::load_dir(const fs::path& dir) {
  std::vector<fs::path> manifests;
  if (fs::exists(dir / "manifest.json")) manifests.push_back(dir / "manifest.json");
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
      manifests.push_back(entry.path() / "manifest.json");
    }
  }
  if (ec) throw IoError("cannot read fixtures directory " + dir.string() + ": " + ec.message());
  if (manifests.empty()) throw IoError("no fixture manifests under " + dir.string());
  std::sort(manifests.begin(), manifests.end());
  FixtureRegistry reg;
  for (const fs::path& m : manifests) reg.add(exec::DatabaseFixture::load(m));
  return reg;
}

void FixtureRegistry::add(exec::DatabaseFixture fixture) {
  const std::string name = fixture.name();
  if (by_name_.count(name)) throw InvalidArgument("fixture name '" + name + "' is already registered");
  id_to_name_[fixture.fixture_id()] = name;
  by_name_.emplace(name, std::move(fixture));
}

const exec::DatabaseFixture* FixtureRegistry::find(std::string_view ref) const {
  if (auto it = by_name_.find(ref); it != by_name_.end()) return &it->second;
  if (auto it = id_to_name_.find(ref); it != id_to_name_.end()) return &by_name_.find(it->second)->second;
  return nullptr;
}

const exec::DatabaseFixture& FixtureRegistry::resolve(std::string_view ref) const {
  if (const auto* f = find(ref)) return *f;
  throw UnknownFixture("unknown fixture_ref '" + std::string(ref) + "'");
}

std::vector<const exec::DatabaseFixture*> FixtureRegistry::all() const {
  std::vector<const exec::DatabaseFixture*> out;
  for (const auto& [name, f] : by_name_) out.push_back(&f);
  return out;
}

}  // namespace sqlreward::service

#include "sqlreward/service/batch.h"

#include <istream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>

#include "sqlreward/error.h"
#include "sqlreward/mutate/degenerate.h"
#include "sqlreward/mutate/templates.h"

namespace sqlreward::service {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r\n") == std::string::npos; }

ojson error_json(const std::string& kind, const std::string& message) {
  return {{"kind", kind}, {"message", message}};
}

ojson record_json(const mutate::MutationRecord& r) {
  ojson meta = ojson::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  return {{"kind", mutate::to_string(r.kind)}, {"input_sql", r.input_sql}, {"output_sql", r.output_sql},
          {"metadata", meta}};
}

struct GroupInput {
  grpo::RolloutGroup group;
  std::vector<std::optional<double>> ratios;
  std::vector<std::optional<double>> kls;
};

void append(std::vector<std::optional<double>>& dst, const json& j, const char* one, const char* many,
            std::size_t n) {
  if (j.contains(many)) {
    auto v = j[many].get<std::vector<double>>();
    if (v.size() != n) throw InvalidArgument(std::string(many) + " must match the number of rewards");
    for (double x : v) dst.emplace_back(x);
  } else if (j.contains(one)) {
    if (n != 1) throw InvalidArgument(std::string("use '") + many + "' with 'rewards'");
    dst.emplace_back(j[one].get<double>());
  } else {
    for (std::size_t i = 0; i < n; ++i) dst.emplace_back(std::nullopt);
  }
}

}  // namespace

int cmd_score(std::istream& in, std::ostream& out, const Scorer& scorer, bool with_timing) {
  int rc = kExitOk;
  std::string line;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    const RecordResult r = scorer.score_record(line, with_timing);
    if (!r.ok()) rc = kExitRecordErrors;
    out << r.body << '\n';
  }
  return rc;
}

int cmd_score_group(std::istream& in, std::ostream& out, const grpo::GrpoParams& params) {
  params.validate();
  // Either a group key or an inline error, in order of first appearance.
  std::vector<std::pair<std::string, ojson>> order;
  std::map<std::string, GroupInput> groups;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    try {
      const json j = json::parse(line);
      const std::string id = j.at("query_id").get<std::string>();
      std::vector<double> rewards;
      if (j.contains("rewards")) {
        rewards = j["rewards"].get<std::vector<double>>();
      } else {
        rewards.push_back(j.at("reward").get<double>());
      }
      auto [it, fresh] = groups.try_emplace(id);
      if (fresh) {
        it->second.group.query_id = id;
        order.emplace_back(id, nullptr);
      }
      GroupInput& g = it->second;
      append(g.ratios, j, "ratio", "ratios", rewards.size());
      append(g.kls, j, "kl", "kl_estimates", rewards.size());
      g.group.rewards.insert(g.group.rewards.end(), rewards.begin(), rewards.end());
    } catch (const std::exception& e) {
      order.emplace_back("", ojson{{"line", line_no}, {"error", error_json("InvalidArgument", e.what())}});
    }
  }

  int rc = kExitOk;
  for (const auto& [id, inline_error] : order) {
    if (!inline_error.is_null()) {
      out << inline_error.dump() << '\n';
      rc = kExitRecordErrors;
      continue;
    }
    GroupInput& g = groups.at(id);
    ojson o;
    o["query_id"] = id;
    try {
      o["rewards"] = g.group.rewards;
      o["advantages"] = grpo::advantages(g.group, params);
      const auto have = [](const auto& v) {
        for (const auto& x : v) {
          if (!x) return false;
        }
        return true;
      };
      const auto none = [](const auto& v) {
        for (const auto& x : v) {
          if (x) return false;
        }
        return true;
      };
      if (have(g.ratios) && have(g.kls)) {
        std::vector<double> ratios, kls;
        for (const auto& x : g.ratios) ratios.push_back(*x);
        for (const auto& x : g.kls) kls.push_back(*x);
        g.group.ratios = ratios;
        g.group.kl_estimates = kls;
        o["objective"] = grpo::objective(g.group, params);
      } else if (!(none(g.ratios) && none(g.kls))) {
        throw MissingRatios("group " + id + " has ratios or KL estimates for only some members");
      }
    } catch (const Error& e) {
      o = ojson{{"query_id", id}, {"error", error_json(e.kind(), e.what())}};
      rc = kExitRecordErrors;
    }
    out << o.dump() << '\n';
  }
  return rc;
}

int cmd_mutate(std::istream& in, std::ostream& out, const MutateOptions& options, const FixtureRegistry& fixtures) {
  int rc = kExitOk;
  if (options.mode == "instantiate") {
    const mutate::DimensionInventory inv = mutate::load_inventory(options.inventory);
    const std::vector<mutate::QueryTemplate> templates = mutate::load_templates(options.templates);
    for (const mutate::QueryTemplate& t : templates) {
      for (std::size_t k = 0; k < options.count; ++k) {
        const std::uint64_t seed = options.seed + k;
        ojson o;
        try {
          const mutate::SlotFilling s = mutate::instantiate(t, inv, seed);
          ojson bindings = ojson::object();
          for (const auto& [slot, entity] : s.bindings) bindings[slot] = entity;
          o = {{"template_id", s.template_id}, {"seed", s.seed}, {"bindings", bindings}, {"sql", s.sql}};
        } catch (const Error& e) {
          o = {{"template_id", t.template_id}, {"seed", seed}, {"error", error_json(e.kind(), e.what())}};
          rc = kExitRecordErrors;
        }
        out << o.dump() << '\n';
      }
    }
    return rc;
  }
  if (options.mode != "reflection" && options.mode != "degenerate") {
    throw InvalidArgument("unknown mutate mode '" + options.mode + "'");
  }

  std::string line;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    ojson o;
    std::string sql = line;
    try {
      std::string fixture_ref = options.fixture_ref;
      std::optional<mutate::ErrorKind> kind = options.error_kind;
      std::string dim_table = options.dim_table;
      std::vector<std::string> merge = options.merge_columns;
      std::uint64_t seed = options.seed + index;
      const auto first = line.find_first_not_of(" \t");
      if (line[first] == '{') {
        json j;
        try {
          j = json::parse(line);
          sql = j.at("sql").get<std::string>();
          fixture_ref = j.value("fixture_ref", fixture_ref);
          dim_table = j.value("dim_table", dim_table);
          if (j.contains("merge_columns")) merge = j["merge_columns"].get<std::vector<std::string>>();
          if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
          if (j.contains("error_kind")) {
            kind = mutate::error_kind_from_string(j["error_kind"].get<std::string>());
            if (!kind) throw InvalidArgument("unknown error_kind " + j["error_kind"].dump());
          }
        } catch (const json::exception& e) {
          throw InvalidArgument(std::string("bad input line: ") + e.what());
        }
      }
      if (fixture_ref.empty()) throw InvalidArgument("no fixture given (use --fixture or fixture_ref)");
      const exec::DatabaseFixture& fixture = fixtures.resolve(fixture_ref);
      if (options.mode == "reflection") {
        if (!kind) throw InvalidArgument("no error kind given (use --error-kind or error_kind)");
        o = record_json(mutate::inject_error(sql, *kind, seed, fixture));
      } else {
        if (dim_table.empty() || merge.empty()) throw InvalidArgument("degenerate needs a dim table and merge columns");
        const mutate::DegenerateResult r = mutate::degenerate_rewrite(sql, fixture, dim_table, merge);
        o = record_json(r.record);
        if (options.write_fixtures) {
          const auto dir = *options.write_fixtures / r.fixture.name();
          exec::write_fixture(r.fixture, dir);
          o["fixture_path"] = dir.string();
        }
      }
    } catch (const Error& e) {
      o = {{"input_sql", sql}, {"error", error_json(e.kind(), e.what())}};
      rc = kExitRecordErrors;
    }
    out << o.dump() << '\n';
    ++index;
  }
  return rc;
}

int cmd_validate_fixture(const std::vector<std::filesystem::path>& paths, std::ostream& out) {
  int rc = kExitOk;
  for (const auto& p : paths) {
    const auto manifest = std::filesystem::is_directory(p) ? p / "manifest.json" : p;
    ojson o;
    o["path"] = manifest.string();
    try {
      const exec::DatabaseFixture f = exec::DatabaseFixture::load(manifest);
      o["name"] = f.name();
      o["fixture_id"] = f.fixture_id();
      ojson tables = ojson::array();
      for (const exec::TableDef& t : f.schema()) tables.push_back({{"name", t.name}, {"rows", f.row_count(t.name)}});
      o["tables"] = tables;
      o["total_rows"] = f.total_rows();
      o["valid"] = true;
    } catch (const Error& e) {
      o["valid"] = false;
      o["error"] = error_json(e.kind(), e.what());
      rc = kExitRecordErrors;
    }
    out << o.dump() << '\n';
  }
  return rc;
}

}  // namespace sqlreward::service

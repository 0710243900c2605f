#include "sqlreward/service/scorer.h"

#include <chrono>
#include <nlohmann/json.hpp>

#include "sqlreward/error.h"

namespace sqlreward::service {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

json parse_object(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("record is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("record must be a JSON object");
  return j;
}

std::string required_string(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  if (!j[key].is_string()) throw InvalidArgument(std::string("field '") + key + "' must be a string");
  return j[key].get<std::string>();
}

reward::TaskSample sample_from(const json& j) {
  reward::TaskSample s;
  s.question = j.contains("question") ? required_string(j, "question") : "";
  s.model_output = required_string(j, "model_output");
  s.gold_target = required_string(j, "gold_target");
  const std::string category = required_string(j, "category");
  const auto c = reward::category_from_string(category);
  if (!c) throw InvalidArgument("unknown category '" + category + "'");
  s.category = *c;
  s.fixture_ref = required_string(j, "fixture_ref");
  if (j.contains("token_count") && !j["token_count"].is_null()) {
    if (!j["token_count"].is_number_unsigned()) throw InvalidArgument("token_count must be an integer >= 0");
    s.token_count = j["token_count"].get<std::size_t>();
  }
  return s;
}

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

ojson breakdown_json(const reward::RewardBreakdown& b) {
  ojson j;
  j["r_fmt"] = b.r_fmt;
  j["r_gram"] = b.r_gram;
  j["r_len"] = b.r_len;
  j["r_acc"] = b.r_acc;
  j["acc_branch"] = reward::to_string(b.acc_branch);
  j["s_ast"] = optional_number(b.s_ast);
  j["s_dense"] = optional_number(b.s_dense);
  j["s_schema"] = optional_number(b.s_schema);
  j["s_rows"] = optional_number(b.s_rows);
  j["s_values"] = optional_number(b.s_values);
  j["total"] = b.total;
  return j;
}

int status_for(const Error& e) {
  const std::string& k = e.kind();
  if (k == "InvalidArgument" || k == "FormatError") return 400;
  if (k == "UnknownFixture") return 404;
  if (k == "EmbedderFailure" || k == "DimensionMismatch") return 502;
  return 500;
}

}  // namespace

reward::TaskSample parse_sample(std::string_view record_json) { return sample_from(parse_object(record_json)); }

Scorer::Scorer(ServiceConfig config, FixtureRegistry fixtures,
               std::shared_ptr<const semantic::EmbeddingProvider> embedder)
    : config_(std::move(config)), fixtures_(std::move(fixtures)), embedder_(std::move(embedder)) {
  config_.validate();
  if (!embedder_) throw InvalidArgument("scorer needs an embedding provider");
}

ScoreResponse Scorer::score(const reward::TaskSample& sample, std::string_view overrides_json) const {
  const auto start = std::chrono::steady_clock::now();
  const exec::DatabaseFixture& fixture = fixtures_.resolve(sample.fixture_ref);
  const reward::RewardConfig cfg =
      overrides_json.empty() ? config_.reward : apply_reward_overrides(config_.reward, overrides_json);
  ScoreResponse out;
  reward::ScoreOptions options;
  options.limits = config_.limits;
  options.diagnostics = &out.diagnostics;
  out.breakdown = reward::score(sample, cfg, fixture, *embedder_, options);
  out.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RecordResult Scorer::score_record(std::string_view record_json, bool with_timing) const {
  ojson out;
  RecordResult result;
  json record;
  try {
    record = parse_object(record_json);
    if (record.contains("id")) out["id"] = record["id"];
    const reward::TaskSample sample = sample_from(record);
    std::string overrides;
    if (record.contains("config_overrides") && !record["config_overrides"].is_null()) {
      overrides = record["config_overrides"].dump();
    }
    const ScoreResponse r = score(sample, overrides);
    out["breakdown"] = breakdown_json(r.breakdown);
    out["diagnostics"] = r.diagnostics;
    if (with_timing) out["timing_ms"] = r.timing_ms;
  } catch (const Error& e) {
    result.http_status = status_for(e);
    out["error"] = {{"kind", e.kind()}, {"message", e.what()}};
  } catch (const std::exception& e) {
    result.http_status = 500;
    out["error"] = {{"kind", "InternalError"}, {"message", e.what()}};
  }
  result.body = out.dump();
  return result;
}

std::string Scorer::health_json() const {
  ojson j;
  j["status"] = "ok";
  ojson list = ojson::array();
  for (const exec::DatabaseFixture* f : fixtures_.all()) {
    list.push_back({{"name", f->name()},
                    {"fixture_id", f->fixture_id()},
                    {"tables", f->schema().size()},
                    {"rows", f->total_rows()}});
  }
  j["fixtures"] = list;
  j["config_sha256"] = config_.sha256;
  j["embedder"] = embedder_->name();
  return j.dump();
}

}  // namespace sqlreward::service

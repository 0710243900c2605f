#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sqlreward/reward/reward.h"
#include "sqlreward/service/config.h"
#include "sqlreward/service/registry.h"

namespace sqlreward::service {

struct ScoreResponse {
  reward::RewardBreakdown breakdown;
  std::vector<std::string> diagnostics;
  double timing_ms = 0.0;
};

// A scored record rendered for the wire, with the HTTP status it maps to:
// 200, 400 malformed record, 404 unknown fixture, 500 internal or data
// failure, 502 embedder failure.
struct RecordResult {
  std::string body;  // one JSON object, no trailing newline
  int http_status = 200;
  bool ok() const { return http_status == 200; }
};

// The single scoring path shared by the batch command and the server.
// Immutable after construction; safe to use from many threads when the
// embedder is.
class Scorer {
 public:
  Scorer(ServiceConfig config, FixtureRegistry fixtures, std::shared_ptr<const semantic::EmbeddingProvider> embedder);

  // Throws UnknownFixture, GoldExecutionFailed, EmbedderFailure,
  // InvalidArgument (bad overrides).
  ScoreResponse score(const reward::TaskSample& sample, std::string_view overrides_json = {}) const;

  // Record: {"id"?, "question", "model_output", "gold_target", "category",
  // "fixture_ref", "token_count"?, "config_overrides"?}. Response:
  // {"id"?, "breakdown", "diagnostics", "timing_ms"?} or {"id"?, "error"}.
  // timing_ms is emitted only when `with_timing` is set.
  RecordResult score_record(std::string_view record_json, bool with_timing) const;

  // {"status", "fixtures": [{"name", "fixture_id", "tables", "rows"}],
  //  "config_sha256", "embedder"}
  std::string health_json() const;

  const ServiceConfig& config() const { return config_; }
  const FixtureRegistry& fixtures() const { return fixtures_; }
  const semantic::EmbeddingProvider& embedder() const { return *embedder_; }

 private:
  ServiceConfig config_;
  FixtureRegistry fixtures_;
  std::shared_ptr<const semantic::EmbeddingProvider> embedder_;
};

// Parses a record into a TaskSample. Throws InvalidArgument naming the bad
// field.
reward::TaskSample parse_sample(std::string_view record_json);

}  // namespace sqlreward::service

#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "sqlreward/exec/engine.h"
#include "sqlreward/grpo/grpo.h"
#include "sqlreward/reward/reward.h"
#include "sqlreward/semantic/embedding.h"

namespace sqlreward::service {

struct EmbedderSpec {
  std::string kind = "hashed";  // "hashed" or "remote"
  std::size_t dimension = 256;
  std::string url;  // remote only; empty means the client default
  std::chrono::milliseconds timeout{10000};
};

// Everything a scoring process needs besides its fixtures.
struct ServiceConfig {
  reward::RewardConfig reward;
  grpo::GrpoParams grpo;
  exec::ResourceLimits limits;
  EmbedderSpec embedder;
  std::size_t workers = 4;
  // SHA-256 of the text the config was parsed from.
  std::string sha256;

  void validate() const;
};

// JSON layout (every section and key optional, unknown keys rejected):
//   {"version": 1,
//    "reward": {"lambda_acc", "lambda_fmt", "lambda_gram", "lambda_len", "alpha_struct",
//               "l_max", "l_cache", "nl_thresholds": {"hi", "lo", "mid_scale"},
//               "dense_weights": {"schema", "rows", "values"}},
//    "grpo": {"epsilon", "beta", "sigma_floor"},
//    "limits": {"max_rows", "timeout_ms"},
//    "embedder": {"kind", "dimension", "url", "timeout_ms"},
//    "service": {"workers"}}
// Throws InvalidArgument.
ServiceConfig parse_config(std::string_view json_text);
// Throws IoError or InvalidArgument.
ServiceConfig load_config(const std::filesystem::path& path);

// The built-in defaults as a config file.
std::string default_config_json();

// Applies a partial "reward" object to `cfg`. Throws InvalidArgument.
reward::RewardConfig apply_reward_overrides(const reward::RewardConfig& cfg, std::string_view json_object);

std::shared_ptr<const semantic::EmbeddingProvider> make_embedder(const EmbedderSpec& spec);

}  // namespace sqlreward::service

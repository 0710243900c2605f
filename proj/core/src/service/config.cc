#include "sqlreward/service/config.h"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "sqlreward/error.h"
#include "sqlreward/semantic/remote.h"
#include "util/sha256.h"

namespace sqlreward::service {

using nlohmann::json;

namespace {

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) throw InvalidArgument(where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw InvalidArgument("unknown key '" + k + "' in " + where);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void read_reward(const json& r, reward::RewardConfig& cfg) {
  only_keys(r, {"lambda_acc", "lambda_fmt", "lambda_gram", "lambda_len", "alpha_struct", "l_max", "l_cache",
                "nl_thresholds", "dense_weights"},
            "reward");
  read(r, "lambda_acc", cfg.lambda_acc);
  read(r, "lambda_fmt", cfg.lambda_fmt);
  read(r, "lambda_gram", cfg.lambda_gram);
  read(r, "lambda_len", cfg.lambda_len);
  read(r, "alpha_struct", cfg.alpha_struct);
  read(r, "l_max", cfg.l_max);
  read(r, "l_cache", cfg.l_cache);
  if (r.contains("nl_thresholds")) {
    const json& t = r["nl_thresholds"];
    only_keys(t, {"hi", "lo", "mid_scale"}, "reward.nl_thresholds");
    read(t, "hi", cfg.nl_thresholds.hi);
    read(t, "lo", cfg.nl_thresholds.lo);
    read(t, "mid_scale", cfg.nl_thresholds.mid_scale);
  }
  if (r.contains("dense_weights")) {
    const json& w = r["dense_weights"];
    only_keys(w, {"schema", "rows", "values"}, "reward.dense_weights");
    read(w, "schema", cfg.dense_weights.schema);
    read(w, "rows", cfg.dense_weights.rows);
    read(w, "values", cfg.dense_weights.values);
  }
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

void ServiceConfig::validate() const {
  reward.validate();
  grpo.validate();
  if (limits.max_rows == 0 || limits.timeout.count() <= 0) throw InvalidArgument("limits must be positive");
  if (embedder.kind != "hashed" && embedder.kind != "remote") {
    throw InvalidArgument("embedder.kind must be 'hashed' or 'remote'");
  }
  if (embedder.dimension == 0) throw InvalidArgument("embedder.dimension must be positive");
  if (workers == 0) throw InvalidArgument("service.workers must be positive");
}

ServiceConfig parse_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  ServiceConfig cfg;
  try {
    only_keys(j, {"version", "reward", "grpo", "limits", "embedder", "service"}, "config");
    if (j.value("version", 1) != 1) throw InvalidArgument("unsupported config version");
    if (j.contains("reward")) read_reward(j["reward"], cfg.reward);
    if (j.contains("grpo")) {
      const json& g = j["grpo"];
      only_keys(g, {"epsilon", "beta", "sigma_floor"}, "grpo");
      read(g, "epsilon", cfg.grpo.epsilon);
      read(g, "beta", cfg.grpo.beta);
      read(g, "sigma_floor", cfg.grpo.sigma_floor);
    }
    if (j.contains("limits")) {
      const json& l = j["limits"];
      only_keys(l, {"max_rows", "timeout_ms"}, "limits");
      read(l, "max_rows", cfg.limits.max_rows);
      if (l.contains("timeout_ms")) cfg.limits.timeout = std::chrono::milliseconds(l["timeout_ms"].get<long>());
    }
    if (j.contains("embedder")) {
      const json& e = j["embedder"];
      only_keys(e, {"kind", "dimension", "url", "timeout_ms"}, "embedder");
      read(e, "kind", cfg.embedder.kind);
      read(e, "dimension", cfg.embedder.dimension);
      read(e, "url", cfg.embedder.url);
      if (e.contains("timeout_ms")) cfg.embedder.timeout = std::chrono::milliseconds(e["timeout_ms"].get<long>());
    }
    if (j.contains("service")) {
      const json& s = j["service"];
      only_keys(s, {"workers"}, "service");
      read(s, "workers", cfg.workers);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  cfg.validate();
  cfg.sha256 = util::sha256_hex(json_text);
  return cfg;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string default_config_json() {
  const ServiceConfig d;
  const reward::RewardConfig& r = d.reward;
  json j = {
      {"version", 1},
      {"reward",
       {{"lambda_acc", r.lambda_acc},
        {"lambda_fmt", r.lambda_fmt},
        {"lambda_gram", r.lambda_gram},
        {"lambda_len", r.lambda_len},
        {"alpha_struct", r.alpha_struct},
        {"l_max", r.l_max},
        {"l_cache", r.l_cache},
        {"nl_thresholds", {{"hi", r.nl_thresholds.hi}, {"lo", r.nl_thresholds.lo}, {"mid_scale", r.nl_thresholds.mid_scale}}},
        {"dense_weights",
         {{"schema", r.dense_weights.schema}, {"rows", r.dense_weights.rows}, {"values", r.dense_weights.values}}}}},
      {"grpo", {{"epsilon", d.grpo.epsilon}, {"beta", d.grpo.beta}, {"sigma_floor", d.grpo.sigma_floor}}},
      {"limits", {{"max_rows", d.limits.max_rows}, {"timeout_ms", d.limits.timeout.count()}}},
      {"embedder", {{"kind", d.embedder.kind}, {"dimension", d.embedder.dimension}}},
      {"service", {{"workers", d.workers}}},
  };
  return j.dump(2) + "\n";
}

reward::RewardConfig apply_reward_overrides(const reward::RewardConfig& cfg, std::string_view json_object) {
  reward::RewardConfig out = cfg;
  try {
    read_reward(parse_json(json_object), out);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config_overrides: ") + e.what());
  }
  out.validate();
  return out;
}

std::shared_ptr<const semantic::EmbeddingProvider> make_embedder(const EmbedderSpec& spec) {
  if (spec.kind == "hashed") return std::make_shared<semantic::HashedBagEmbedder>(spec.dimension);
  semantic::RemoteEmbedderConfig rc;
  if (!spec.url.empty()) rc.url = spec.url;
  rc.dimension = spec.dimension;
  rc.timeout = spec.timeout;
  return std::make_shared<semantic::RemoteEmbedder>(rc);
}

}  // namespace sqlreward::service

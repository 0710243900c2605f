#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>

#include "sqlreward/semantic/embedding.h"

namespace sqlreward::semantic {

struct RemoteEmbedderConfig {
  // http://host:port/path. SQLREWARD_EMBEDDER_URL overrides it when set.
  std::string url = "http://127.0.0.1:8081/embed";
  std::size_t dimension = 1024;
  std::chrono::milliseconds timeout{10000};
};

// Client for an embedding service: POST {"texts": [...]} answered by
// {"vectors": [[...], ...]}. Calls are serialized over one connection.
class RemoteEmbedder : public EmbeddingProvider {
 public:
  explicit RemoteEmbedder(RemoteEmbedderConfig config);
  ~RemoteEmbedder() override;

  std::string name() const override { return "remote:" + url_; }
  std::size_t dimension() const override { return config_.dimension; }
  bool deterministic() const override { return true; }
  bool concurrent_safe() const override { return true; }
  std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const override;

  const std::string& url() const { return url_; }

 private:
  struct Client;
  RemoteEmbedderConfig config_;
  std::string url_;
  std::unique_ptr<Client> client_;
  mutable std::mutex mu_;
};

}  // namespace sqlreward::semantic

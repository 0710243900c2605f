#include "sqlreward/semantic/remote.h"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "sqlreward/error.h"

namespace sqlreward::semantic {

struct RemoteEmbedder::Client {
  std::unique_ptr<httplib::Client> http;
  std::string path;
};

namespace {

// Splits "http://host:port/path" into the scheme+authority and the path.
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw InvalidArgument("embedder URL needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderConfig config) : config_(std::move(config)) {
  if (const char* env = std::getenv("SQLREWARD_EMBEDDER_URL"); env != nullptr && *env != '\0') {
    url_ = env;
  } else {
    url_ = config_.url;
  }
  if (config_.dimension == 0) throw InvalidArgument("embedding dimension must be positive");
  auto [base, path] = split_url(url_);
  client_ = std::make_unique<Client>();
  client_->http = std::make_unique<httplib::Client>(base);
  client_->path = path;
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client_->http->set_connection_timeout(secs.count(), usecs.count());
  client_->http->set_read_timeout(secs.count(), usecs.count());
  client_->http->set_write_timeout(secs.count(), usecs.count());
}

RemoteEmbedder::~RemoteEmbedder() = default;

std::vector<EmbeddingVector> RemoteEmbedder::embed_batch(const std::vector<std::string>& texts) const {
  const nlohmann::json request = {{"texts", texts}};
  httplib::Result res;
  {
    std::lock_guard<std::mutex> lock(mu_);
    res = client_->http->Post(client_->path, request.dump(), "application/json");
  }
  if (!res) throw EmbedderFailure(name() + ": " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw EmbedderFailure(name() + ": HTTP " + std::to_string(res->status));
  }
  try {
    const nlohmann::json body = nlohmann::json::parse(res->body);
    std::vector<EmbeddingVector> out = body.at("vectors").get<std::vector<EmbeddingVector>>();
    if (out.size() != texts.size()) {
      throw EmbedderFailure(name() + ": expected " + std::to_string(texts.size()) + " vectors, got " +
                            std::to_string(out.size()));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw EmbedderFailure(name() + ": malformed response: " + e.what());
  }
}

}  // namespace sqlreward::semantic

#include "sqlreward/service/server.h"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "sqlreward/error.h"

namespace sqlreward::service {

struct ScoreServer::Impl {
  const Scorer& scorer;
  httplib::Server http;
  explicit Impl(const Scorer& s) : scorer(s) {}
};

ScoreServer::ScoreServer(const Scorer& scorer) : impl_(std::make_unique<Impl>(scorer)) {
  const std::size_t workers = scorer.config().workers;
  impl_->http.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  impl_->http.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(impl_->scorer.health_json(), "application/json");
  });
  impl_->http.Post("/score", [this](const httplib::Request& req, httplib::Response& res) {
    const RecordResult r = impl_->scorer.score_record(req.body, false);
    res.status = r.http_status;
    res.set_content(r.body, "application/json");
  });
  impl_->http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    res.status = 500;
    const nlohmann::json body = {{"error", {{"kind", "InternalError"}, {"message", message}}}};
    res.set_content(body.dump(), "application/json");
  });
}

ScoreServer::~ScoreServer() { stop(); }

int ScoreServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host);
    return bound;
  }
  if (!impl_->http.bind_to_port(host, port)) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ScoreServer::run() { impl_->http.listen_after_bind(); }

void ScoreServer::stop() {
  if (impl_) impl_->http.stop();
}

bool ScoreServer::running() const { return impl_->http.is_running(); }

}  // namespace sqlreward::service

#pragma once

#include <memory>
#include <string>

#include "sqlreward/service/scorer.h"

namespace sqlreward::service {

// HTTP front end over a Scorer.
//   GET  /health  -> Scorer::health_json()
//   POST /score   -> body is one record; reply is the same JSON object
//                    cmd_score would print, with the record's HTTP status
// Requests run on a pool of config().workers threads.
class ScoreServer {
 public:
  explicit ScoreServer(const Scorer& scorer);
  ~ScoreServer();
  ScoreServer(const ScoreServer&) = delete;
  ScoreServer& operator=(const ScoreServer&) = delete;

  // Binds without serving yet; port 0 picks a free port. Returns the bound
  // port. Throws IoError.
  int bind(const std::string& host, int port);
  // Serves until stop(). Blocks.
  void run();
  // Stops accepting; requests already being handled finish first.
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sqlreward::service

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sqlreward::mutate {

// Source of candidate SQL for a question, typically a model behind an API.
class QueryGenerator {
 public:
  virtual ~QueryGenerator() = default;
  virtual std::string generate(const std::string& question) = 0;
};

// Free-text counterpart (question paraphrases, reasoning traces).
class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::string generate(const std::string& prompt) = 0;
};

// Replays a fixed script of answers in order, wrapping around. Throws
// GeneratorFailure for entries equal to `failure_marker` when one is set.
class ScriptedGenerator : public QueryGenerator, public TextGenerator {
 public:
  explicit ScriptedGenerator(std::vector<std::string> script, std::string failure_marker = {});
  std::string generate(const std::string& input) override;
  std::size_t calls() const { return calls_; }

 private:
  std::vector<std::string> script_;
  std::string failure_marker_;
  std::size_t calls_ = 0;
};

struct ConsistencyResult {
  bool accepted = false;
  // Accepted: the lexicographically smallest sample, so the choice does not
  // depend on sample order.
  std::string sql;
  std::vector<std::string> samples;
  std::string reason;  // why a set was rejected
};

// Calls `generator` n times, sequentially. Accepts only when every sample
// parses and all are ast_equal. A generator error rejects with the samples
// gathered so far. Throws InvalidArgument for n < 2.
ConsistencyResult consistency_verify(QueryGenerator& generator, const std::string& question, std::size_t n = 3);

// The same decision over samples already in hand.
ConsistencyResult consistency_check(const std::vector<std::string>& samples);

}  // namespace sqlreward::mutate

#include "sqlreward/mutate/consistency.h"

#include <algorithm>

#include "sqlreward/error.h"
#include "sqlreward/sql/flatten.h"

namespace sqlreward::mutate {

ScriptedGenerator::ScriptedGenerator(std::vector<std::string> script, std::string failure_marker)
    : script_(std::move(script)), failure_marker_(std::move(failure_marker)) {
  if (script_.empty()) throw InvalidArgument("scripted generator needs at least one answer");
}

std::string ScriptedGenerator::generate(const std::string&) {
  const std::string& next = script_[calls_++ % script_.size()];
  if (!failure_marker_.empty() && next == failure_marker_) throw GeneratorFailure("scripted failure");
  return next;
}

ConsistencyResult consistency_check(const std::vector<std::string>& samples) {
  if (samples.size() < 2) throw InvalidArgument("consistency needs at least 2 samples");
  ConsistencyResult out;
  out.samples = samples;
  std::vector<sql::SqlComponentSet> sets;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto parsed = sql::try_parse(samples[i]);
    if (!parsed) {
      out.reason = "sample " + std::to_string(i) + " does not parse";
      return out;
    }
    sets.push_back(sql::flatten(*parsed));
  }
  for (std::size_t i = 1; i < sets.size(); ++i) {
    if (sets[i].components != sets[0].components) {
      out.reason = "sample " + std::to_string(i) + " differs from sample 0";
      return out;
    }
  }
  out.accepted = true;
  out.sql = *std::min_element(samples.begin(), samples.end());
  return out;
}

ConsistencyResult consistency_verify(QueryGenerator& generator, const std::string& question, std::size_t n) {
  if (n < 2) throw InvalidArgument("consistency needs at least 2 samples");
  std::vector<std::string> samples;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      samples.push_back(generator.generate(question));
    } catch (const std::exception& e) {
      ConsistencyResult out;
      out.samples = std::move(samples);
      out.reason = std::string("generator failed on call ") + std::to_string(i) + ": " + e.what();
      return out;
    }
  }
  return consistency_check(samples);
}

}  // namespace sqlreward::mutate

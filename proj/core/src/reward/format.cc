#include "sqlreward/reward/format.h"

#include <cctype>

#include "sqlreward/error.h"
#include "sqlreward/semantic/embedding.h"
#include "sqlreward/sql/parser.h"

namespace sqlreward::reward {
namespace {

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";

bool has(std::string_view s, std::string_view needle) { return s.find(needle) != std::string_view::npos; }

// Whitespace in the sense of the regex class \s.
bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// The answer body when the output is well formed.
std::optional<std::string_view> answer_body(std::string_view output) {
  std::string_view s = trim_ws(output);
  if (s.substr(0, kThinkOpen.size()) != kThinkOpen) return std::nullopt;
  s.remove_prefix(kThinkOpen.size());
  const auto close = s.find(kThinkClose);
  if (close == std::string_view::npos) return std::nullopt;
  const std::string_view think = s.substr(0, close);
  if (has(think, kThinkOpen) || has(think, kAnswerOpen) || has(think, kAnswerClose)) return std::nullopt;
  s.remove_prefix(close + kThinkClose.size());
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  if (s.substr(0, kAnswerOpen.size()) != kAnswerOpen) return std::nullopt;
  s.remove_prefix(kAnswerOpen.size());
  if (s.size() < kAnswerClose.size() || s.substr(s.size() - kAnswerClose.size()) != kAnswerClose) {
    return std::nullopt;
  }
  const std::string_view body = s.substr(0, s.size() - kAnswerClose.size());
  if (has(body, kAnswerClose) || has(body, kAnswerOpen) || has(body, kThinkOpen) || has(body, kThinkClose)) {
    return std::nullopt;
  }
  return body;
}

}  // namespace

int r_fmt(std::string_view output) { return answer_body(output) ? 1 : 0; }

std::string extract_answer(std::string_view output) {
  auto body = answer_body(output);
  if (!body) throw FormatError("output is not <think>...</think><answer>...</answer>");
  return std::string(trim_ws(*body));
}

std::string best_effort_answer(std::string_view output) {
  auto body = answer_body(output);
  return std::string(trim_ws(body ? *body : output));
}

Modality classify_modality(std::string_view answer) {
  if (semantic::trim(answer).empty()) return Modality::kNl;
  return sql::try_parse(answer) ? Modality::kSql : Modality::kNl;
}

std::size_t default_token_count(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '_' || c >= 0x80) {
      if (!in_word) ++count;
      in_word = true;
    } else {
      in_word = false;
      if (!std::isspace(c)) ++count;
    }
  }
  return count;
}

}  // namespace sqlreward::reward

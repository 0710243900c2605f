#pragma once

#include <string>
#include <string_view>

#include "sqlreward/reward/task.h"

namespace sqlreward::reward {

// 1 iff the trimmed output is exactly "<think>...</think>", optional
// whitespace, "<answer>...</answer>". Each tag occurs once; the think block
// ends at the first "</think>".
int r_fmt(std::string_view output);

// Trimmed text inside <answer>. Throws FormatError when r_fmt(output) is 0.
std::string extract_answer(std::string_view output);

// extract_answer() when the format holds, the trimmed raw output otherwise.
std::string best_effort_answer(std::string_view output);

// kSql iff the text parses as a supported SQL statement. Blank text is kNl.
Modality classify_modality(std::string_view answer);

// Word runs plus standalone punctuation characters.
std::size_t default_token_count(std::string_view text);

}  // namespace sqlreward::reward

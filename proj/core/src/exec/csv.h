#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sqlreward::exec::csv {

// One parsed field. An empty unquoted field is null; "" is the empty string.
using Field = std::optional<std::string>;
using Record = std::vector<Field>;

// Parses comma-separated text with RFC 4180 quoting. Accepts LF or CRLF line
// ends; blank lines are skipped. Throws InvalidArgument on an unterminated
// quote, with the 1-based line number.
std::vector<Record> parse(std::string_view text);

std::string escape(const Field& field);

}  // namespace sqlreward::exec::csv

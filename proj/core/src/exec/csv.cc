#include "exec/csv.h"

#include "sqlreward/error.h"

namespace sqlreward::exec::csv {

std::vector<Record> parse(std::string_view text) {
  std::vector<Record> records;
  Record record;
  std::string field;
  bool quoted = false;      // current field was quoted
  bool in_quotes = false;   // inside an open quote
  bool field_started = false;
  int line = 1;
  int quote_line = 0;

  auto end_field = [&] {
    if (quoted || !field.empty()) {
      record.emplace_back(std::move(field));
    } else {
      record.emplace_back(std::nullopt);
    }
    field.clear();
    quoted = false;
    field_started = false;
  };
  auto end_record = [&] {
    const bool blank = record.empty() && !field_started && field.empty() && !quoted;
    if (!blank) {
      end_field();
      records.push_back(std::move(record));
    }
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !quoted && !field.empty()) {
          field.push_back(c);  // stray quote inside an unquoted field
        } else {
          in_quotes = true;
          quoted = true;
          field_started = true;
          quote_line = line;
        }
        break;
      case ',':
        field_started = true;
        end_field();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        field.push_back(c);
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
        break;
    }
  }
  if (in_quotes) {
    throw InvalidArgument("unterminated quoted field starting on line " + std::to_string(quote_line));
  }
  end_record();
  return records;
}

std::string escape(const Field& field) {
  if (!field) return {};
  const std::string& s = *field;
  if (!s.empty() && s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace sqlreward::exec::csv

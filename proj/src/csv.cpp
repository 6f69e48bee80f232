// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "csv.hpp"

#include <istream>

#include "softspace/error.hpp"

namespace softspace::csv {

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::optional<std::vector<std::string>> read_record(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;

  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  std::size_t pos = 0;
  for (;;) {
    if (pos == line.size()) {
      if (!quoted) break;
      // quoted field continues on the next physical line
      std::string next;
      if (!std::getline(in, next)) throw Error(ErrorCode::InvalidMatrix, "unterminated quoted CSV field");
      field += '\n';
      line = std::move(next);
      pos = 0;
      continue;
    }
    char c = line[pos++];
    if (quoted) {
      if (c == '"') {
        if (pos < line.size() && line[pos] == '"') {
          field += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' && pos == line.size()) {
      // CRLF
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace softspace::csv

// Copyright 2026 The fairloan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairloan/csv.h"


#include "absl/status/status.h"
#include "text.h"

namespace fairloan::csv {

absl::StatusOr<bool> Reader::Next(Record& record) {
  record.clear();
  record_line_ = line_;
  if (in_.peek() == std::char_traits<char>::eof()) return false;

  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  int c;
  while ((c = in_.get()) != std::char_traits<char>::eof()) {
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (ch == '\r' && in_.peek() == '\n') {
      // CR of a CRLF pair; the LF ends the record.
    } else if (ch == '\n') {
      ++line_;
      record.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError(text::StrCat(
        "unterminated quoted field in record starting at line ",
        record_line_));
  }
  record.push_back(std::move(field));
  return true;
}

std::string EscapeField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void WriteRecord(std::ostream& out, const Record& record) {
  for (size_t i = 0; i < record.size(); ++i) {
    if (i > 0) out << ',';
    out << EscapeField(record[i]);
  }
  out << '\n';
}

}  // namespace fairloan::csv

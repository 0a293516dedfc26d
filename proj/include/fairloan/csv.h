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

#ifndef FAIRLOAN_CSV_H_
#define FAIRLOAN_CSV_H_

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace fairloan::csv {

using Record = std::vector<std::string>;

// Reads RFC-4180 records: comma separated, double-quote escaping, quoted
// fields may contain commas, quotes ("") and line breaks. Accepts both CRLF
// and LF line endings. A trailing empty line is not a record.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns false at end of input. Fails on an unterminated quoted field.
  absl::StatusOr<bool> Next(Record& record);

  // 1-based physical line where the most recent record started.
  size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  size_t line_ = 1;
  size_t record_line_ = 0;
};

// Quotes a field only when it needs it.
std::string EscapeField(std::string_view field);

void WriteRecord(std::ostream& out, const Record& record);

}  // namespace fairloan::csv

#endif  // FAIRLOAN_CSV_H_

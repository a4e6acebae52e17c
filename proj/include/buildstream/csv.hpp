// Copyright 2026, The buildstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BUILDSTREAM_CSV_HPP_
#define BUILDSTREAM_CSV_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace buildstream::csv {

// Minimal RFC 4180 reader: comma separated, `"` quoting with `""` escapes,
// quoted fields may span lines, CRLF or LF record endings.
class Reader {
 public:
  explicit Reader(std::istream& in);

  // Reads the next record into `fields`. Returns false at end of input.
  // Blank lines are skipped. Throws DataError on an unterminated quote.
  bool next(std::vector<std::string>& fields);

  // 1-based number of the record most recently returned.
  std::size_t record_number() const noexcept { return record_; }

 private:
  std::istream& in_;
  std::size_t record_ = 0;
  bool first_ = true;
};

// Quotes the field if it contains a comma, quote or line break.
std::string escape(std::string_view field);

void write_record(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace buildstream::csv

#endif  // BUILDSTREAM_CSV_HPP_

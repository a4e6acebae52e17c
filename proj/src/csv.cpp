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

#include "buildstream/csv.hpp"

#include <istream>
#include <ostream>

#include "buildstream/errors.hpp"

namespace buildstream::csv {

Reader::Reader(std::istream& in) : in_(in) {}

bool Reader::next(std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;  // saw at least one character of this record
  bool was_quoted = false;

  auto finish_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
    was_quoted = false;
  };

  int c;
  while ((c = in_.get()) != std::char_traits<char>::eof()) {
    if (first_) {
      first_ = false;
      // UTF-8 byte order mark
      if (c == 0xEF && in_.peek() == 0xBB) {
        in_.get();
        if (in_.get() != 0xBF) throw DataError("malformed byte order mark");
        continue;
      }
    }
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
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      if (!field.empty() || was_quoted) {
        throw DataError("record " + std::to_string(record_ + 1) +
                        ": stray quote inside unquoted field");
      }
      in_quotes = true;
      was_quoted = true;
      any = true;
    } else if (ch == ',') {
      finish_field();
      any = true;
    } else if (ch == '\r' || ch == '\n') {
      if (ch == '\r' && in_.peek() == '\n') in_.get();
      if (!any && field.empty()) continue;  // blank line
      finish_field();
      ++record_;
      return true;
    } else {
      field.push_back(ch);
      any = true;
    }
  }
  if (in_quotes) {
    throw DataError("record " + std::to_string(record_ + 1) + ": unterminated quoted field");
  }
  if (!any && field.empty()) return false;
  finish_field();
  ++record_;
  return true;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_record(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace buildstream::csv

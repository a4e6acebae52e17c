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

#ifndef BUILDSTREAM_ERRORS_HPP_
#define BUILDSTREAM_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace buildstream {

// Base for problems with input data (as opposed to bad configuration,
// which is reported with std::invalid_argument).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Header does not match the schema. column() names the offending column.
class SchemaError : public DataError {
 public:
  SchemaError(std::string column, const std::string& what)
      : DataError(what), column_(std::move(column)) {}

  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

// A data row failed to decode. Rows are numbered as CSV records with the
// header being row 1, so the first data row is row 2.
class RowError : public DataError {
 public:
  RowError(std::size_t row, const std::string& what)
      : DataError("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace buildstream

#endif  // BUILDSTREAM_ERRORS_HPP_

// Copyright 2026 The rivalkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rivalkit/expr.hpp"

namespace rivalkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

// Parses one FPCore form:
//   (FPCore [name] (v1 ... vn) [:name "text"] [:pre bexpr] [:precision fmt] expr)
// Other properties are skipped. Throws ParseError.
Program parse_program(const std::string& text);

// Every FPCore form in `text`, in order.
std::vector<Program> parse_programs(const std::string& text);

std::string to_string(const Program& p);

}  // namespace rivalkit

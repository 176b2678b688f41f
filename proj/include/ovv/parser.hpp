#pragma once

#include <string>

#include "ovv/ast.hpp"
#include "ovv/result.hpp"

namespace ovv {

struct ParseError {
  std::string message;
  int line = 0;
  int col = 0;
};

Result<ExprPtr, ParseError> parse_program(const std::string& text);

/// Type syntax only, as written after `?:` in programs.
Result<CType, ParseError> parse_ctype(const std::string& text);

}  // namespace ovv

#pragma once

#include <string>

#include "ovv/ast.hpp"

namespace ovv {

/// Surface-syntax rendering; parses back to a structurally identical tree.
std::string print_expr(const ExprPtr& e);
std::string print_value(const ValuePtr& v);

/// Human-facing rendering of a final value: first-order values print
/// literally, thunks abbreviate, dbs print schema and row count unless
/// `full_rows` is set.
std::string render_result(const ValuePtr& v, bool full_rows = false);

}  // namespace ovv

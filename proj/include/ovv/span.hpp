#pragma once

namespace ovv {

// Source location range, 1-based lines/columns. A default Span (all zero)
// marks synthesized nodes with no surface origin.
struct Span {
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;
};

}  // namespace ovv

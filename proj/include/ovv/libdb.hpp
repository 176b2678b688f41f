#pragma once

#include <string>
#include <vector>

#include "ovv/machine.hpp"
#include "ovv/result.hpp"

namespace ovv {

struct CsvTable {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
};

struct CsvError {
  std::string detail;
};

/// Minimal CSV dialect: no quoting, cells split on commas and trimmed,
/// first line is the header, a trailing empty line is ignored.
Result<CsvTable, CsvError> parse_csv(const std::string& bytes);

/// Rows become dictionaries keyed by header strings; a cell that reads as an
/// optionally signed decimal integer becomes a number, otherwise a string.
/// Each row carries its synthesized dictionary type and the db value carries
/// Db of the common row type.
ValuePtr table_to_db(const CsvTable& t);

/// Common type of a list of dictionary rows: identical key sequences give a
/// dictionary of per-column types (Num, Str, or unknown on mixed or empty
/// columns); anything else degrades to the unknown type.
VType synth_row_type(const std::vector<ValuePtr>& rows);

/// Resolves `path` under `data_root`, rejecting absolute paths and `..`
/// segments, then loads the file as a db value.
StepResult step_open_db(const Machine& m, const MachineState& s, Mode mode,
                        const ValuePtr& path);

/// Runs the predicate over each row in order, threading the store; keeps rows
/// whose predicate returns true. Fuel is shared with the caller.
StepResult step_filter_db(const Machine& m, const MachineState& s, Mode mode,
                          const ValuePtr& db, const ValuePtr& pred, Fuel& fuel);

/// Nested-loop equi-join; merged rows are the left row's entries followed by
/// the right row's.
StepResult step_join_db(const MachineState& s, Mode mode, const ValuePtr& db1,
                        const ValuePtr& key1, const ValuePtr& db2,
                        const ValuePtr& key2);

}  // namespace ovv

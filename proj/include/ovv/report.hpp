#pragma once

#include <string>
#include <vector>

#include "ovv/machine.hpp"

namespace ovv {

struct ReportOp {
  int line = 0;
  std::string op;
  Mode mode = Mode::Uncertain;
};

struct ReportStage {
  int stage = 0;
  int trigger_line = 0;
  std::vector<ReportOp> ops;
};

struct ProgressiveReport {
  std::vector<ReportStage> stages;

  std::string serialize() const;
};

/// Collects every database operation and projection reachable through the
/// expression spine of the state: the focus first, then stack frames from top
/// to bottom. Thunk bodies are not scanned.
std::vector<ReportOp> scan_state_ops(const MachineState& s);

}  // namespace ovv

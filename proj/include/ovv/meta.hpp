#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "ovv/machine.hpp"
#include "ovv/result.hpp"

namespace ovv {

struct ProgressiveReport;

// `trigger` is the span of the rcc node, used for report records.
struct MetaProgram {
  std::string name;
  std::function<Result<MachineState, std::string>(const MachineState&,
                                                  Span trigger)>
      apply;
};

struct MetaRegistry {
  std::map<std::string, MetaProgram> programs;

  /// Fails on duplicate names.
  bool add(MetaProgram p);
  const MetaProgram* find(const std::string& name) const;
};

Result<MachineState, std::string> invoke(const MetaRegistry& reg,
                                         const std::string& name,
                                         const MachineState& s, Span trigger);

MetaProgram make_id_meta();

/// Runs the state checker and appends one stage to `sink` per invocation.
MetaProgram make_chk_state_meta(std::shared_ptr<ProgressiveReport> sink);

/// Registry with "id" and "chk_state" preinstalled.
MetaRegistry default_registry(std::shared_ptr<ProgressiveReport> sink);

}  // namespace ovv

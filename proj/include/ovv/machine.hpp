#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ovv/ast.hpp"
#include "ovv/result.hpp"

namespace ovv {

struct Store {
  std::map<std::int64_t, ValuePtr> cells;
  std::int64_t next = 0;

  const ValuePtr* lookup(std::int64_t l) const;
  std::int64_t alloc(ValuePtr v);
};

struct FrLet {
  Env env;
  std::string var;
  ExprPtr body;
};
struct FrApp {
  ValuePtr arg;
};
using Frame = std::variant<FrLet, FrApp>;

// Frames grow toward the back; back() is the top, an empty vector is halt.
struct Stack {
  std::vector<Frame> frames;
};

struct MachineState {
  Store store;
  Stack stack;
  Env env;
  PreExpr focus;
  Span focus_src;
};

struct StuckReason {
  enum class Kind {
    UncertainOp,
    UndischargedAscription,
    DynamicTypeError,
    UnboundVariable,
    MissingField,
    DanglingLocation,
    IoError,
    MetaFailure,
    Incomparable,
  };
  Kind kind = Kind::DynamicTypeError;
  std::string detail;
};

const char* stuck_kind_name(StuckReason::Kind k);

struct Fuel {
  std::int64_t remaining = 0;
  bool spend() {
    if (remaining <= 0) return false;
    --remaining;
    return true;
  }
};

struct Stepped {
  MachineState state;
  const char* rule;
};
struct Final {
  MachineState state;
};
struct Stuck {
  StuckReason reason;
  Span src;
};
struct NoFuel {
  MachineState state;
};
using StepResult = std::variant<Stepped, Final, Stuck, NoFuel>;

struct RunFinal {
  MachineState state;
  std::int64_t steps = 0;
};
struct RunStuck {
  StuckReason reason;
  Span src;
  std::int64_t steps = 0;
};
struct RunOutOfFuel {
  MachineState state;
  std::int64_t steps = 0;
};
using RunResult = std::variant<RunFinal, RunStuck, RunOutOfFuel>;

/// Closing relation: resolve variables through env, close open thunks over
/// env, recurse into dictionaries; everything else passes through. A variable
/// resolves to the bound value with that value's own annotation.
Result<ValuePtr, StuckReason> close(const Env& env, const ValuePtr& v);

bool is_final(const MachineState& s);

struct TraceEvent {
  std::int64_t index = 0;
  const char* rule = "";
  Span src;
  int depth = 0;
};

struct MetaRegistry;

class Machine {
 public:
  Machine(const MetaRegistry* metas, std::string data_root)
      : metas_(metas), data_root_(std::move(data_root)) {}

  void set_trace(std::function<void(const TraceEvent&)> fn) {
    trace_ = std::move(fn);
  }

  /// One rule application. Fuel is spent by libDb sub-runs only; the caller
  /// budgets top-level steps through run.
  StepResult step(const MachineState& s, Fuel& fuel) const;

  RunResult run(MachineState s, std::int64_t fuel) const;
  RunResult run_with(MachineState s, Fuel& fuel) const;

  const std::string& data_root() const { return data_root_; }
  const MetaRegistry* registry() const { return metas_; }

 private:
  const MetaRegistry* metas_;
  std::string data_root_;
  std::function<void(const TraceEvent&)> trace_;
};

MachineState initial_state(ExprPtr program);

}  // namespace ovv

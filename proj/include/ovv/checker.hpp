#pragma once

#include <string>

#include "ovv/machine.hpp"
#include "ovv/result.hpp"
#include "ovv/types.hpp"

namespace ovv {

struct Diagnostic {
  std::string rule;
  std::string message;
  Span src;

  std::string format(const std::string& file = "") const;
};

template <class T>
using Checked = Result<T, Diagnostic>;

struct SynthValue {
  VType type;
  ValuePtr value;
};
struct SynthExpr {
  CType type;
  ExprPtr expr;
};
struct SynthEnv {
  TypingCtx ctx;  // vars of the environment, locs inherited from the input
  Env env;
};

/// Synthesis and checking return the (possibly rewritten) term with
/// annotation slots filled; rewrites only upgrade operation modes and
/// discharge ascriptions, never the reverse.
Checked<SynthValue> syn_value(const TypingCtx& ctx, const ValuePtr& v);
Checked<ValuePtr> chk_value(const TypingCtx& ctx, const ValuePtr& v,
                            const VType& a);
Checked<SynthExpr> syn_exp(const TypingCtx& ctx, const ExprPtr& e);
Checked<ExprPtr> chk_exp(const TypingCtx& ctx, const ExprPtr& e,
                         const CType& c);
Checked<SynthEnv> syn_env(const TypingCtx& store_ctx, const Env& env);
Checked<Stack> chk_stack(const TypingCtx& store_ctx, const Stack& k,
                         const CType& c);

/// Types the whole state: store typing, environment typing, focus synthesis,
/// stack checking. Missing annotations on stored values are filled first so
/// a second pass sees the same store typing.
Checked<MachineState> chk_state(const MachineState& s);

}  // namespace ovv

#include "ovv/machine.hpp"

#include <sstream>

#include "ovv/libdb.hpp"
#include "ovv/meta.hpp"

namespace ovv {

const ValuePtr* Store::lookup(std::int64_t l) const {
  auto it = cells.find(l);
  return it == cells.end() ? nullptr : &it->second;
}

std::int64_t Store::alloc(ValuePtr v) {
  std::int64_t l = next++;
  cells.emplace(l, std::move(v));
  return l;
}

const char* stuck_kind_name(StuckReason::Kind k) {
  switch (k) {
    case StuckReason::Kind::UncertainOp:
      return "UncertainOp";
    case StuckReason::Kind::UndischargedAscription:
      return "UndischargedAscription";
    case StuckReason::Kind::DynamicTypeError:
      return "DynamicTypeError";
    case StuckReason::Kind::UnboundVariable:
      return "UnboundVariable";
    case StuckReason::Kind::MissingField:
      return "MissingField";
    case StuckReason::Kind::DanglingLocation:
      return "DanglingLocation";
    case StuckReason::Kind::IoError:
      return "IoError";
    case StuckReason::Kind::MetaFailure:
      return "MetaFailure";
    case StuckReason::Kind::Incomparable:
      return "Incomparable";
  }
  return "?";
}

Result<ValuePtr, StuckReason> close(const Env& env, const ValuePtr& v) {
  using R = Result<ValuePtr, StuckReason>;
  if (const auto* x = std::get_if<VarV>(&v->pre)) {
    const ValuePtr* bound = env.lookup(x->name);
    if (!bound)
      return R::error({StuckReason::Kind::UnboundVariable, x->name});
    return *bound;
  }
  if (const auto* t = std::get_if<OThunkV>(&v->pre)) {
    return mk_value(ThunkV{std::make_shared<const Env>(env), t->body},
                    v->annot, v->src);
  }
  if (const auto* d = std::get_if<DictV>(&v->pre)) {
    DictVal out;
    out.entries.reserve(d->entries->entries.size());
    for (const auto& [k, val] : d->entries->entries) {
      auto ck = close(env, k);
      if (!ck.ok()) return ck;
      auto cv = close(env, val);
      if (!cv.ok()) return cv;
      out.entries.emplace_back(ck.value(), cv.value());
    }
    return v_dict(std::move(out), v->annot, v->src);
  }
  return v;
}

bool is_final(const MachineState& s) {
  if (!s.stack.frames.empty()) return false;
  return std::holds_alternative<RetE>(s.focus) ||
         std::holds_alternative<LamE>(s.focus);
}

namespace {

StepResult stuck(StuckReason::Kind k, std::string detail, Span src) {
  return Stuck{StuckReason{k, std::move(detail)}, src};
}

struct StepVisitor {
  const Machine& m;
  const MachineState& s;
  Fuel& fuel;

  StepResult operator()(const LetE& n) {
    MachineState out = s;
    out.stack.frames.push_back(FrLet{s.env, n.var, n.body});
    out.focus = n.bound->pre;
    out.focus_src = n.bound->src;
    return Stepped{std::move(out), "let"};
  }

  StepResult operator()(const AppE& n) {
    auto arg = close(s.env, n.arg);
    if (!arg.ok()) return Stuck{arg.err(), n.arg->src};
    MachineState out = s;
    out.stack.frames.push_back(FrApp{arg.value()});
    out.focus = n.fun->pre;
    out.focus_src = n.fun->src;
    return Stepped{std::move(out), "app"};
  }

  StepResult operator()(const RetE& n) {
    if (s.stack.frames.empty()) return Final{s};
    const Frame& top = s.stack.frames.back();
    const auto* fr = std::get_if<FrLet>(&top);
    if (!fr)
      return stuck(StuckReason::Kind::DynamicTypeError,
                   "returned a value to an application frame", s.focus_src);
    auto v = close(s.env, n.val);
    if (!v.ok()) return Stuck{v.err(), n.val->src};
    MachineState out = s;
    out.stack.frames.pop_back();
    out.env = fr->env.extended(fr->var, v.value());
    out.focus = fr->body->pre;
    out.focus_src = fr->body->src;
    return Stepped{std::move(out), "ret"};
  }

  StepResult operator()(const LamE& n) {
    if (s.stack.frames.empty()) return Final{s};
    const Frame& top = s.stack.frames.back();
    const auto* fr = std::get_if<FrApp>(&top);
    if (!fr)
      return stuck(StuckReason::Kind::DynamicTypeError,
                   "function met a let frame", s.focus_src);
    MachineState out = s;
    out.stack.frames.pop_back();
    out.env = s.env.extended(n.var, fr->arg);
    out.focus = n.body->pre;
    out.focus_src = n.body->src;
    return Stepped{std::move(out), "lam"};
  }

  StepResult operator()(const ForceE& n) {
    auto v = close(s.env, n.val);
    if (!v.ok()) return Stuck{v.err(), n.val->src};
    const auto* t = std::get_if<ThunkV>(&v.value()->pre);
    if (!t)
      return stuck(StuckReason::Kind::DynamicTypeError,
                   "force of a non-thunk", n.val->src);
    MachineState out = s;
    out.env = *t->env;
    out.focus = t->body->pre;
    out.focus_src = t->body->src;
    return Stepped{std::move(out), "force"};
  }

  StepResult operator()(const RefE& n) {
    auto v = close(s.env, n.val);
    if (!v.ok()) return Stuck{v.err(), n.val->src};
    MachineState out = s;
    std::int64_t l = out.store.alloc(v.value());
    out.focus = RetE{v_loc(l, ValueAnnot{t_unknown()}, s.focus_src)};
    return Stepped{std::move(out), "ref"};
  }

  StepResult operator()(const SetE& n) {
    auto target = close(s.env, n.target);
    if (!target.ok()) return Stuck{target.err(), n.target->src};
    const auto* loc = std::get_if<LocV>(&target.value()->pre);
    if (!loc)
      return stuck(StuckReason::Kind::DynamicTypeError,
                   "set of a non-location", n.target->src);
    if (!s.store.lookup(loc->l))
      return stuck(StuckReason::Kind::DanglingLocation,
                   std::to_string(loc->l), n.target->src);
    auto v = close(s.env, n.val);
    if (!v.ok()) return Stuck{v.err(), n.val->src};
    MachineState out = s;
    out.store.cells[loc->l] = v.value();
    out.focus = RetE{mk_value(UnitV{}, ValueAnnot{t_unknown()}, s.focus_src)};
    return Stepped{std::move(out), "set"};
  }

  StepResult operator()(const GetE& n) {
    auto v = close(s.env, n.val);
    if (!v.ok()) return Stuck{v.err(), n.val->src};
    const auto* loc = std::get_if<LocV>(&v.value()->pre);
    if (!loc)
      return stuck(StuckReason::Kind::DynamicTypeError,
                   "get of a non-location", n.val->src);
    const ValuePtr* cell = s.store.lookup(loc->l);
    if (!cell)
      return stuck(StuckReason::Kind::DanglingLocation, std::to_string(loc->l),
                   n.val->src);
    MachineState out = s;
    out.focus = RetE{*cell};
    return Stepped{std::move(out), "get"};
  }

  StepResult operator()(const ExtE& n) {
    auto d = close(s.env, n.dict);
    if (!d.ok()) return Stuck{d.err(), n.dict->src};
    const auto* dv = std::get_if<DictV>(&d.value()->pre);
    if (!dv)
      return stuck(StuckReason::Kind::DynamicTypeError,
                   "ext of a non-dictionary", n.dict->src);
    auto k = close(s.env, n.key);
    if (!k.ok()) return Stuck{k.err(), n.key->src};
    if (!is_first_order_closed(k.value()))
      return stuck(StuckReason::Kind::Incomparable,
                   "dictionary key is not a first-order value", n.key->src);
    auto v = close(s.env, n.val);
    if (!v.ok()) return Stuck{v.err(), n.val->src};
    DictVal out_entries = *dv->entries;
    out_entries.entries.emplace_back(k.value(), v.value());
    MachineState out = s;
    out.focus = RetE{v_dict(std::move(out_entries), ValueAnnot{t_unknown()},
                            s.focus_src)};
    return Stepped{std::move(out), "ext"};
  }

  StepResult operator()(const ProjE& n) {
    if (n.mode == Mode::Uncertain)
      return stuck(StuckReason::Kind::UncertainOp, "uncertain projection",
                   s.focus_src);
    auto d = close(s.env, n.dict);
    if (!d.ok()) return Stuck{d.err(), n.dict->src};
    const auto* dv = std::get_if<DictV>(&d.value()->pre);
    if (!dv)
      return stuck(StuckReason::Kind::DynamicTypeError,
                   "proj of a non-dictionary", n.dict->src);
    auto k = close(s.env, n.key);
    if (!k.ok()) return Stuck{k.err(), n.key->src};
    const auto& entries = dv->entries->entries;
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
      Eq eq = value_equal(it->first, k.value());
      if (eq == Eq::Incomparable)
        return stuck(StuckReason::Kind::Incomparable,
                     "projection key not comparable", n.key->src);
      if (eq == Eq::True) {
        MachineState out = s;
        out.focus = RetE{it->second};
        return Stepped{std::move(out), "proj"};
      }
    }
    return stuck(StuckReason::Kind::MissingField, print_key(k.value()),
                 n.key->src);
  }

  StepResult operator()(const AscribeE&) {
    return stuck(StuckReason::Kind::UndischargedAscription,
                 "ascription reached at run time", s.focus_src);
  }

  StepResult operator()(const RccE& n) {
    if (!m.registry())
      return stuck(StuckReason::Kind::MetaFailure, "no meta registry",
                   s.focus_src);
    MachineState reflected = s;
    reflected.focus = n.cont->pre;
    reflected.focus_src = n.cont->src;
    auto r = invoke(*m.registry(), n.meta, reflected, s.focus_src);
    if (!r.ok())
      return stuck(StuckReason::Kind::MetaFailure, r.err(), s.focus_src);
    return Stepped{r.value(), "rcc"};
  }

  StepResult operator()(const OpenDbE& n) {
    return step_open_db(m, s, n.mode, n.path);
  }

  StepResult operator()(const FilterDbE& n) {
    return step_filter_db(m, s, n.mode, n.db, n.pred, fuel);
  }

  StepResult operator()(const JoinDbE& n) {
    return step_join_db(s, n.mode, n.db1, n.key1, n.db2, n.key2);
  }

  static std::string print_key(const ValuePtr& k) {
    if (const auto* str = std::get_if<StrV>(&k->pre)) return str->s;
    if (const auto* num = std::get_if<NumV>(&k->pre))
      return std::to_string(num->n);
    return "<key>";
  }
};

}  // namespace

StepResult Machine::step(const MachineState& s, Fuel& fuel) const {
  StepVisitor vis{*this, s, fuel};
  return std::visit(vis, s.focus);
}

RunResult Machine::run(MachineState s, std::int64_t fuel_budget) const {
  Fuel fuel{fuel_budget};
  return run_with(std::move(s), fuel);
}

RunResult Machine::run_with(MachineState s, Fuel& fuel) const {
  std::int64_t steps = 0;
  for (;;) {
    if (is_final(s)) return RunFinal{std::move(s), steps};
    if (!fuel.spend()) return RunOutOfFuel{std::move(s), steps};
    StepResult r = step(s, fuel);
    if (auto* st = std::get_if<Stepped>(&r)) {
      if (trace_) {
        trace_(TraceEvent{steps, st->rule, s.focus_src,
                          static_cast<int>(st->state.stack.frames.size())});
      }
      s = std::move(st->state);
      ++steps;
      continue;
    }
    if (auto* fin = std::get_if<Final>(&r))
      return RunFinal{std::move(fin->state), steps};
    if (auto* stk = std::get_if<Stuck>(&r))
      return RunStuck{stk->reason, stk->src, steps};
    auto& nf = std::get<NoFuel>(r);
    return RunOutOfFuel{std::move(nf.state), steps};
  }
}

MachineState initial_state(ExprPtr program) {
  MachineState s;
  s.focus = program->pre;
  s.focus_src = program->src;
  return s;
}

}  // namespace ovv

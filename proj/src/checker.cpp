#include "ovv/checker.hpp"

#include <sstream>

#include "ovv/libdb.hpp"
#include "ovv/printer.hpp"

namespace ovv {

std::string Diagnostic::format(const std::string& file) const {
  std::ostringstream os;
  os << (file.empty() ? "<input>" : file) << ":" << src.line << ":" << src.col
     << ": [" << rule << "] " << message;
  return os.str();
}

namespace {

Diagnostic diag(std::string rule, std::string message, Span src) {
  return Diagnostic{std::move(rule), std::move(message), src};
}

bool first_order_type(const VType& a) {
  switch (a->kind) {
    case ValueType::Kind::Num:
    case ValueType::Kind::Str:
    case ValueType::Kind::Bool:
    case ValueType::Kind::Unit:
    case ValueType::Kind::Ref:
    case ValueType::Kind::Dict:
      return true;
    default:
      return false;
  }
}

}  // namespace

Checked<SynthValue> syn_value(const TypingCtx& ctx, const ValuePtr& v) {
  using C = Checked<SynthValue>;
  if (const auto* x = std::get_if<VarV>(&v->pre)) {
    const VType* a = ctx.lookup_var(x->name);
    if (!a) return C::error(diag("var", "unbound variable " + x->name, v->src));
    return SynthValue{*a, with_annot(v, *a)};
  }
  if (const auto* l = std::get_if<LocV>(&v->pre)) {
    auto it = ctx.locs.find(l->l);
    if (it == ctx.locs.end())
      return C::error(
          diag("loc", "dangling location " + std::to_string(l->l), v->src));
    return SynthValue{it->second, with_annot(v, it->second)};
  }
  if (std::holds_alternative<NumV>(v->pre))
    return SynthValue{t_num(), with_annot(v, t_num())};
  if (std::holds_alternative<StrV>(v->pre))
    return SynthValue{t_str(), with_annot(v, t_str())};
  if (std::holds_alternative<BoolV>(v->pre))
    return SynthValue{t_bool(), with_annot(v, t_bool())};
  if (std::holds_alternative<UnitV>(v->pre))
    return SynthValue{t_unit(), with_annot(v, t_unit())};
  if (const auto* d = std::get_if<DictV>(&v->pre)) {
    DictType dt;
    DictVal out;
    for (const auto& [k, val] : d->entries->entries) {
      if (!is_first_order_closed(k))
        return C::error(
            diag("dict", "dictionary key is not first-order", k->src));
      auto sv = syn_value(ctx, val);
      if (!sv.ok()) return C::error(sv.err());
      dt.entries.emplace_back(k, sv.value().type);
      out.entries.emplace_back(k, sv.value().value);
    }
    VType a = t_dict(std::move(dt));
    return SynthValue{a, v_dict(std::move(out), ValueAnnot{a}, v->src)};
  }
  if (const auto* t = std::get_if<OThunkV>(&v->pre)) {
    auto se = syn_exp(ctx, t->body);
    if (!se.ok()) return C::error(se.err());
    VType a = t_thunk(se.value().type);
    return SynthValue{a, v_othunk(se.value().expr, ValueAnnot{a}, v->src)};
  }
  if (const auto* t = std::get_if<ThunkV>(&v->pre)) {
    TypingCtx store_ctx;
    store_ctx.locs = ctx.locs;
    auto env2 = syn_env(store_ctx, *t->env);
    if (!env2.ok()) return C::error(env2.err());
    auto se = syn_exp(env2.value().ctx, t->body);
    if (!se.ok()) return C::error(se.err());
    VType a = t_thunk(se.value().type);
    return SynthValue{
        a, v_thunk(env2.value().env, se.value().expr, ValueAnnot{a}, v->src)};
  }
  const auto& db = std::get<DbV>(v->pre);
  VType a = t_db(synth_row_type(db.rows));
  return SynthValue{a, with_annot(v, a)};
}

Checked<ValuePtr> chk_value(const TypingCtx& ctx, const ValuePtr& v,
                            const VType& a) {
  using C = Checked<ValuePtr>;
  // Checking-only terms (functions) can hide under thunks; push the expected
  // computation type into the body instead of synthesizing.
  if (a->kind == ValueType::Kind::Thunk) {
    if (const auto* t = std::get_if<OThunkV>(&v->pre)) {
      auto body = chk_exp(ctx, t->body, a->comp);
      if (!body.ok()) return C::error(body.err());
      return v_othunk(body.value(), ValueAnnot{a}, v->src);
    }
    if (const auto* t = std::get_if<ThunkV>(&v->pre)) {
      TypingCtx store_ctx;
      store_ctx.locs = ctx.locs;
      auto env2 = syn_env(store_ctx, *t->env);
      if (!env2.ok()) return C::error(env2.err());
      auto body = chk_exp(env2.value().ctx, t->body, a->comp);
      if (!body.ok()) return C::error(body.err());
      return v_thunk(env2.value().env, body.value(), ValueAnnot{a}, v->src);
    }
  }
  auto sv = syn_value(ctx, v);
  if (!sv.ok()) return C::error(sv.err());
  if (!consistent_v(sv.value().type, a))
    return C::error(diag("sub",
                         "value of type " + render(sv.value().type) +
                             " is not consistent with " + render(a),
                         v->src));
  return sv.value().value;
}

namespace {

using CE = Checked<SynthExpr>;

CE synth(CType c, PreExpr pre, Span src) {
  return SynthExpr{c, mk_expr(std::move(pre), ExprAnnot{c}, src)};
}

struct SynVisitor {
  const TypingCtx& ctx;
  const ExprPtr& e;

  CE operator()(const AscribeE& n) {
    CType c = *n.annot.type;
    auto body = chk_exp(ctx, n.body, c);
    if (!body.ok()) return CE::error(body.err());
    // The ascription is discharged: the node is replaced by its body.
    return SynthExpr{c, with_annot(body.value(), c)};
  }

  CE operator()(const AppE& n) {
    auto fun = syn_exp(ctx, n.fun);
    if (!fun.ok()) return fun;
    const CType& ft = fun.value().type;
    if (ft->kind != CompType::Kind::Arrow)
      return CE::error(diag("app",
                            "applied a computation of type " + render(ft),
                            n.fun->src));
    auto arg = chk_value(ctx, n.arg, ft->arg);
    if (!arg.ok()) return CE::error(arg.err());
    return synth(ft->res, AppE{fun.value().expr, arg.value()}, e->src);
  }

  CE operator()(const LamE& n) {
    if (!e->annot.type || (*e->annot.type)->kind != CompType::Kind::Arrow)
      return CE::error(diag(
          "lam", "function in synthesizing position needs an annotation",
          e->src));
    CType c = *e->annot.type;
    auto body = chk_exp(ctx.with_var(n.var, c->arg), n.body, c->res);
    if (!body.ok()) return CE::error(body.err());
    return synth(c, LamE{n.var, body.value()}, e->src);
  }

  CE operator()(const LetE& n) {
    auto bound = syn_exp(ctx, n.bound);
    if (!bound.ok()) return bound;
    const CType& bt = bound.value().type;
    if (bt->kind != CompType::Kind::F)
      return CE::error(diag("let",
                            "bound computation has type " + render(bt),
                            n.bound->src));
    auto body = syn_exp(ctx.with_var(n.var, bt->ret), n.body);
    if (!body.ok()) return body;
    return synth(body.value().type,
                 LetE{n.var, bound.value().expr, body.value().expr}, e->src);
  }

  CE operator()(const RetE& n) {
    auto v = syn_value(ctx, n.val);
    if (!v.ok()) return CE::error(v.err());
    return synth(t_f(v.value().type), RetE{v.value().value}, e->src);
  }

  CE operator()(const ForceE& n) {
    auto v = syn_value(ctx, n.val);
    if (!v.ok()) return CE::error(v.err());
    const VType& a = v.value().type;
    if (a->kind == ValueType::Kind::Thunk)
      return synth(a->comp, ForceE{v.value().value}, e->src);
    if (a->kind == ValueType::Kind::Unknown)
      return synth(t_f(t_unknown()), ForceE{v.value().value}, e->src);
    return CE::error(
        diag("force", "forced a value of type " + render(a), n.val->src));
  }

  CE operator()(const RefE& n) {
    auto v = syn_value(ctx, n.val);
    if (!v.ok()) return CE::error(v.err());
    return synth(t_f(t_ref(v.value().type)), RefE{v.value().value}, e->src);
  }

  CE operator()(const GetE& n) {
    auto v = syn_value(ctx, n.val);
    if (!v.ok()) return CE::error(v.err());
    const VType& a = v.value().type;
    if (a->kind != ValueType::Kind::Ref)
      return CE::error(
          diag("get", "read from a value of type " + render(a), n.val->src));
    return synth(t_f(a->elem), GetE{v.value().value}, e->src);
  }

  CE operator()(const SetE& n) {
    auto t = syn_value(ctx, n.target);
    if (!t.ok()) return CE::error(t.err());
    const VType& a = t.value().type;
    if (a->kind != ValueType::Kind::Ref)
      return CE::error(diag("set", "wrote to a value of type " + render(a),
                            n.target->src));
    auto v = chk_value(ctx, n.val, a->elem);
    if (!v.ok()) return CE::error(v.err());
    return synth(t_f(t_unit()), SetE{t.value().value, v.value()}, e->src);
  }

  CE operator()(const ExtE& n) {
    auto d = syn_value(ctx, n.dict);
    if (!d.ok()) return CE::error(d.err());
    const VType& dt = d.value().type;
    if (dt->kind != ValueType::Kind::Dict)
      return CE::error(
          diag("ext", "extended a value of type " + render(dt), n.dict->src));
    auto val = syn_value(ctx, n.val);
    if (!val.ok()) return CE::error(val.err());
    if (is_first_order_closed(n.key)) {
      DictType out = dt->dict;
      out.entries.emplace_back(n.key, val.value().type);
      return synth(t_f(t_dict(std::move(out))),
                   ExtE{d.value().value, n.key, val.value().value}, e->src);
    }
    // A key known only at run time is allowed when the dictionary is
    // homogeneous at the new value's type: every lookup the old schema
    // promises still holds after the extension, shadowed or not.
    auto k = syn_value(ctx, n.key);
    if (!k.ok()) return CE::error(k.err());
    if (!first_order_type(k.value().type))
      return CE::error(diag("ext", "dictionary key has type " +
                                       render(k.value().type),
                            n.key->src));
    for (const auto& [dk, da] : dt->dict.entries)
      if (!type_equal_v(da, val.value().type))
        return CE::error(diag("ext",
                              "run-time key extension needs a homogeneous "
                              "dictionary",
                              n.key->src));
    return synth(t_f(dt),
                 ExtE{d.value().value, k.value().value, val.value().value},
                 e->src);
  }

  CE operator()(const ProjE& n) {
    auto d = syn_value(ctx, n.dict);
    if (!d.ok()) return CE::error(d.err());
    const VType& dt = d.value().type;
    if (dt->kind == ValueType::Kind::Dict && is_first_order_closed(n.key)) {
      DictLookup found = dict_type_lookup(dt->dict, n.key);
      if (found.status == DictLookup::Status::Found)
        return synth(t_f(found.type),
                     ProjE{Mode::Certain, d.value().value, n.key}, e->src);
    }
    if (dt->kind == ValueType::Kind::Unknown && n.mode == Mode::Uncertain) {
      auto k = syn_value(ctx, n.key);
      if (!k.ok()) return CE::error(k.err());
      return synth(t_f(t_unknown()),
                   ProjE{Mode::Uncertain, d.value().value, k.value().value},
                   e->src);
    }
    return CE::error(
        diag("proj", "projection from a value of type " + render(dt),
             n.dict->src));
  }

  CE operator()(const OpenDbE& n) {
    if (n.mode == Mode::Certain)
      return CE::error(
          diag("openDb", "openDb has no certain typing rule", e->src));
    auto p = chk_value(ctx, n.path, t_str());
    if (!p.ok()) return CE::error(p.err());
    return synth(t_f(t_db(t_unknown())), OpenDbE{Mode::Uncertain, p.value()},
                 e->src);
  }

  CE operator()(const FilterDbE& n) {
    auto d = syn_value(ctx, n.db);
    if (!d.ok()) return CE::error(d.err());
    const VType& dt = d.value().type;
    if (dt->kind == ValueType::Kind::Db && ground_v(dt->elem)) {
      auto pred =
          chk_value(ctx, n.pred, t_thunk(t_arrow(dt->elem, t_f(t_bool()))));
      if (pred.ok())
        return synth(t_f(dt),
                     FilterDbE{Mode::Certain, d.value().value, pred.value()},
                     e->src);
      if (n.mode == Mode::Certain) return CE::error(pred.err());
    } else if (n.mode == Mode::Certain) {
      return CE::error(diag("filterDb",
                            "certain filter needs a fully known row type, "
                            "found " + render(dt),
                            n.db->src));
    }
    if (!consistent_v(dt, t_db(t_unknown())))
      return CE::error(
          diag("filterDb", "filtered a value of type " + render(dt),
             n.db->src));
    auto pred =
        chk_value(ctx, n.pred, t_thunk(t_arrow(t_unknown(), t_f(t_bool()))));
    if (!pred.ok()) return CE::error(pred.err());
    return synth(t_f(t_db(t_unknown())),
                 FilterDbE{Mode::Uncertain, d.value().value, pred.value()},
                 e->src);
  }

  CE operator()(const JoinDbE& n) {
    auto d1 = syn_value(ctx, n.db1);
    if (!d1.ok()) return CE::error(d1.err());
    auto d2 = syn_value(ctx, n.db2);
    if (!d2.ok()) return CE::error(d2.err());
    const VType& t1 = d1.value().type;
    const VType& t2 = d2.value().type;
    bool certain = false;
    VType row;
    if (t1->kind == ValueType::Kind::Db &&
        t1->elem->kind == ValueType::Kind::Dict &&
        t2->kind == ValueType::Kind::Db &&
        t2->elem->kind == ValueType::Kind::Dict &&
        is_first_order_closed(n.key1) && is_first_order_closed(n.key2)) {
      DictLookup f1 = dict_type_lookup(t1->elem->dict, n.key1);
      DictLookup f2 = dict_type_lookup(t2->elem->dict, n.key2);
      if (f1.status == DictLookup::Status::Found &&
          f2.status == DictLookup::Status::Found &&
          type_equal_v(f1.type, f2.type)) {
        certain = true;
        DictType merged = t1->elem->dict;
        merged.entries.insert(merged.entries.end(),
                              t2->elem->dict.entries.begin(),
                              t2->elem->dict.entries.end());
        row = t_dict(std::move(merged));
      }
    }
    if (!certain) {
      if (n.mode == Mode::Certain)
        return CE::error(diag("joinDb",
                              "certain join needs known row types sharing a "
                              "key type",
                              e->src));
      if (!consistent_v(t1, t_db(t_unknown())) ||
          !consistent_v(t2, t_db(t_unknown())))
        return CE::error(diag("joinDb", "joined non-db values", e->src));
    }
    auto k1 = syn_value(ctx, n.key1);
    if (!k1.ok()) return CE::error(k1.err());
    auto k2 = syn_value(ctx, n.key2);
    if (!k2.ok()) return CE::error(k2.err());
    Mode mode = certain ? Mode::Certain : Mode::Uncertain;
    CType c = certain ? t_f(t_db(row)) : t_f(t_db(t_unknown()));
    return synth(c,
                 JoinDbE{mode, d1.value().value, k1.value().value,
                         d2.value().value, k2.value().value},
                 e->src);
  }

  CE operator()(const RccE& n) {
    auto cont = syn_exp(ctx, n.cont);
    if (!cont.ok()) return cont;
    return synth(cont.value().type, RccE{n.meta, cont.value().expr}, e->src);
  }
};

}  // namespace

Checked<SynthExpr> syn_exp(const TypingCtx& ctx, const ExprPtr& e) {
  SynVisitor vis{ctx, e};
  return std::visit(vis, e->pre);
}

Checked<ExprPtr> chk_exp(const TypingCtx& ctx, const ExprPtr& e,
                         const CType& c) {
  using C = Checked<ExprPtr>;
  if (const auto* lam = std::get_if<LamE>(&e->pre)) {
    if (c->kind == CompType::Kind::Arrow) {
      auto body = chk_exp(ctx.with_var(lam->var, c->arg), lam->body, c->res);
      if (!body.ok()) return C::error(body.err());
      return mk_expr(LamE{lam->var, body.value()}, ExprAnnot{c}, e->src);
    }
  }
  auto se = syn_exp(ctx, e);
  if (!se.ok()) return C::error(se.err());
  if (!consistent_c(se.value().type, c))
    return C::error(diag("sub",
                         "computation of type " + render(se.value().type) +
                             " is not consistent with " + render(c),
                         e->src));
  return se.value().expr;
}

Checked<SynthEnv> syn_env(const TypingCtx& store_ctx, const Env& env) {
  using C = Checked<SynthEnv>;
  SynthEnv out;
  out.ctx.locs = store_ctx.locs;
  for (const auto& [name, v] : env.bindings) {
    auto sv = syn_value(store_ctx, v);
    if (!sv.ok()) return C::error(sv.err());
    out.ctx.vars.emplace_back(name, sv.value().type);
    out.env.bindings.emplace_back(name, sv.value().value);
  }
  return out;
}

Checked<Stack> chk_stack(const TypingCtx& store_ctx, const Stack& k,
                         const CType& c) {
  using C = Checked<Stack>;
  // Frames grow toward the back, so check from the top down and rebuild.
  std::vector<Frame> rebuilt(k.frames.size());
  CType expect = c;
  for (std::size_t i = k.frames.size(); i > 0; --i) {
    const Frame& f = k.frames[i - 1];
    if (const auto* fl = std::get_if<FrLet>(&f)) {
      if (expect->kind != CompType::Kind::F)
        return C::error(diag("stack",
                             "let frame cannot consume " + render(expect),
                             fl->body->src));
      auto env2 = syn_env(store_ctx, fl->env);
      if (!env2.ok()) return C::error(env2.err());
      auto body = syn_exp(env2.value().ctx.with_var(fl->var, expect->ret),
                          fl->body);
      if (!body.ok()) return C::error(body.err());
      rebuilt[i - 1] = FrLet{env2.value().env, fl->var, body.value().expr};
      expect = body.value().type;
    } else {
      const auto& fa = std::get<FrApp>(f);
      if (expect->kind != CompType::Kind::Arrow)
        return C::error(diag("stack",
                             "application frame cannot consume " +
                                 render(expect),
                             fa.arg->src));
      auto v = chk_value(store_ctx, fa.arg, expect->arg);
      if (!v.ok()) return C::error(v.err());
      rebuilt[i - 1] = FrApp{v.value()};
      expect = expect->res;
    }
  }
  return Stack{std::move(rebuilt)};
}

Checked<MachineState> chk_state(const MachineState& s) {
  using C = Checked<MachineState>;
  MachineState out = s;

  // Fill missing store annotations first so the store typing is the same on
  // a second pass over an already accepted state.
  TypingCtx pre_ctx = store_typing(out.store);
  for (auto& [l, cell] : out.store.cells) {
    if (cell->annot.type) continue;
    auto sv = syn_value(pre_ctx, cell);
    if (!sv.ok()) return C::error(sv.err());
    cell = sv.value().value;
  }

  TypingCtx store_ctx = store_typing(out.store);
  auto env2 = syn_env(store_ctx, out.env);
  if (!env2.ok()) return C::error(env2.err());
  auto focus = syn_exp(env2.value().ctx, mk_expr(out.focus, {}, out.focus_src));
  if (!focus.ok()) return C::error(focus.err());
  auto stack = chk_stack(store_ctx, out.stack, focus.value().type);
  if (!stack.ok()) return C::error(stack.err());

  out.env = env2.value().env;
  out.focus = focus.value().expr->pre;
  out.focus_src = focus.value().expr->src;
  out.stack = stack.value();
  return out;
}

}  // namespace ovv

#pragma once

#include <optional>
#include <string>

#include "ovv/ast.hpp"

// Independent evaluator for the pure fragment (no store, no databases, no
// rcc): big-step over substitution instead of environments and closures.
// Substituted values are always closed, so plain structural substitution is
// capture-avoiding.

namespace ovv::testsupport {

inline ValuePtr subst_value(const ValuePtr& v, const std::string& x,
                            const ValuePtr& w);
inline ExprPtr subst_expr(const ExprPtr& e, const std::string& x,
                          const ValuePtr& w);

inline ValuePtr subst_value(const ValuePtr& v, const std::string& x,
                            const ValuePtr& w) {
  if (const auto* var = std::get_if<VarV>(&v->pre))
    return var->name == x ? w : v;
  if (const auto* t = std::get_if<OThunkV>(&v->pre))
    return v_othunk(subst_expr(t->body, x, w), v->annot, v->src);
  if (const auto* d = std::get_if<DictV>(&v->pre)) {
    DictVal out;
    for (const auto& [k, val] : d->entries->entries)
      out.entries.emplace_back(subst_value(k, x, w), subst_value(val, x, w));
    return v_dict(std::move(out), v->annot, v->src);
  }
  return v;
}

inline ExprPtr subst_expr(const ExprPtr& e, const std::string& x,
                          const ValuePtr& w) {
  if (const auto* n = std::get_if<AppE>(&e->pre))
    return mk_expr(AppE{subst_expr(n->fun, x, w), subst_value(n->arg, x, w)},
                   e->annot, e->src);
  if (const auto* n = std::get_if<LamE>(&e->pre)) {
    if (n->var == x) return e;
    return mk_expr(LamE{n->var, subst_expr(n->body, x, w)}, e->annot, e->src);
  }
  if (const auto* n = std::get_if<LetE>(&e->pre)) {
    ExprPtr bound = subst_expr(n->bound, x, w);
    ExprPtr body = n->var == x ? n->body : subst_expr(n->body, x, w);
    return mk_expr(LetE{n->var, std::move(bound), std::move(body)}, e->annot,
                   e->src);
  }
  if (const auto* n = std::get_if<RetE>(&e->pre))
    return mk_expr(RetE{subst_value(n->val, x, w)}, e->annot, e->src);
  if (const auto* n = std::get_if<ForceE>(&e->pre))
    return mk_expr(ForceE{subst_value(n->val, x, w)}, e->annot, e->src);
  if (const auto* n = std::get_if<ExtE>(&e->pre))
    return mk_expr(ExtE{subst_value(n->dict, x, w), subst_value(n->key, x, w),
                        subst_value(n->val, x, w)},
                   e->annot, e->src);
  if (const auto* n = std::get_if<ProjE>(&e->pre))
    return mk_expr(ProjE{n->mode, subst_value(n->dict, x, w),
                         subst_value(n->key, x, w)},
                   e->annot, e->src);
  return e;  // remaining forms are outside the pure fragment
}

struct OracleResult {
  // Disengaged on any fault (wrong shapes, out of the fragment, no fuel).
  std::optional<ValuePtr> ret;   // final returned value
  std::optional<ExprPtr> lam;    // final function
};

inline OracleResult oracle_eval(const ExprPtr& e, int& fuel) {
  if (fuel-- <= 0) return {};
  if (const auto* n = std::get_if<RetE>(&e->pre)) {
    OracleResult r;
    r.ret = n->val;
    return r;
  }
  if (std::holds_alternative<LamE>(e->pre)) {
    OracleResult r;
    r.lam = e;
    return r;
  }
  if (const auto* n = std::get_if<LetE>(&e->pre)) {
    OracleResult bound = oracle_eval(n->bound, fuel);
    if (!bound.ret) return {};
    return oracle_eval(subst_expr(n->body, n->var, *bound.ret), fuel);
  }
  if (const auto* n = std::get_if<AppE>(&e->pre)) {
    OracleResult fun = oracle_eval(n->fun, fuel);
    if (!fun.lam) return {};
    const auto& lam = std::get<LamE>((*fun.lam)->pre);
    return oracle_eval(subst_expr(lam.body, lam.var, n->arg), fuel);
  }
  if (const auto* n = std::get_if<ForceE>(&e->pre)) {
    const auto* t = std::get_if<OThunkV>(&n->val->pre);
    if (!t) return {};
    return oracle_eval(t->body, fuel);
  }
  if (const auto* n = std::get_if<ExtE>(&e->pre)) {
    const auto* d = std::get_if<DictV>(&n->dict->pre);
    if (!d) return {};
    DictVal out = *d->entries;
    out.entries.emplace_back(n->key, n->val);
    OracleResult r;
    r.ret = v_dict(std::move(out));
    return r;
  }
  if (const auto* n = std::get_if<ProjE>(&e->pre)) {
    if (n->mode != Mode::Certain) return {};
    const auto* d = std::get_if<DictV>(&n->dict->pre);
    if (!d) return {};
    const auto& entries = d->entries->entries;
    for (auto it = entries.rbegin(); it != entries.rend(); ++it)
      if (value_equal(it->first, n->key) == Eq::True) {
        OracleResult r;
        r.ret = it->second;
        return r;
      }
    return {};
  }
  return {};
}

}  // namespace ovv::testsupport

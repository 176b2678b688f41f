#include "ovv/ast.hpp"

namespace ovv {

const ValuePtr* Env::lookup(const std::string& name) const {
  for (auto it = bindings.rbegin(); it != bindings.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

Env Env::extended(std::string name, ValuePtr v) const {
  Env out = *this;
  out.bindings.emplace_back(std::move(name), std::move(v));
  return out;
}

ValuePtr mk_value(PreValue pre, ValueAnnot annot, Span src) {
  return std::make_shared<const Value>(
      Value{std::move(pre), std::move(annot), src});
}

ExprPtr mk_expr(PreExpr pre, ExprAnnot annot, Span src) {
  return std::make_shared<const Expr>(
      Expr{std::move(pre), std::move(annot), src});
}

ValuePtr v_num(std::int64_t n, Span src) { return mk_value(NumV{n}, {}, src); }
ValuePtr v_str(std::string s, Span src) {
  return mk_value(StrV{std::move(s)}, {}, src);
}
ValuePtr v_bool(bool b, Span src) { return mk_value(BoolV{b}, {}, src); }
ValuePtr v_unit(Span src) { return mk_value(UnitV{}, {}, src); }
ValuePtr v_loc(std::int64_t l, ValueAnnot annot, Span src) {
  return mk_value(LocV{l}, std::move(annot), src);
}
ValuePtr v_var(std::string name, Span src) {
  return mk_value(VarV{std::move(name)}, {}, src);
}
ValuePtr v_dict(DictVal entries, ValueAnnot annot, Span src) {
  return mk_value(DictV{std::make_shared<const DictVal>(std::move(entries))},
                  std::move(annot), src);
}
ValuePtr v_othunk(ExprPtr body, ValueAnnot annot, Span src) {
  return mk_value(OThunkV{std::move(body)}, std::move(annot), src);
}
ValuePtr v_thunk(Env env, ExprPtr body, ValueAnnot annot, Span src) {
  return mk_value(
      ThunkV{std::make_shared<const Env>(std::move(env)), std::move(body)},
      std::move(annot), src);
}
ValuePtr v_db(std::vector<ValuePtr> rows, ValueAnnot annot, Span src) {
  return mk_value(DbV{std::move(rows)}, std::move(annot), src);
}

ValuePtr with_annot(const ValuePtr& v, VType type) {
  return mk_value(v->pre, ValueAnnot{std::move(type)}, v->src);
}

ExprPtr with_annot(const ExprPtr& e, CType type) {
  return mk_expr(e->pre, ExprAnnot{std::move(type)}, e->src);
}

namespace {

Eq both(Eq a, Eq b) {
  if (a == Eq::Incomparable || b == Eq::Incomparable) return Eq::Incomparable;
  if (a == Eq::False || b == Eq::False) return Eq::False;
  return Eq::True;
}

}  // namespace

Eq value_equal(const Value& a, const Value& b) {
  if (std::holds_alternative<OThunkV>(a.pre) ||
      std::holds_alternative<ThunkV>(a.pre) ||
      std::holds_alternative<DbV>(a.pre) ||
      std::holds_alternative<VarV>(a.pre) ||
      std::holds_alternative<OThunkV>(b.pre) ||
      std::holds_alternative<ThunkV>(b.pre) ||
      std::holds_alternative<DbV>(b.pre) ||
      std::holds_alternative<VarV>(b.pre))
    return Eq::Incomparable;
  if (a.pre.index() != b.pre.index()) return Eq::False;
  if (const auto* n = std::get_if<NumV>(&a.pre))
    return n->n == std::get<NumV>(b.pre).n ? Eq::True : Eq::False;
  if (const auto* s = std::get_if<StrV>(&a.pre))
    return s->s == std::get<StrV>(b.pre).s ? Eq::True : Eq::False;
  if (const auto* x = std::get_if<BoolV>(&a.pre))
    return x->b == std::get<BoolV>(b.pre).b ? Eq::True : Eq::False;
  if (const auto* l = std::get_if<LocV>(&a.pre))
    return l->l == std::get<LocV>(b.pre).l ? Eq::True : Eq::False;
  if (std::holds_alternative<UnitV>(a.pre)) return Eq::True;
  const auto& da = std::get<DictV>(a.pre).entries->entries;
  const auto& db = std::get<DictV>(b.pre).entries->entries;
  if (da.size() != db.size()) {
    // Still incomparable if either side hides a higher-order value.
    for (const auto& [k, v] : da)
      if (!is_first_order_closed(k) || !is_first_order_closed(v))
        return Eq::Incomparable;
    for (const auto& [k, v] : db)
      if (!is_first_order_closed(k) || !is_first_order_closed(v))
        return Eq::Incomparable;
    return Eq::False;
  }
  Eq acc = Eq::True;
  for (std::size_t i = 0; i < da.size(); ++i) {
    acc = both(acc, value_equal(da[i].first, db[i].first));
    acc = both(acc, value_equal(da[i].second, db[i].second));
    if (acc == Eq::Incomparable) return acc;
  }
  return acc;
}

Eq value_equal(const ValuePtr& a, const ValuePtr& b) {
  return value_equal(*a, *b);
}

bool is_first_order_closed(const Value& v) {
  if (std::holds_alternative<OThunkV>(v.pre) ||
      std::holds_alternative<ThunkV>(v.pre) ||
      std::holds_alternative<DbV>(v.pre) ||
      std::holds_alternative<VarV>(v.pre))
    return false;
  if (const auto* d = std::get_if<DictV>(&v.pre)) {
    for (const auto& [k, val] : d->entries->entries)
      if (!is_first_order_closed(*k) || !is_first_order_closed(*val))
        return false;
  }
  return true;
}

bool is_first_order_closed(const ValuePtr& v) {
  return is_first_order_closed(*v);
}

namespace {

void fv_expr(const Expr& e, std::set<std::string>& bound,
             std::set<std::string>& out);

void fv_value(const Value& v, std::set<std::string>& bound,
              std::set<std::string>& out) {
  if (const auto* x = std::get_if<VarV>(&v.pre)) {
    if (!bound.count(x->name)) out.insert(x->name);
  } else if (const auto* t = std::get_if<OThunkV>(&v.pre)) {
    fv_expr(*t->body, bound, out);
  } else if (const auto* d = std::get_if<DictV>(&v.pre)) {
    for (const auto& [k, val] : d->entries->entries) {
      fv_value(*k, bound, out);
      fv_value(*val, bound, out);
    }
  } else if (const auto* db = std::get_if<DbV>(&v.pre)) {
    for (const auto& r : db->rows) fv_value(*r, bound, out);
  }
  // Closed thunks capture their environment; nothing is free.
}

struct FvVisitor {
  std::set<std::string>& bound;
  std::set<std::string>& out;

  void val(const ValuePtr& v) { fv_value(*v, bound, out); }
  void exp(const ExprPtr& e) { fv_expr(*e, bound, out); }
  void under(const std::string& x, const ExprPtr& e) {
    bool fresh = bound.insert(x).second;
    fv_expr(*e, bound, out);
    if (fresh) bound.erase(x);
  }

  void operator()(const AppE& n) {
    exp(n.fun);
    val(n.arg);
  }
  void operator()(const LamE& n) { under(n.var, n.body); }
  void operator()(const LetE& n) {
    exp(n.bound);
    under(n.var, n.body);
  }
  void operator()(const RetE& n) { val(n.val); }
  void operator()(const ForceE& n) { val(n.val); }
  void operator()(const RefE& n) { val(n.val); }
  void operator()(const SetE& n) {
    val(n.target);
    val(n.val);
  }
  void operator()(const GetE& n) { val(n.val); }
  void operator()(const ExtE& n) {
    val(n.dict);
    val(n.key);
    val(n.val);
  }
  void operator()(const ProjE& n) {
    val(n.dict);
    val(n.key);
  }
  void operator()(const AscribeE& n) { exp(n.body); }
  void operator()(const RccE& n) { exp(n.cont); }
  void operator()(const OpenDbE& n) { val(n.path); }
  void operator()(const FilterDbE& n) {
    val(n.db);
    val(n.pred);
  }
  void operator()(const JoinDbE& n) {
    val(n.db1);
    val(n.key1);
    val(n.db2);
    val(n.key2);
  }
};

void fv_expr(const Expr& e, std::set<std::string>& bound,
             std::set<std::string>& out) {
  FvVisitor vis{bound, out};
  std::visit(vis, e.pre);
}

}  // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> bound, out;
  fv_expr(e, bound, out);
  return out;
}

std::set<std::string> free_vars(const Value& v) {
  std::set<std::string> bound, out;
  fv_value(v, bound, out);
  return out;
}

bool is_closed(const Value& v) {
  if (std::holds_alternative<VarV>(v.pre) ||
      std::holds_alternative<OThunkV>(v.pre))
    return false;
  if (const auto* d = std::get_if<DictV>(&v.pre)) {
    for (const auto& [k, val] : d->entries->entries)
      if (!is_closed(*k) || !is_closed(*val)) return false;
  }
  if (const auto* db = std::get_if<DbV>(&v.pre)) {
    for (const auto& r : db->rows)
      if (!is_closed(*r)) return false;
  }
  return true;
}

const char* mode_mark(Mode m) { return m == Mode::Certain ? "!" : "?"; }

}  // namespace ovv

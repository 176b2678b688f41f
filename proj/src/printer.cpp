#include "ovv/printer.hpp"

#include <sstream>

namespace ovv {

namespace {

void print_expr_into(const ExprPtr& e, std::ostream& os);

void print_value_into(const ValuePtr& v, std::ostream& os) {
  if (const auto* n = std::get_if<NumV>(&v->pre)) {
    os << n->n;
  } else if (const auto* s = std::get_if<StrV>(&v->pre)) {
    os << '"' << s->s << '"';
  } else if (const auto* b = std::get_if<BoolV>(&v->pre)) {
    os << (b->b ? "true" : "false");
  } else if (std::holds_alternative<UnitV>(v->pre)) {
    os << "unit";
  } else if (const auto* x = std::get_if<VarV>(&v->pre)) {
    os << x->name;
  } else if (const auto* l = std::get_if<LocV>(&v->pre)) {
    os << "<loc " << l->l << ">";
  } else if (const auto* d = std::get_if<DictV>(&v->pre)) {
    os << "dict {";
    bool first = true;
    for (const auto& [k, val] : d->entries->entries) {
      if (!first) os << ",";
      first = false;
      os << " ";
      print_value_into(k, os);
      os << " -> ";
      print_value_into(val, os);
    }
    os << " }";
  } else if (const auto* t = std::get_if<OThunkV>(&v->pre)) {
    os << "othunk { ";
    print_expr_into(t->body, os);
    os << " }";
  } else if (const auto* t = std::get_if<ThunkV>(&v->pre)) {
    os << "<thunk/" << t->env->bindings.size() << "-captured>";
  } else {
    const auto& db = std::get<DbV>(v->pre);
    os << "<db " << db.rows.size() << " rows>";
  }
}

struct PrintVisitor {
  std::ostream& os;
  const ExprPtr& e;

  void val(const ValuePtr& v) { print_value_into(v, os); }
  void paren(const ExprPtr& sub) {
    os << "(";
    print_expr_into(sub, os);
    os << ")";
  }

  void operator()(const LetE& n) {
    os << "let " << n.var << " = (";
    print_expr_into(n.bound, os);
    os << ") in ";
    print_expr_into(n.body, os);
  }
  void operator()(const LamE& n) {
    os << "lam " << n.var << ". ";
    print_expr_into(n.body, os);
  }
  void operator()(const AppE& n) {
    paren(n.fun);
    os << " @ ";
    val(n.arg);
  }
  void operator()(const RetE& n) {
    os << "ret ";
    val(n.val);
  }
  void operator()(const ForceE& n) {
    os << "force ";
    val(n.val);
  }
  void operator()(const RefE& n) {
    os << "ref ";
    val(n.val);
  }
  void operator()(const SetE& n) {
    os << "set ";
    val(n.target);
    os << " ";
    val(n.val);
  }
  void operator()(const GetE& n) {
    os << "get ";
    val(n.val);
  }
  void operator()(const ExtE& n) {
    os << "ext ";
    val(n.dict);
    os << " ";
    val(n.key);
    os << " ";
    val(n.val);
  }
  void operator()(const ProjE& n) {
    os << "proj " << mode_mark(n.mode) << " ";
    val(n.dict);
    os << " ";
    val(n.key);
  }
  void operator()(const AscribeE& n) {
    paren(n.body);
    os << " ?: " << render(*n.annot.type);
  }
  void operator()(const RccE& n) {
    os << "rcc " << n.meta << " { ";
    print_expr_into(n.cont, os);
    os << " }";
  }
  void operator()(const OpenDbE& n) {
    os << "openDb " << mode_mark(n.mode) << " ";
    val(n.path);
  }
  void operator()(const FilterDbE& n) {
    os << "filterDb " << mode_mark(n.mode) << " ";
    val(n.db);
    os << " ";
    val(n.pred);
  }
  void operator()(const JoinDbE& n) {
    os << "joinDb " << mode_mark(n.mode) << " ";
    val(n.db1);
    os << " ";
    val(n.key1);
    os << " ";
    val(n.db2);
    os << " ";
    val(n.key2);
  }
};

void print_expr_into(const ExprPtr& e, std::ostream& os) {
  PrintVisitor vis{os, e};
  std::visit(vis, e->pre);
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  std::ostringstream os;
  print_expr_into(e, os);
  return os.str();
}

std::string print_value(const ValuePtr& v) {
  std::ostringstream os;
  print_value_into(v, os);
  return os.str();
}

std::string render_result(const ValuePtr& v, bool full_rows) {
  if (const auto* db = std::get_if<DbV>(&v->pre)) {
    std::ostringstream os;
    os << "db[" << db->rows.size() << " rows]";
    if (v->annot.type) os << " : " << render(*v->annot.type);
    if (full_rows)
      for (const auto& r : db->rows) os << "\n  " << print_value(r);
    return os.str();
  }
  return print_value(v);
}

}  // namespace ovv

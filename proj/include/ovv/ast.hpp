#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ovv/span.hpp"
#include "ovv/types.hpp"

namespace ovv {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class Mode { Uncertain, Certain };

// Annotation slots; a disengaged optional is the `_` placeholder.
struct ValueAnnot {
  std::optional<VType> type;
};
struct ExprAnnot {
  std::optional<CType> type;
};

// Ordered variable bindings, rightmost-wins on shadowing. Shared between
// closed thunks and the machine.
struct Env {
  std::vector<std::pair<std::string, ValuePtr>> bindings;

  const ValuePtr* lookup(const std::string& name) const;
  Env extended(std::string name, ValuePtr v) const;
};

// Ordered key/value pairs; extension appends on the right and lookup
// resolves to the rightmost structurally-equal key.
struct DictVal {
  std::vector<std::pair<ValuePtr, ValuePtr>> entries;
};

struct OThunkV {
  ExprPtr body;
};
struct ThunkV {
  std::shared_ptr<const Env> env;
  ExprPtr body;
};
struct DictV {
  std::shared_ptr<const DictVal> entries;
};
struct NumV {
  std::int64_t n = 0;
};
struct StrV {
  std::string s;
};
struct BoolV {
  bool b = false;
};
struct LocV {
  std::int64_t l = 0;
};
struct UnitV {};
struct VarV {
  std::string name;
};
struct DbV {
  std::vector<ValuePtr> rows;
};

using PreValue = std::variant<OThunkV, ThunkV, DictV, NumV, StrV, BoolV, LocV,
                              UnitV, VarV, DbV>;

struct Value {
  PreValue pre;
  ValueAnnot annot;
  Span src;
};

struct AppE {
  ExprPtr fun;
  ValuePtr arg;
};
struct LamE {
  std::string var;
  ExprPtr body;
};
struct LetE {
  std::string var;
  ExprPtr bound;
  ExprPtr body;
};
struct RetE {
  ValuePtr val;
};
struct ForceE {
  ValuePtr val;
};
struct RefE {
  ValuePtr val;
};
struct SetE {
  ValuePtr target;
  ValuePtr val;
};
struct GetE {
  ValuePtr val;
};
struct ExtE {
  ValuePtr dict;
  ValuePtr key;
  ValuePtr val;
};
struct ProjE {
  Mode mode = Mode::Uncertain;
  ValuePtr dict;
  ValuePtr key;
};
struct AscribeE {
  ExprPtr body;
  ExprAnnot annot;  // never Missing in well-formed programs
};
struct RccE {
  std::string meta;
  ExprPtr cont;
};
struct OpenDbE {
  Mode mode = Mode::Uncertain;
  ValuePtr path;
};
struct FilterDbE {
  Mode mode = Mode::Uncertain;
  ValuePtr db;
  ValuePtr pred;
};
struct JoinDbE {
  Mode mode = Mode::Uncertain;
  ValuePtr db1;
  ValuePtr key1;
  ValuePtr db2;
  ValuePtr key2;
};

using PreExpr =
    std::variant<AppE, LamE, LetE, RetE, ForceE, RefE, SetE, GetE, ExtE, ProjE,
                 AscribeE, RccE, OpenDbE, FilterDbE, JoinDbE>;

struct Expr {
  PreExpr pre;
  ExprAnnot annot;
  Span src;
};

// --- construction helpers ---------------------------------------------------

ValuePtr mk_value(PreValue pre, ValueAnnot annot = {}, Span src = {});
ExprPtr mk_expr(PreExpr pre, ExprAnnot annot = {}, Span src = {});

ValuePtr v_num(std::int64_t n, Span src = {});
ValuePtr v_str(std::string s, Span src = {});
ValuePtr v_bool(bool b, Span src = {});
ValuePtr v_unit(Span src = {});
ValuePtr v_loc(std::int64_t l, ValueAnnot annot = {}, Span src = {});
ValuePtr v_var(std::string name, Span src = {});
ValuePtr v_dict(DictVal entries, ValueAnnot annot = {}, Span src = {});
ValuePtr v_othunk(ExprPtr body, ValueAnnot annot = {}, Span src = {});
ValuePtr v_thunk(Env env, ExprPtr body, ValueAnnot annot = {}, Span src = {});
ValuePtr v_db(std::vector<ValuePtr> rows, ValueAnnot annot = {}, Span src = {});

ValuePtr with_annot(const ValuePtr& v, VType type);
ExprPtr with_annot(const ExprPtr& e, CType type);

// --- structural operations --------------------------------------------------

enum class Eq { True, False, Incomparable };

/// Structural equality ignoring annotations and source spans. Thunks,
/// databases and free variables are not comparable.
Eq value_equal(const Value& a, const Value& b);
Eq value_equal(const ValuePtr& a, const ValuePtr& b);

/// No thunk, database or variable occurs anywhere inside.
bool is_first_order_closed(const Value& v);
bool is_first_order_closed(const ValuePtr& v);

std::set<std::string> free_vars(const Expr& e);
std::set<std::string> free_vars(const Value& v);

/// No free variable and no open thunk occurs inside.
bool is_closed(const Value& v);

const char* mode_mark(Mode m);  // "?" or "!"

}  // namespace ovv

#include "ovv/types.hpp"

#include <sstream>

#include "ovv/ast.hpp"
#include "ovv/machine.hpp"
#include "ovv/printer.hpp"

namespace ovv {

namespace {

VType mk_v(ValueType t) { return std::make_shared<const ValueType>(std::move(t)); }
CType mk_c(CompType t) { return std::make_shared<const CompType>(std::move(t)); }

using VK = ValueType::Kind;
using CK = CompType::Kind;

}  // namespace

VType t_unknown() {
  static const VType t = mk_v({VK::Unknown});
  return t;
}
VType t_num() {
  static const VType t = mk_v({VK::Num});
  return t;
}
VType t_str() {
  static const VType t = mk_v({VK::Str});
  return t;
}
VType t_bool() {
  static const VType t = mk_v({VK::Bool});
  return t;
}
VType t_unit() {
  static const VType t = mk_v({VK::Unit});
  return t;
}
VType t_dict(DictType entries) {
  ValueType t{VK::Dict};
  t.dict = std::move(entries);
  return mk_v(std::move(t));
}
VType t_ref(VType elem) {
  ValueType t{VK::Ref};
  t.elem = std::move(elem);
  return mk_v(std::move(t));
}
VType t_thunk(CType comp) {
  ValueType t{VK::Thunk};
  t.comp = std::move(comp);
  return mk_v(std::move(t));
}
VType t_db(VType elem) {
  ValueType t{VK::Db};
  t.elem = std::move(elem);
  return mk_v(std::move(t));
}
CType t_arrow(VType arg, CType res) {
  CompType t{CK::Arrow};
  t.arg = std::move(arg);
  t.res = std::move(res);
  return mk_c(std::move(t));
}
CType t_f(VType ret) {
  CompType t{CK::F};
  t.ret = std::move(ret);
  return mk_c(std::move(t));
}

bool consistent_v(const VType& a, const VType& b) {
  if (a->kind == VK::Unknown || b->kind == VK::Unknown) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case VK::Num:
    case VK::Str:
    case VK::Bool:
    case VK::Unit:
      return true;
    case VK::Ref:
    case VK::Db:
      return consistent_v(a->elem, b->elem);
    case VK::Thunk:
      return consistent_c(a->comp, b->comp);
    case VK::Dict: {
      // Walk from the rightmost entry; an empty left side is consistent with
      // anything remaining on the right, but not vice versa.
      const auto& ea = a->dict.entries;
      const auto& eb = b->dict.entries;
      std::size_t i = ea.size(), j = eb.size();
      while (i > 0) {
        if (j == 0) return false;
        const auto& [ka, ta] = ea[i - 1];
        const auto& [kb, tb] = eb[j - 1];
        if (value_equal(ka, kb) != Eq::True) return false;
        if (!consistent_v(ta, tb)) return false;
        --i;
        --j;
      }
      return true;
    }
    case VK::Unknown:
      return true;
  }
  return false;
}

bool consistent_c(const CType& c, const CType& d) {
  if (c->kind != d->kind) return false;
  if (c->kind == CK::F) return consistent_v(c->ret, d->ret);
  return consistent_v(d->arg, c->arg) && consistent_c(c->res, d->res);
}

bool type_equal_v(const VType& a, const VType& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case VK::Unknown:
    case VK::Num:
    case VK::Str:
    case VK::Bool:
    case VK::Unit:
      return true;
    case VK::Ref:
    case VK::Db:
      return type_equal_v(a->elem, b->elem);
    case VK::Thunk:
      return type_equal_c(a->comp, b->comp);
    case VK::Dict: {
      const auto& ea = a->dict.entries;
      const auto& eb = b->dict.entries;
      if (ea.size() != eb.size()) return false;
      for (std::size_t i = 0; i < ea.size(); ++i) {
        if (value_equal(ea[i].first, eb[i].first) != Eq::True) return false;
        if (!type_equal_v(ea[i].second, eb[i].second)) return false;
      }
      return true;
    }
  }
  return false;
}

bool type_equal_c(const CType& c, const CType& d) {
  if (c->kind != d->kind) return false;
  if (c->kind == CK::F) return type_equal_v(c->ret, d->ret);
  return type_equal_v(c->arg, d->arg) && type_equal_c(c->res, d->res);
}

bool ground_v(const VType& a) {
  switch (a->kind) {
    case VK::Unknown:
      return false;
    case VK::Num:
    case VK::Str:
    case VK::Bool:
    case VK::Unit:
      return true;
    case VK::Ref:
    case VK::Db:
      return ground_v(a->elem);
    case VK::Thunk:
      return ground_c(a->comp);
    case VK::Dict:
      for (const auto& [k, t] : a->dict.entries)
        if (!ground_v(t)) return false;
      return true;
  }
  return false;
}

bool ground_c(const CType& c) {
  if (c->kind == CK::F) return ground_v(c->ret);
  return ground_v(c->arg) && ground_c(c->res);
}

DictLookup dict_type_lookup(const DictType& d, const ValuePtr& key) {
  if (!is_first_order_closed(key))
    return {DictLookup::Status::Incomparable, nullptr};
  for (auto it = d.entries.rbegin(); it != d.entries.rend(); ++it) {
    Eq eq = value_equal(it->first, key);
    if (eq == Eq::Incomparable)
      return {DictLookup::Status::Incomparable, nullptr};
    if (eq == Eq::True) return {DictLookup::Status::Found, it->second};
  }
  return {DictLookup::Status::Absent, nullptr};
}

const VType* TypingCtx::lookup_var(const std::string& name) const {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

TypingCtx TypingCtx::with_var(std::string name, VType type) const {
  TypingCtx out = *this;
  out.vars.emplace_back(std::move(name), std::move(type));
  return out;
}

TypingCtx store_typing(const Store& store) {
  TypingCtx ctx;
  for (const auto& [l, v] : store.cells)
    ctx.locs[l] = v->annot.type ? *v->annot.type : t_unknown();
  return ctx;
}

std::string render(const VType& a) {
  switch (a->kind) {
    case VK::Unknown:
      return "?";
    case VK::Num:
      return "Num";
    case VK::Str:
      return "Str";
    case VK::Bool:
      return "Bool";
    case VK::Unit:
      return "1";
    case VK::Ref:
      return "Ref " + render(a->elem);
    case VK::Db:
      return "Db " + render(a->elem);
    case VK::Thunk:
      return "U (" + render(a->comp) + ")";
    case VK::Dict: {
      std::ostringstream os;
      os << "Dict{";
      bool first = true;
      for (const auto& [k, t] : a->dict.entries) {
        if (!first) os << ", ";
        first = false;
        os << print_value(k) << ":" << render(t);
      }
      os << "}";
      return os.str();
    }
  }
  return "?";
}

std::string render(const CType& c) {
  if (c->kind == CK::F) return "F " + render(c->ret);
  std::string arg = render(c->arg);
  if (c->arg->kind == VK::Thunk) arg = "(" + arg + ")";
  return arg + " -> " + render(c->res);
}

}  // namespace ovv

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ovv {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;
struct Store;

struct ValueType;
struct CompType;
using VType = std::shared_ptr<const ValueType>;
using CType = std::shared_ptr<const CompType>;

// Maps closed first-order key values to value types; lookup is
// rightmost-wins, mirroring dictionary extension.
struct DictType {
  std::vector<std::pair<ValuePtr, VType>> entries;
};

struct ValueType {
  enum class Kind { Unknown, Num, Str, Bool, Unit, Dict, Ref, Thunk, Db };
  Kind kind = Kind::Unknown;
  DictType dict;  // Kind::Dict
  VType elem;     // Kind::Ref, Kind::Db
  CType comp;     // Kind::Thunk
};

struct CompType {
  enum class Kind { Arrow, F };
  Kind kind = Kind::F;
  VType arg;  // Arrow
  CType res;  // Arrow
  VType ret;  // F
};

VType t_unknown();
VType t_num();
VType t_str();
VType t_bool();
VType t_unit();
VType t_dict(DictType entries);
VType t_ref(VType elem);
VType t_thunk(CType comp);
VType t_db(VType elem);
CType t_arrow(VType arg, CType res);
CType t_f(VType ret);

/// Consistency relation on value types: the unknown type is consistent with
/// everything (both sides), the empty dict type is consistent with any dict
/// type on the left only, and the remaining cases are congruences.
bool consistent_v(const VType& a, const VType& b);

/// Consistency on computation types; the arrow case is contravariant in the
/// argument position.
bool consistent_c(const CType& c, const CType& d);

bool type_equal_v(const VType& a, const VType& b);
bool type_equal_c(const CType& c, const CType& d);

/// True iff the unknown type occurs nowhere inside.
bool ground_v(const VType& a);
bool ground_c(const CType& c);

struct DictLookup {
  enum class Status { Found, Absent, Incomparable };
  Status status = Status::Absent;
  VType type;  // set when Found
};

/// Rightmost entry whose key is structurally equal to `key`.
DictLookup dict_type_lookup(const DictType& d, const ValuePtr& key);

struct TypingCtx {
  std::vector<std::pair<std::string, VType>> vars;  // rightmost-wins
  std::map<std::int64_t, VType> locs;               // store typing

  const VType* lookup_var(const std::string& name) const;
  TypingCtx with_var(std::string name, VType type) const;
};

/// Store typing |mu|: each location maps to the annotation of its stored
/// value when present, else to the unknown type.
TypingCtx store_typing(const Store& store);

std::string render(const VType& a);
std::string render(const CType& c);

}  // namespace ovv

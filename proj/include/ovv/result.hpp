#pragma once

#include <cassert>
#include <utility>
#include <variant>

namespace ovv {

/// Success-or-error carrier used across the parser, checker and machine.
template <class T, class E>
class Result {
 public:
  Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}

  static Result error(E e) { return Result(tag_error{}, std::move(e)); }

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    assert(ok());
    return std::get<0>(v_);
  }
  T& value() {
    assert(ok());
    return std::get<0>(v_);
  }
  const E& err() const {
    assert(!ok());
    return std::get<1>(v_);
  }

 private:
  struct tag_error {};
  Result(tag_error, E e) : v_(std::in_place_index<1>, std::move(e)) {}
  std::variant<T, E> v_;
};

}  // namespace ovv

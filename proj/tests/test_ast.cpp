#include <doctest.h>

#include "ovv/ast.hpp"

using namespace ovv;

TEST_CASE("value_equal ignores annotations") {
  ValuePtr a = v_num(5);
  ValuePtr b = with_annot(v_num(5), t_num());
  CHECK(value_equal(a, b) == Eq::True);
}

TEST_CASE("value_equal basics") {
  CHECK(value_equal(v_str("name"), v_str("Name")) == Eq::False);
  CHECK(value_equal(v_str("x"), v_str("x")) == Eq::True);
  CHECK(value_equal(v_num(1), v_str("1")) == Eq::False);
  CHECK(value_equal(v_bool(true), v_bool(true)) == Eq::True);
  CHECK(value_equal(v_unit(), v_unit()) == Eq::True);
  CHECK(value_equal(v_loc(3), v_loc(3)) == Eq::True);
  CHECK(value_equal(v_loc(3), v_loc(4)) == Eq::False);
}

TEST_CASE("value_equal refuses higher-order values") {
  ValuePtr t = v_thunk(Env{}, mk_expr(RetE{v_num(1)}));
  CHECK(value_equal(t, t) == Eq::Incomparable);
  CHECK(value_equal(v_var("x"), v_var("x")) == Eq::Incomparable);
  CHECK(value_equal(v_db({}, {}), v_db({}, {})) == Eq::Incomparable);
  CHECK(value_equal(v_othunk(mk_expr(RetE{v_num(1)})), v_num(1)) ==
        Eq::Incomparable);
}

TEST_CASE("value_equal on dictionaries is pointwise and ordered") {
  DictVal d1, d2, d3;
  d1.entries.emplace_back(v_str("a"), v_num(1));
  d2.entries.emplace_back(v_str("a"), v_num(1));
  d3.entries.emplace_back(v_str("a"), v_num(2));
  CHECK(value_equal(v_dict(d1), v_dict(d2)) == Eq::True);
  CHECK(value_equal(v_dict(d1), v_dict(d3)) == Eq::False);
  DictVal d4 = d1;
  d4.entries.emplace_back(v_str("b"), v_num(2));
  CHECK(value_equal(v_dict(d1), v_dict(d4)) == Eq::False);
}

TEST_CASE("free_vars") {
  ExprPtr lam = mk_expr(LamE{"x", mk_expr(RetE{v_var("x")})});
  CHECK(free_vars(*lam).empty());

  ExprPtr ret_y = mk_expr(RetE{v_var("y")});
  CHECK(free_vars(*ret_y) == std::set<std::string>{"y"});

  ExprPtr let_xy = mk_expr(
      LetE{"x", mk_expr(RetE{v_var("y")}), mk_expr(RetE{v_var("x")})});
  CHECK(free_vars(*let_xy) == std::set<std::string>{"y"});

  ExprPtr shadow = mk_expr(
      LetE{"x", mk_expr(RetE{v_var("x")}), mk_expr(RetE{v_var("x")})});
  CHECK(free_vars(*shadow) == std::set<std::string>{"x"});
}

TEST_CASE("free_vars sees through open thunks and dicts") {
  DictVal d;
  d.entries.emplace_back(v_str("k"), v_var("z"));
  ExprPtr e = mk_expr(RetE{v_othunk(mk_expr(RetE{v_dict(d)}))});
  CHECK(free_vars(*e) == std::set<std::string>{"z"});
}

TEST_CASE("env lookup is rightmost-wins") {
  Env env;
  env = env.extended("x", v_num(1));
  env = env.extended("x", v_num(2));
  REQUIRE(env.lookup("x"));
  CHECK(value_equal(*env.lookup("x"), v_num(2)) == Eq::True);
  CHECK(env.lookup("y") == nullptr);
}

TEST_CASE("is_first_order_closed") {
  CHECK(is_first_order_closed(v_num(1)));
  CHECK(is_first_order_closed(v_loc(0)));
  CHECK_FALSE(is_first_order_closed(v_var("x")));
  CHECK_FALSE(is_first_order_closed(v_othunk(mk_expr(RetE{v_num(1)}))));
  DictVal d;
  d.entries.emplace_back(v_str("k"), v_var("x"));
  CHECK_FALSE(is_first_order_closed(v_dict(d)));
}

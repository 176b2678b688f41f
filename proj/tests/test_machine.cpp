#include <doctest.h>

#include "ovv/machine.hpp"
#include "ovv/meta.hpp"
#include "support/generators.hpp"
#include "support/structural.hpp"
#include "support/subst_oracle.hpp"

using namespace ovv;
using namespace ovv::testsupport;

namespace {

Machine plain_machine() { return Machine(nullptr, "."); }

MachineState state_of(ExprPtr e) { return initial_state(std::move(e)); }

}  // namespace

TEST_CASE("close resolves variables to the bound value") {
  Env env;
  env = env.extended("x", with_annot(v_num(7), t_num()));
  auto r = close(env, v_var("x"));
  REQUIRE(r.ok());
  CHECK(value_equal(r.value(), v_num(7)) == Eq::True);
  REQUIRE(r.value()->annot.type);
  CHECK(type_equal_v(*r.value()->annot.type, t_num()));
}

TEST_CASE("close packs open thunks with the current environment") {
  Env env;
  env = env.extended("y", v_num(1));
  auto r = close(env, v_othunk(mk_expr(RetE{v_var("y")})));
  REQUIRE(r.ok());
  const auto* t = std::get_if<ThunkV>(&r.value()->pre);
  REQUIRE(t);
  CHECK(t->env->bindings.size() == 1);
}

TEST_CASE("close leaves literals alone and reports unbound variables") {
  Env empty;
  auto lit = close(empty, v_num(3));
  REQUIRE(lit.ok());
  CHECK(value_equal(lit.value(), v_num(3)) == Eq::True);

  auto missing = close(empty, v_var("nope"));
  REQUIRE_FALSE(missing.ok());
  CHECK(missing.err().kind == StuckReason::Kind::UnboundVariable);
}

TEST_CASE("let pushes a frame") {
  Machine m = plain_machine();
  Fuel fuel{10};
  MachineState s = state_of(mk_expr(
      LetE{"x", mk_expr(RetE{v_num(1)}), mk_expr(RetE{v_var("x")})}));
  auto r = m.step(s, fuel);
  const auto* st = std::get_if<Stepped>(&r);
  REQUIRE(st);
  CHECK(st->state.stack.frames.size() == 1);
  CHECK(std::holds_alternative<RetE>(st->state.focus));
}

TEST_CASE("uncertain projection is stuck") {
  Machine m = plain_machine();
  Fuel fuel{10};
  MachineState s =
      state_of(mk_expr(ProjE{Mode::Uncertain, v_dict({}), v_str("k")}));
  auto r = m.step(s, fuel);
  const auto* stuck = std::get_if<Stuck>(&r);
  REQUIRE(stuck);
  CHECK(stuck->reason.kind == StuckReason::Kind::UncertainOp);
}

TEST_CASE("certain projection returns the field") {
  DictVal row;
  row.entries.emplace_back(v_str("name"), v_str("Evan Chang"));
  Env env;
  env = env.extended("d", v_dict(row));
  Machine m = plain_machine();
  Fuel fuel{10};
  MachineState s =
      state_of(mk_expr(ProjE{Mode::Certain, v_var("d"), v_str("name")}));
  s.env = env;
  auto r = m.step(s, fuel);
  const auto* st = std::get_if<Stepped>(&r);
  REQUIRE(st);
  const auto* ret = std::get_if<RetE>(&st->state.focus);
  REQUIRE(ret);
  CHECK(value_equal(ret->val, v_str("Evan Chang")) == Eq::True);
}

TEST_CASE("certain projection of a missing field") {
  Machine m = plain_machine();
  Fuel fuel{10};
  MachineState s =
      state_of(mk_expr(ProjE{Mode::Certain, v_dict({}), v_str("k")}));
  auto r = m.step(s, fuel);
  const auto* stuck = std::get_if<Stuck>(&r);
  REQUIRE(stuck);
  CHECK(stuck->reason.kind == StuckReason::Kind::MissingField);
}

TEST_CASE("ref allocates and returns an unknown-typed location") {
  Machine m = plain_machine();
  Fuel fuel{10};
  MachineState s = state_of(mk_expr(RefE{with_annot(v_num(2), t_num())}));
  auto r = m.step(s, fuel);
  const auto* st = std::get_if<Stepped>(&r);
  REQUIRE(st);
  CHECK(st->state.store.cells.size() == 1);
  const auto* ret = std::get_if<RetE>(&st->state.focus);
  REQUIRE(ret);
  REQUIRE(std::holds_alternative<LocV>(ret->val->pre));
  REQUIRE(ret->val->annot.type);
  CHECK((*ret->val->annot.type)->kind == ValueType::Kind::Unknown);
}

TEST_CASE("force of a non-thunk is a dynamic type error") {
  Machine m = plain_machine();
  auto r = m.run(state_of(mk_expr(ForceE{v_num(1)})), 10);
  const auto* stuck = std::get_if<RunStuck>(&r);
  REQUIRE(stuck);
  CHECK(stuck->reason.kind == StuckReason::Kind::DynamicTypeError);
}

TEST_CASE("ascription is stuck in every state") {
  Machine m = plain_machine();
  Fuel fuel{10};
  MachineState s = state_of(
      mk_expr(AscribeE{mk_expr(RetE{v_num(1)}), ExprAnnot{t_f(t_num())}}));
  auto r = m.step(s, fuel);
  const auto* stuck = std::get_if<Stuck>(&r);
  REQUIRE(stuck);
  CHECK(stuck->reason.kind == StuckReason::Kind::UndischargedAscription);
}

TEST_CASE("final states") {
  MachineState ret = state_of(mk_expr(RetE{v_unit()}));
  CHECK(is_final(ret));
  MachineState lam = state_of(mk_expr(LamE{"x", mk_expr(RetE{v_var("x")})}));
  CHECK(is_final(lam));
  lam.stack.frames.push_back(FrApp{v_num(1)});
  CHECK_FALSE(is_final(lam));
}

TEST_CASE("run of an immediate value takes no steps") {
  Machine m = plain_machine();
  auto r = m.run(state_of(mk_expr(RetE{v_unit()})), 100);
  const auto* fin = std::get_if<RunFinal>(&r);
  REQUIRE(fin);
  CHECK(fin->steps == 0);
}

TEST_CASE("run exhausts fuel on divergence-shaped loops") {
  // No recursion exists in the calculus, so exhaust fuel with a long chain.
  ExprPtr e = mk_expr(RetE{v_num(0)});
  for (int i = 0; i < 50; ++i)
    e = mk_expr(LetE{"x", std::move(e), mk_expr(RetE{v_var("x")})});
  Machine m = plain_machine();
  auto r = m.run(state_of(e), 5);
  CHECK(std::holds_alternative<RunOutOfFuel>(r));
}

TEST_CASE("property: stuck operations stay stuck in generated states") {
  std::mt19937 rng(23);
  Machine m = plain_machine();
  GenPure gen(91);
  for (int i = 0; i < 50; ++i) {
    MachineState s = state_of(gen.program());
    // Arbitrary surrounding context: extra frames, env entries, store cells.
    if (rng() % 2) s.stack.frames.push_back(FrApp{v_num(1)});
    if (rng() % 2)
      s.stack.frames.push_back(
          FrLet{Env{}, "w", mk_expr(RetE{v_var("w")})});
    s.env = s.env.extended("q", v_num(7));
    s.store.alloc(v_num(9));

    MachineState p = s;
    p.focus = ProjE{Mode::Uncertain, v_dict({}), v_str("k")};
    Fuel fuel{10};
    auto r1 = m.step(p, fuel);
    const auto* stuck1 = std::get_if<Stuck>(&r1);
    REQUIRE(stuck1);
    CHECK(stuck1->reason.kind == StuckReason::Kind::UncertainOp);

    MachineState a = s;
    a.focus =
        AscribeE{mk_expr(RetE{v_num(1)}), ExprAnnot{t_f(t_num())}};
    auto r2 = m.step(a, fuel);
    const auto* stuck2 = std::get_if<Stuck>(&r2);
    REQUIRE(stuck2);
    CHECK(stuck2->reason.kind == StuckReason::Kind::UndischargedAscription);
  }
}

TEST_CASE("property: stepping changes stack depth by at most one") {
  GenPure gen(17);
  Machine m = plain_machine();
  for (int i = 0; i < 100; ++i) {
    MachineState s = state_of(gen.program());
    Fuel fuel{100000};
    while (!is_final(s)) {
      std::size_t before = s.stack.frames.size();
      auto r = m.step(s, fuel);
      const auto* st = std::get_if<Stepped>(&r);
      REQUIRE(st);
      std::size_t after = st->state.stack.frames.size();
      CHECK((after >= before ? after - before : before - after) <= 1);
      s = st->state;
    }
  }
}

TEST_CASE("property: oracle equivalence on the pure fragment") {
  GenPure gen(2024);
  Machine m = plain_machine();
  for (int i = 0; i < 500; ++i) {
    ExprPtr program = gen.program();

    auto mr = m.run(state_of(program), 100000);
    const auto* fin = std::get_if<RunFinal>(&mr);
    REQUIRE(fin);

    int fuel = 1000000;
    OracleResult oracle = oracle_eval(program, fuel);

    if (const auto* ret = std::get_if<RetE>(&fin->state.focus)) {
      REQUIRE(oracle.ret.has_value());
      auto closed = close(fin->state.env, ret->val);
      REQUIRE(closed.ok());
      CHECK(value_equal(closed.value(), *oracle.ret) == Eq::True);
    } else {
      CHECK(oracle.lam.has_value());
    }
  }
}

TEST_CASE("property: runs are deterministic") {
  GenPure gen(5150);
  Machine m = plain_machine();
  for (int i = 0; i < 50; ++i) {
    ExprPtr program = gen.program();
    auto r1 = m.run(state_of(program), 100000);
    auto r2 = m.run(state_of(program), 100000);
    const auto* f1 = std::get_if<RunFinal>(&r1);
    const auto* f2 = std::get_if<RunFinal>(&r2);
    REQUIRE(f1);
    REQUIRE(f2);
    CHECK(f1->steps == f2->steps);
    CHECK(state_identical(f1->state, f2->state));
  }
}

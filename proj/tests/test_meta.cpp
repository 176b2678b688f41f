#include <doctest.h>

#include "ovv/meta.hpp"
#include "ovv/parser.hpp"
#include "ovv/report.hpp"
#include "support/structural.hpp"

using namespace ovv;
using namespace ovv::testsupport;

namespace {

ExprPtr parse(const std::string& text) {
  auto r = parse_program(text);
  REQUIRE(r.ok());
  return r.value();
}

}  // namespace

TEST_CASE("registry rejects duplicate names") {
  MetaRegistry reg;
  CHECK(reg.add(make_id_meta()));
  CHECK_FALSE(reg.add(make_id_meta()));
  CHECK(reg.find("id"));
  CHECK(reg.find("nope") == nullptr);
}

TEST_CASE("invoking an unknown meta program fails") {
  MetaRegistry reg;
  MachineState s = initial_state(parse("ret 1"));
  CHECK_FALSE(invoke(reg, "chk_state", s, Span{}).ok());
}

TEST_CASE("the id meta program returns the state unchanged") {
  MetaRegistry reg;
  reg.add(make_id_meta());
  MachineState s = initial_state(parse("let x = ret 1 in ret x"));
  auto r = invoke(reg, "id", s, Span{});
  REQUIRE(r.ok());
  CHECK(state_identical(s, r.value()));
}

TEST_CASE("the chk_state meta program records one stage per invocation") {
  auto sink = std::make_shared<ProgressiveReport>();
  MetaRegistry reg = default_registry(sink);
  MachineState s = initial_state(parse("proj ? dict { \"k\" -> 1 } \"k\""));
  Span trigger;
  trigger.line = 9;
  auto r = invoke(reg, "chk_state", s, trigger);
  REQUIRE(r.ok());
  REQUIRE(sink->stages.size() == 1);
  CHECK(sink->stages[0].stage == 1);
  CHECK(sink->stages[0].trigger_line == 9);
  REQUIRE(sink->stages[0].ops.size() == 1);
  CHECK(sink->stages[0].ops[0].op == "proj");
  CHECK(sink->stages[0].ops[0].mode == Mode::Certain);

  auto again = invoke(reg, "chk_state", r.value(), trigger);
  REQUIRE(again.ok());
  CHECK(sink->stages.size() == 2);
  CHECK(sink->stages[1].stage == 2);
}

TEST_CASE("the chk_state meta program fails on rejected states") {
  auto sink = std::make_shared<ProgressiveReport>();
  MetaRegistry reg = default_registry(sink);
  MachineState s = initial_state(parse("proj ! dict { } \"k\""));
  CHECK_FALSE(invoke(reg, "chk_state", s, Span{}).ok());
  CHECK(sink->stages.empty());
}

TEST_CASE("rcc with the id meta program does not change the outcome") {
  auto sink = std::make_shared<ProgressiveReport>();
  MetaRegistry reg = default_registry(sink);
  Machine with_meta(&reg, ".");

  auto plain = parse("let x = ret 4 in ret x");
  auto wrapped = parse("let x = rcc id { ret 4 } in ret x");
  auto r1 = with_meta.run(initial_state(plain), 1000);
  auto r2 = with_meta.run(initial_state(wrapped), 1000);
  const auto* f1 = std::get_if<RunFinal>(&r1);
  const auto* f2 = std::get_if<RunFinal>(&r2);
  REQUIRE(f1);
  REQUIRE(f2);
  const auto* ret1 = std::get_if<RetE>(&f1->state.focus);
  const auto* ret2 = std::get_if<RetE>(&f2->state.focus);
  REQUIRE(ret1);
  REQUIRE(ret2);
  auto v1 = close(f1->state.env, ret1->val);
  auto v2 = close(f2->state.env, ret2->val);
  REQUIRE(v1.ok());
  REQUIRE(v2.ok());
  CHECK(value_equal(v1.value(), v2.value()) == Eq::True);
}

TEST_CASE("rcc without a registry is stuck") {
  Machine m(nullptr, ".");
  auto r = m.run(initial_state(parse("rcc id { ret 1 }")), 1000);
  const auto* stuck = std::get_if<RunStuck>(&r);
  REQUIRE(stuck);
  CHECK(stuck->reason.kind == StuckReason::Kind::MetaFailure);
}

TEST_CASE("rcc chk_state upgrades a projection in its continuation") {
  auto sink = std::make_shared<ProgressiveReport>();
  MetaRegistry reg = default_registry(sink);
  Machine m(&reg, ".");
  auto prog = parse(
      "let d = ret dict { \"k\" -> 5 } in rcc chk_state { proj ? d \"k\" }");
  auto r = m.run(initial_state(prog), 1000);
  const auto* fin = std::get_if<RunFinal>(&r);
  REQUIRE(fin);
  const auto* ret = std::get_if<RetE>(&fin->state.focus);
  REQUIRE(ret);
  auto v = close(fin->state.env, ret->val);
  REQUIRE(v.ok());
  CHECK(value_equal(v.value(), v_num(5)) == Eq::True);
  REQUIRE(sink->stages.size() == 1);
  REQUIRE(sink->stages[0].ops.size() == 1);
  CHECK(sink->stages[0].ops[0].mode == Mode::Certain);
}

TEST_CASE("report serialization format") {
  ProgressiveReport rep;
  rep.stages.push_back(ReportStage{1, 3, {ReportOp{2, "filterDb",
                                                   Mode::Certain},
                                          ReportOp{4, "joinDb",
                                                   Mode::Uncertain}}});
  CHECK(rep.serialize() ==
        "stage=1 line=2 op=filterDb mode=!\n"
        "stage=1 line=4 op=joinDb mode=?\n");
}

TEST_CASE("scan_state_ops walks focus then let frames, skipping thunks") {
  MachineState s = initial_state(parse("openDb ? \"a.csv\""));
  s.stack.frames.push_back(
      FrLet{Env{}, "x", parse("joinDb ? x \"k\" x \"k\"")});
  s.stack.frames.push_back(
      FrLet{Env{}, "y",
            parse("let u = filterDb ? y othunk { proj ? z \"k\" } in ret u")});
  auto ops = scan_state_ops(s);
  REQUIRE(ops.size() == 3);
  CHECK(ops[0].op == "openDb");
  CHECK(ops[1].op == "filterDb");  // top frame first
  CHECK(ops[2].op == "joinDb");
}

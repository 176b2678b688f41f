#include "ovv/meta.hpp"

#include "ovv/checker.hpp"
#include "ovv/report.hpp"

namespace ovv {

bool MetaRegistry::add(MetaProgram p) {
  return programs.emplace(p.name, p).second;
}

const MetaProgram* MetaRegistry::find(const std::string& name) const {
  auto it = programs.find(name);
  return it == programs.end() ? nullptr : &it->second;
}

Result<MachineState, std::string> invoke(const MetaRegistry& reg,
                                         const std::string& name,
                                         const MachineState& s, Span trigger) {
  using R = Result<MachineState, std::string>;
  const MetaProgram* p = reg.find(name);
  if (!p) return R::error("unknown meta program: " + name);
  return p->apply(s, trigger);
}

MetaProgram make_id_meta() {
  return MetaProgram{"id",
                     [](const MachineState& s, Span) { return s; }};
}

MetaProgram make_chk_state_meta(std::shared_ptr<ProgressiveReport> sink) {
  return MetaProgram{
      "chk_state",
      [sink = std::move(sink)](const MachineState& s, Span trigger)
          -> Result<MachineState, std::string> {
        auto checked = chk_state(s);
        if (!checked.ok())
          return Result<MachineState, std::string>::error(
              checked.err().format());
        if (sink) {
          ReportStage stage;
          stage.stage = static_cast<int>(sink->stages.size()) + 1;
          stage.trigger_line = trigger.line;
          stage.ops = scan_state_ops(checked.value());
          sink->stages.push_back(std::move(stage));
        }
        return checked.value();
      }};
}

MetaRegistry default_registry(std::shared_ptr<ProgressiveReport> sink) {
  MetaRegistry reg;
  reg.add(make_id_meta());
  reg.add(make_chk_state_meta(std::move(sink)));
  return reg;
}

}  // namespace ovv

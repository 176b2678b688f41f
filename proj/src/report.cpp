#include "ovv/report.hpp"

#include <sstream>

namespace ovv {

namespace {

void scan_pre(const PreExpr& pre, Span src, std::vector<ReportOp>& out);

void scan_expr(const ExprPtr& e, std::vector<ReportOp>& out) {
  scan_pre(e->pre, e->src, out);
}

void scan_pre(const PreExpr& pre, Span src, std::vector<ReportOp>& out) {
  if (const auto* n = std::get_if<ProjE>(&pre)) {
    out.push_back({src.line, "proj", n->mode});
  } else if (const auto* n = std::get_if<OpenDbE>(&pre)) {
    out.push_back({src.line, "openDb", n->mode});
  } else if (const auto* n = std::get_if<FilterDbE>(&pre)) {
    out.push_back({src.line, "filterDb", n->mode});
  } else if (const auto* n = std::get_if<JoinDbE>(&pre)) {
    out.push_back({src.line, "joinDb", n->mode});
  } else if (const auto* n = std::get_if<AppE>(&pre)) {
    scan_expr(n->fun, out);
  } else if (const auto* n = std::get_if<LamE>(&pre)) {
    scan_expr(n->body, out);
  } else if (const auto* n = std::get_if<LetE>(&pre)) {
    scan_expr(n->bound, out);
    scan_expr(n->body, out);
  } else if (const auto* n = std::get_if<AscribeE>(&pre)) {
    scan_expr(n->body, out);
  } else if (const auto* n = std::get_if<RccE>(&pre)) {
    scan_expr(n->cont, out);
  }
}

}  // namespace

std::vector<ReportOp> scan_state_ops(const MachineState& s) {
  std::vector<ReportOp> out;
  scan_pre(s.focus, s.focus_src, out);
  for (auto it = s.stack.frames.rbegin(); it != s.stack.frames.rend(); ++it)
    if (const auto* fl = std::get_if<FrLet>(&*it)) scan_expr(fl->body, out);
  return out;
}

std::string ProgressiveReport::serialize() const {
  std::ostringstream os;
  for (const auto& stage : stages)
    for (const auto& op : stage.ops)
      os << "stage=" << stage.stage << " line=" << op.line << " op=" << op.op
         << " mode=" << mode_mark(op.mode) << "\n";
  return os.str();
}

}  // namespace ovv

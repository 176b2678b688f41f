#include "ovv/libdb.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace ovv {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_integer_cell(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

ValuePtr cell_value(const std::string& cell) {
  if (is_integer_cell(cell)) return v_num(std::stoll(cell));
  return v_str(cell);
}

StepResult stuck(StuckReason::Kind k, std::string detail, Span src) {
  return Stuck{StuckReason{k, std::move(detail)}, src};
}

}  // namespace

Result<CsvTable, CsvError> parse_csv(const std::string& bytes) {
  using R = Result<CsvTable, CsvError>;
  std::vector<std::string> lines;
  std::string current;
  for (char c : bytes) {
    if (c == '\n') {
      lines.push_back(std::move(current));
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  if (lines.empty()) return R::error({"empty file"});

  CsvTable t;
  t.headers = split_line(lines[0]);
  std::set<std::string> seen;
  for (const auto& h : t.headers)
    if (!seen.insert(h).second)
      return R::error({"duplicate header: " + h});
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    auto cells = split_line(lines[i]);
    if (cells.size() != t.headers.size())
      return R::error({"row " + std::to_string(i + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(t.headers.size())});
    t.rows.push_back(std::move(cells));
  }
  return t;
}

VType synth_row_type(const std::vector<ValuePtr>& rows) {
  if (rows.empty()) return t_unknown();
  const auto* first = std::get_if<DictV>(&rows[0]->pre);
  if (!first) return t_unknown();
  std::size_t width = first->entries->entries.size();
  for (const auto& r : rows) {
    const auto* d = std::get_if<DictV>(&r->pre);
    if (!d || d->entries->entries.size() != width) return t_unknown();
    for (std::size_t i = 0; i < width; ++i)
      if (value_equal(d->entries->entries[i].first,
                      first->entries->entries[i].first) != Eq::True)
        return t_unknown();
  }
  DictType out;
  for (std::size_t i = 0; i < width; ++i) {
    bool all_num = true, all_str = true;
    for (const auto& r : rows) {
      const auto& cell = std::get<DictV>(r->pre).entries->entries[i].second;
      all_num = all_num && std::holds_alternative<NumV>(cell->pre);
      all_str = all_str && std::holds_alternative<StrV>(cell->pre);
    }
    VType col = all_num ? t_num() : all_str ? t_str() : t_unknown();
    out.entries.emplace_back(first->entries->entries[i].first, col);
  }
  return t_dict(std::move(out));
}

ValuePtr table_to_db(const CsvTable& t) {
  std::vector<ValuePtr> rows;
  rows.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    DictVal entries;
    for (std::size_t i = 0; i < t.headers.size(); ++i)
      entries.entries.emplace_back(v_str(t.headers[i]), cell_value(r[i]));
    rows.push_back(v_dict(std::move(entries)));
  }
  std::vector<ValuePtr> annotated;
  annotated.reserve(rows.size());
  for (const auto& r : rows) {
    VType rt = synth_row_type({r});
    annotated.push_back(with_annot(r, rt));
  }
  VType row_type = annotated.empty() ? VType() : synth_row_type(annotated);
  if (annotated.empty()) {
    // Keep the header schema even with no rows to infer from.
    DictType d;
    for (const auto& h : t.headers)
      d.entries.emplace_back(v_str(h), t_unknown());
    row_type = t_dict(std::move(d));
  }
  return v_db(std::move(annotated), ValueAnnot{t_db(row_type)});
}

namespace {

bool safe_relative_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return false;
  std::stringstream ss(path);
  std::string seg;
  while (std::getline(ss, seg, '/'))
    if (seg == "..") return false;
  return true;
}

}  // namespace

StepResult step_open_db(const Machine& m, const MachineState& s, Mode,
                        const ValuePtr& path) {
  auto p = close(s.env, path);
  if (!p.ok()) return Stuck{p.err(), path->src};
  const auto* str = std::get_if<StrV>(&p.value()->pre);
  if (!str)
    return stuck(StuckReason::Kind::DynamicTypeError,
                 "openDb path is not a string", path->src);
  if (!safe_relative_path(str->s))
    return stuck(StuckReason::Kind::IoError,
                 "path escapes the data root: " + str->s, path->src);
  std::string full = m.data_root().empty() ? str->s
                                           : m.data_root() + "/" + str->s;
  std::ifstream in(full, std::ios::binary);
  if (!in)
    return stuck(StuckReason::Kind::IoError, "cannot read " + str->s,
                 path->src);
  std::ostringstream buf;
  buf << in.rdbuf();
  auto table = parse_csv(buf.str());
  if (!table.ok())
    return stuck(StuckReason::Kind::IoError,
                 str->s + ": " + table.err().detail, path->src);
  MachineState out = s;
  out.focus = RetE{table_to_db(table.value())};
  return Stepped{std::move(out), "openDb"};
}

StepResult step_filter_db(const Machine& m, const MachineState& s, Mode,
                          const ValuePtr& db, const ValuePtr& pred,
                          Fuel& fuel) {
  auto d = close(s.env, db);
  if (!d.ok()) return Stuck{d.err(), db->src};
  const auto* rows = std::get_if<DbV>(&d.value()->pre);
  if (!rows)
    return stuck(StuckReason::Kind::DynamicTypeError,
                 "filterDb of a non-db value", db->src);
  auto p = close(s.env, pred);
  if (!p.ok()) return Stuck{p.err(), pred->src};
  const auto* thunk = std::get_if<ThunkV>(&p.value()->pre);
  if (!thunk)
    return stuck(StuckReason::Kind::DynamicTypeError,
                 "filterDb predicate is not a thunk", pred->src);

  Store store = s.store;
  std::vector<ValuePtr> kept;
  for (const auto& row : rows->rows) {
    MachineState sub;
    sub.store = store;
    sub.stack.frames.push_back(FrApp{row});
    sub.env = *thunk->env;
    sub.focus = thunk->body->pre;
    sub.focus_src = thunk->body->src;
    RunResult r = m.run_with(std::move(sub), fuel);
    if (const auto* stk = std::get_if<RunStuck>(&r))
      return Stuck{stk->reason, stk->src};
    if (const auto* oof = std::get_if<RunOutOfFuel>(&r)) {
      MachineState parent = s;
      parent.store = oof->state.store;
      return NoFuel{std::move(parent)};
    }
    const auto& fin = std::get<RunFinal>(r);
    const auto* ret = std::get_if<RetE>(&fin.state.focus);
    if (!ret)
      return stuck(StuckReason::Kind::DynamicTypeError,
                   "filterDb predicate ended in a function", pred->src);
    auto rv = close(fin.state.env, ret->val);
    if (!rv.ok()) return Stuck{rv.err(), pred->src};
    const auto* b = std::get_if<BoolV>(&rv.value()->pre);
    if (!b)
      return stuck(StuckReason::Kind::DynamicTypeError,
                   "filterDb predicate returned a non-boolean", pred->src);
    store = fin.state.store;
    if (b->b) kept.push_back(row);
  }

  ValueAnnot annot;
  if (kept.empty())
    annot = d.value()->annot;
  else
    annot = ValueAnnot{t_db(synth_row_type(kept))};
  MachineState out = s;
  out.store = std::move(store);
  out.focus = RetE{v_db(std::move(kept), std::move(annot), s.focus_src)};
  return Stepped{std::move(out), "filterDb"};
}

namespace {

const ValuePtr* row_cell(const ValuePtr& row, const ValuePtr& key,
                         StepResult& err, Span src) {
  const auto* d = std::get_if<DictV>(&row->pre);
  if (!d) {
    err = stuck(StuckReason::Kind::DynamicTypeError, "join row is not a dict",
                src);
    return nullptr;
  }
  const auto& entries = d->entries->entries;
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    Eq eq = value_equal(it->first, key);
    if (eq == Eq::Incomparable) {
      err = stuck(StuckReason::Kind::Incomparable, "join key not comparable",
                  src);
      return nullptr;
    }
    if (eq == Eq::True) return &it->second;
  }
  err = stuck(StuckReason::Kind::MissingField, "join key absent from row",
              src);
  return nullptr;
}

}  // namespace

StepResult step_join_db(const MachineState& s, Mode, const ValuePtr& db1,
                        const ValuePtr& key1, const ValuePtr& db2,
                        const ValuePtr& key2) {
  auto d1 = close(s.env, db1);
  if (!d1.ok()) return Stuck{d1.err(), db1->src};
  auto d2 = close(s.env, db2);
  if (!d2.ok()) return Stuck{d2.err(), db2->src};
  const auto* rows1 = std::get_if<DbV>(&d1.value()->pre);
  const auto* rows2 = std::get_if<DbV>(&d2.value()->pre);
  if (!rows1 || !rows2)
    return stuck(StuckReason::Kind::DynamicTypeError,
                 "joinDb of a non-db value",
                 rows1 ? db2->src : db1->src);
  auto k1 = close(s.env, key1);
  if (!k1.ok()) return Stuck{k1.err(), key1->src};
  auto k2 = close(s.env, key2);
  if (!k2.ok()) return Stuck{k2.err(), key2->src};

  std::vector<ValuePtr> merged;
  for (const auto& r1 : rows1->rows) {
    StepResult err = Final{s};
    const ValuePtr* c1 = row_cell(r1, k1.value(), err, key1->src);
    if (!c1) return err;
    for (const auto& r2 : rows2->rows) {
      const ValuePtr* c2 = row_cell(r2, k2.value(), err, key2->src);
      if (!c2) return err;
      Eq eq = value_equal(*c1, *c2);
      if (eq == Eq::Incomparable)
        return stuck(StuckReason::Kind::Incomparable,
                     "join cells not comparable", key1->src);
      if (eq != Eq::True) continue;
      DictVal out;
      const auto& e1 = std::get<DictV>(r1->pre).entries->entries;
      const auto& e2 = std::get<DictV>(r2->pre).entries->entries;
      out.entries = e1;
      out.entries.insert(out.entries.end(), e2.begin(), e2.end());
      ValuePtr row = v_dict(std::move(out));
      merged.push_back(with_annot(row, synth_row_type({row})));
    }
  }

  ValueAnnot annot{t_db(synth_row_type(merged))};
  MachineState out = s;
  out.focus = RetE{v_db(std::move(merged), std::move(annot), s.focus_src)};
  return Stepped{std::move(out), "joinDb"};
}

}  // namespace ovv

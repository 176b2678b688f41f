#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ovv/checker.hpp"
#include "ovv/machine.hpp"
#include "ovv/meta.hpp"
#include "ovv/parser.hpp"
#include "ovv/printer.hpp"
#include "ovv/report.hpp"

namespace {

constexpr int kExitFinal = 0;
constexpr int kExitRejected = 1;
constexpr int kExitStuck = 2;
constexpr int kExitOutOfFuel = 3;
constexpr int kExitInput = 4;

std::string dir_of(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? "." : path.substr(0, slash);
}

int load_program(const std::string& file, ovv::ExprPtr& out) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    std::cerr << file << ": cannot read file\n";
    return kExitInput;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  auto parsed = ovv::parse_program(buf.str());
  if (!parsed.ok()) {
    std::cerr << file << ":" << parsed.err().line << ":" << parsed.err().col
              << ": [parse] " << parsed.err().message << "\n";
    return kExitInput;
  }
  out = parsed.value();
  return kExitFinal;
}

int run_command(const std::string& file, const std::string& data_root,
                std::int64_t fuel, bool trace, bool report) {
  ovv::ExprPtr program;
  if (int rc = load_program(file, program)) return rc;

  auto sink = std::make_shared<ovv::ProgressiveReport>();
  ovv::MetaRegistry registry = ovv::default_registry(sink);
  std::string root = data_root.empty() ? dir_of(file) : data_root;
  ovv::Machine machine(&registry, root);
  if (trace) {
    machine.set_trace([](const ovv::TraceEvent& ev) {
      std::cerr << "step=" << ev.index << " rule=" << ev.rule
                << " at=" << ev.src.line << ":" << ev.src.col
                << " depth=" << ev.depth << "\n";
    });
  }

  ovv::RunResult result = machine.run(ovv::initial_state(program), fuel);
  std::ostream& value_out = report ? std::cerr : std::cout;
  int rc = kExitFinal;
  if (const auto* fin = std::get_if<ovv::RunFinal>(&result)) {
    if (const auto* ret = std::get_if<ovv::RetE>(&fin->state.focus)) {
      auto v = ovv::close(fin->state.env, ret->val);
      if (v.ok())
        value_out << ovv::render_result(v.value(), trace) << "\n";
      else
        value_out << "<unclosable result>\n";
    } else {
      value_out << "<function>\n";
    }
  } else if (const auto* stuck = std::get_if<ovv::RunStuck>(&result)) {
    std::cerr << file << ":" << stuck->src.line << ":" << stuck->src.col
              << ": [" << ovv::stuck_kind_name(stuck->reason.kind) << "] "
              << stuck->reason.detail << "\n";
    rc = kExitStuck;
  } else {
    std::cerr << file << ": out of fuel\n";
    rc = kExitOutOfFuel;
  }
  if (report) std::cout << sink->serialize();
  return rc;
}

int check_command(const std::string& file) {
  ovv::ExprPtr program;
  if (int rc = load_program(file, program)) return rc;

  ovv::TypingCtx empty;
  auto result = ovv::syn_exp(empty, program);
  if (!result.ok()) {
    std::cerr << result.err().format(file) << "\n";
    return kExitRejected;
  }
  std::cout << ovv::render(result.value().type) << "\n";
  std::cout << ovv::print_expr(result.value().expr) << "\n";
  return kExitFinal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"λ-VMF interpreter and progressive type checker"};
  app.require_subcommand(1);

  std::string file;
  std::string data_root;
  std::int64_t fuel = 1000000;
  bool trace = false;
  bool report = false;

  CLI::App* run = app.add_subcommand("run", "run a program");
  run->add_option("file", file, "program file")->required();
  run->add_option("--data-root", data_root,
                  "directory for database files (default: program directory)");
  run->add_option("--fuel", fuel, "step budget")
      ->check(CLI::PositiveNumber);
  run->add_flag("--trace", trace, "print one line per machine step");
  run->add_flag("--report", report, "print the progressive typing report");

  CLI::App* check = app.add_subcommand("check", "type-check a program");
  check->add_option("file", file, "program file")->required();

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(check)) return check_command(file);
  return run_command(file, data_root, fuel, trace, report);
}

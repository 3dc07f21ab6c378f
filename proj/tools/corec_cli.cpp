#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corec/corec.h"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

struct Failure {
  int exit_code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kInputError, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check(corec_status status) {
  if (status == COREC_OK) return;
  const int code = status == COREC_ERR_CHECK_FAILED ? kCheckFailed : kInputError;
  throw Failure{code, std::string(corec_status_name(status)) + ": " + corec_last_error()};
}

/// Owns a string returned by the library.
class Owned {
 public:
  ~Owned() { corec_string_free(ptr_); }
  char** out() { return &ptr_; }
  std::string str() const { return ptr_ ? std::string(ptr_) : std::string(); }

 private:
  char* ptr_ = nullptr;
};

class Session {
 public:
  Session() { check(corec_session_open(&ptr_)); }
  ~Session() { corec_session_close(ptr_); }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;
  corec_session* get() const { return ptr_; }

 private:
  corec_session* ptr_ = nullptr;
};

void print(const std::string& text) {
  std::cout << text;
  if (!text.empty() && text.back() != '\n') std::cout << '\n';
}

corec_source source_for(const std::string& path, const std::string& requested) {
  std::string kind = requested;
  if (kind.empty()) {
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    kind = ext == "gnf" ? "gnf" : ext == "ccs" ? "ccs" : "system";
  }
  if (kind == "gnf") return COREC_SOURCE_GNF;
  if (kind == "ccs") return COREC_SOURCE_CCS;
  return COREC_SOURCE_SYSTEM;
}

std::pair<std::string, std::size_t> split_observe(const std::string& spec) {
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos || colon == 0) throw Failure{kInputError, "expected VAR:DEPTH, got '" + spec + "'"};
  try {
    std::size_t used = 0;
    const unsigned long depth = std::stoul(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing");
    return {spec.substr(0, colon), depth};
  } catch (const std::logic_error&) {
    throw Failure{kInputError, "bad depth in '" + spec + "'"};
  }
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corec: corecursive definitions over streams, trees, languages and processes"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.set_version_flag("--version", std::string(corec_version()));

  std::string file;
  std::string source;

  auto* solve = app.add_subcommand("solve", "Solve an equation system and observe variables");
  std::vector<std::string> observe;
  std::size_t diagram_depth = 0;
  solve->add_option("file", file, "System, grammar (.gnf) or CCS (.ccs) file")->required();
  solve->add_option("--observe", observe, "VAR:DEPTH, repeatable; default every variable at depth 8");
  solve->add_option("--source", source, "Input format")->check(CLI::IsMember({"system", "gnf", "ccs"}));
  solve->add_option("--diagram", diagram_depth, "Also run the diagram check to this depth");

  auto* bde = app.add_subcommand("bde", "Apply an operation defined by behavioral differential equations");
  std::string apply;
  std::size_t prefix = 10;
  bde->add_option("file", file, "BDE file")->required();
  bde->add_option("--apply", apply, "F:ARGS with stream literals separated by ';'")->required();
  bde->add_option("--prefix", prefix, "Number of observed steps");

  auto* circuit = app.add_subcommand("circuit", "Compile and run a stream circuit");
  std::string inputs;
  bool show = false;
  circuit->add_option("file", file, "Circuit JSON file")->required();
  circuit->add_option("--input", inputs, "Input streams: literals by sorted input id, or id=literal; ';' separated");
  circuit->add_option("--prefix", prefix, "Number of observed steps");
  circuit->add_flag("--show", show, "Print the compiled definitions");

  auto* member = app.add_subcommand("member", "Word membership in the language of a GNF grammar");
  std::string word;
  member->add_option("grammar", file, "Grammar file")->required();
  member->add_option("word", word, "Word; use \"\" for the empty word")->required();

  auto* ccs = app.add_subcommand("ccs", "Observe CCS agents");
  std::string agent;
  std::size_t depth = 4;
  std::vector<std::string> bisim;
  ccs->add_option("file", file, "CCS definitions")->required();
  ccs->add_option("--agent", agent, "Agent expression");
  ccs->add_option("--depth", depth, "Observation depth");
  ccs->add_option("--bisim", bisim, "Two agents to compare up to the depth")->expected(2);

  auto* check_cmd = app.add_subcommand("check", "Run the self-check suites");
  std::string suite;
  check_cmd->add_option("--suite", suite, std::string("One of: ") + corec_suite_names());

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  const corec_format fmt = format == "json" ? COREC_JSON : COREC_TEXT;
  try {
    Session session;
    if (solve->parsed()) {
      corec_system sys = 0;
      check(corec_system_load(session.get(), source_for(file, source), read_file(file).c_str(), &sys));
      std::vector<std::pair<std::string, std::size_t>> wanted;
      for (const auto& o : observe) wanted.push_back(split_observe(o));
      if (wanted.empty()) {
        Owned vars;
        check(corec_system_vars(session.get(), sys, COREC_TEXT, vars.out()));
        for (const auto& v : lines(vars.str())) wanted.emplace_back(v, 8);
      }
      std::string json = "[";
      for (const auto& [var, d] : wanted) {
        Owned text;
        check(corec_observe(session.get(), sys, var.c_str(), d, fmt, text.out()));
        if (fmt == COREC_JSON) {
          json += (json.size() > 1 ? "," : "") + text.str();
        } else {
          print(text.str());
        }
      }
      if (fmt == COREC_JSON) print(json + "]");
      if (diagram_depth > 0) {
        Owned report;
        const corec_status st = corec_diagram_check(session.get(), sys, diagram_depth, fmt, report.out());
        print(report.str());
        check(st);
      }
      return kOk;
    }
    if (bde->parsed()) {
      const auto colon = apply.find(':');
      const std::string fn = apply.substr(0, colon);
      const std::string args = colon == std::string::npos ? "" : apply.substr(colon + 1);
      Owned text;
      check(corec_bde_apply(session.get(), read_file(file).c_str(), fn.c_str(), args.c_str(), prefix, fmt,
                            text.out()));
      print(text.str());
      return kOk;
    }
    if (circuit->parsed()) {
      const std::string json = read_file(file);
      if (show) {
        Owned defs;
        check(corec_circuit_compile(json.c_str(), defs.out()));
        print(defs.str());
      }
      if (!inputs.empty() || !show) {
        Owned text;
        check(corec_circuit_run(session.get(), json.c_str(), inputs.c_str(), prefix, fmt, text.out()));
        print(text.str());
      }
      return kOk;
    }
    if (member->parsed()) {
      corec_system sys = 0;
      check(corec_system_load(session.get(), COREC_SOURCE_GNF, read_file(file).c_str(), &sys));
      Owned vars;
      check(corec_system_vars(session.get(), sys, COREC_TEXT, vars.out()));
      const std::string start = lines(vars.str()).front();
      int result = 0;
      check(corec_member(session.get(), sys, start.c_str(), word.c_str(), &result));
      if (fmt == COREC_JSON) {
        print(std::string("{\"member\":") + (result ? "true" : "false") + "}");
      } else {
        print(result ? "true" : "false");
      }
      return kOk;
    }
    if (ccs->parsed()) {
      if (agent.empty() && bisim.empty()) throw Failure{kInputError, "ccs needs --agent or --bisim"};
      corec_system sys = 0;
      check(corec_system_load(session.get(), COREC_SOURCE_CCS, read_file(file).c_str(), &sys));
      if (!agent.empty()) {
        Owned text;
        check(corec_ccs_agent(session.get(), sys, agent.c_str(), depth, fmt, text.out()));
        print(text.str());
      }
      if (!bisim.empty()) {
        int equal = 0;
        Owned report;
        check(corec_bounded_equal(session.get(), sys, bisim[0].c_str(), bisim[1].c_str(), depth, &equal,
                                  report.out()));
        print(report.str());
        if (!equal) return kCheckFailed;
      }
      return kOk;
    }
    if (check_cmd->parsed()) {
      Owned report;
      int all_passed = 0;
      check(corec_run_suite(suite.c_str(), fmt, report.out(), &all_passed));
      print(report.str());
      return all_passed ? kOk : kCheckFailed;
    }
  } catch (const Failure& f) {
    std::cerr << "corec: " << f.message << "\n";
    return f.exit_code;
  }
  return kInputError;
}

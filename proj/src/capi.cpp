#include "corec/corec.h"

#include <algorithm>
#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corec/checking.hpp"
#include "corec/frontends.hpp"
#include "corec/instances.hpp"
#include "corec/oracles.hpp"

using corec::Error;
using corec::ErrorCode;
using Json = nlohmann::ordered_json;

namespace {

struct LoadedSystem {
  corec_source source = COREC_SOURCE_SYSTEM;
  corec::System system;
  corec::Solution solution;
  std::optional<corec::CcsFile> ccs_file;
  std::optional<corec::CompiledCcs> ccs;
};

}  // namespace

struct corec_session {
  corec::Engine engine;
  std::vector<LoadedSystem> systems;
};

namespace {

thread_local std::string last_error;

corec_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError:
      return COREC_ERR_SYNTAX;
    case ErrorCode::UnknownSymbol:
    case ErrorCode::UnknownOracle:
    case ErrorCode::UnknownSuite:
      return COREC_ERR_UNKNOWN_NAME;
    case ErrorCode::InvalidHandle:
      return COREC_ERR_INVALID_HANDLE;
    case ErrorCode::RuleDiverged:
      return COREC_ERR_DIVERGED;
    case ErrorCode::InvalidArgument:
      return COREC_ERR_ARGUMENT;
    default:
      return COREC_ERR_INPUT;
  }
}

template <typename F>
corec_status guard(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const Error& e) {
    last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    last_error = std::string("internal: ") + e.what();
    return COREC_ERR_INTERNAL;
  } catch (...) {
    last_error = "internal: unknown exception";
    return COREC_ERR_INTERNAL;
  }
}

corec_status fail(corec_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string str(const char* s) { return s ? std::string(s) : std::string(); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = text.find(sep, start);
    std::string piece = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    const auto first = piece.find_first_not_of(" \t");
    const auto last = piece.find_last_not_of(" \t");
    out.push_back(first == std::string::npos ? "" : piece.substr(first, last - first + 1));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

// Rendering --------------------------------------------------------------------

void accepted_words(const corec::ObservationTree& t, const corec::BehaviorKind& kind, const std::string& word,
                    std::vector<std::string>& out) {
  if (t.cut) return;
  if (std::get<bool>(t.label)) out.push_back(word.empty() ? "eps" : word);
  const bool spaced = std::any_of(kind.alphabet().begin(), kind.alphabet().end(),
                                  [](const std::string& a) { return a.size() != 1; });
  for (const auto& [port, child] : t.children) {
    const std::string letter = kind.port_name(port);
    accepted_words(child, kind, word.empty() || !spaced ? word + letter : word + " " + letter, out);
  }
}

std::string tree_text(const corec::ObservationTree& t) {
  if (t.cut) return "*";
  std::string out = corec::to_string(t.label);
  if (std::all_of(t.children.begin(), t.children.end(), [](const auto& c) { return c.second.cut; })) return out;
  out += "(";
  for (std::size_t i = 0; i < t.children.size(); ++i) out += (i ? ", " : "") + tree_text(t.children[i].second);
  return out + ")";
}

Json tree_json(const corec::ObservationTree& t, const corec::BehaviorKind& kind) {
  if (t.cut) return nullptr;
  Json j;
  j["label"] = corec::to_string(t.label);
  Json kids = Json::array();
  for (const auto& [port, child] : t.children) {
    kids.push_back({{"port", kind.port_name(port)}, {"next", tree_json(child, kind)}});
  }
  j["children"] = std::move(kids);
  return j;
}

/// Text body and JSON value of an observation, by kind.
std::pair<std::string, Json> render(const corec::ObservationTree& t, const corec::BehaviorKind& kind) {
  switch (kind.tag()) {
    case corec::KindTag::Stream: {
      std::string text;
      Json values = Json::array();
      for (const auto& v : corec::stream_prefix(t)) {
        text += (text.empty() ? "" : " ") + corec::to_string(v);
        values.push_back(corec::to_string(v));
      }
      return {text, values};
    }
    case corec::KindTag::Language: {
      std::vector<std::string> words;
      accepted_words(t, kind, "", words);
      std::string text = "{";
      for (std::size_t i = 0; i < words.size(); ++i) text += (i ? ", " : "") + words[i];
      return {text + "}", Json(words)};
    }
    case corec::KindTag::Process:
      return {corec::print_process_tree(t, kind.actions()), tree_json(t, kind)};
    case corec::KindTag::Tree:
      break;
  }
  return {tree_text(t), tree_json(t, kind)};
}

std::string observation(corec::Engine& engine, corec::SolutionHandle h, const std::string& name,
                        std::size_t depth, corec_format format) {
  const corec::BehaviorKind& kind = engine.kind_of(h);
  auto [text, json] = render(engine.observe(h, depth), kind);
  if (format == COREC_JSON) {
    Json j{{"name", name}, {"kind", corec::to_string(kind.tag())}, {"depth", depth}, {"value", json}};
    return j.dump();
  }
  return name + ": " + text;
}

LoadedSystem& loaded(corec_session* s, corec_system id) {
  if (id >= s->systems.size()) throw Error(ErrorCode::InvalidHandle, "no system " + std::to_string(id));
  return s->systems[id];
}

corec::SolutionHandle var_handle(const LoadedSystem& sys, const std::string& var) {
  if (!sys.solution.contains(corec::VarId(var))) throw Error(ErrorCode::UnknownSymbol, "unknown variable '" + var + "'");
  return sys.solution.at(var);
}

/// A CCS agent expression over the system's variables, or a plain variable.
corec::SolutionHandle agent_handle(corec_session* s, LoadedSystem& sys, const std::string& text) {
  if (!sys.ccs) return var_handle(sys, text);
  const corec::Agent agent = corec::parse_agent(text, *sys.ccs_file);
  if (agent.kind == corec::Agent::Kind::Var) return var_handle(sys, agent.name);
  const corec::Term term = corec::agent_term(*sys.ccs, agent);
  corec::Binding binding;
  for (const auto& [v, h] : sys.solution.entries()) binding.emplace(v, h);
  return s->engine.interpret(sys.ccs->system.table, term, binding);
}

corec::SolutionHandle stream_arg(corec::Engine& engine, const corec::TablePtr& table, const std::string& text) {
  const corec::StreamLiteral lit = corec::parse_stream_literal(text);
  return corec::instances::eventually_periodic(engine, table, lit.prefix, lit.period);
}

Json report_json(const std::string& suite, const corec::CheckReport& r) {
  Json j{{"suite", suite}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}};
  if (r.witness) j["witness"] = corec::to_string(*r.witness);
  return j;
}

}  // namespace

extern "C" {

const char* corec_version(void) { return "1.0.0"; }

const char* corec_status_name(corec_status status) {
  switch (status) {
    case COREC_OK:
      return "ok";
    case COREC_ERR_SYNTAX:
      return "syntax error";
    case COREC_ERR_INPUT:
      return "invalid input";
    case COREC_ERR_UNKNOWN_NAME:
      return "unknown name";
    case COREC_ERR_INVALID_HANDLE:
      return "invalid handle";
    case COREC_ERR_DIVERGED:
      return "rule diverged";
    case COREC_ERR_CHECK_FAILED:
      return "check failed";
    case COREC_ERR_INTERNAL:
      return "internal error";
    case COREC_ERR_ARGUMENT:
      return "invalid argument";
  }
  return "unknown status";
}

const char* corec_last_error(void) { return last_error.c_str(); }

void corec_string_free(char* text) { std::free(text); }

corec_status corec_session_open(corec_session** out) {
  if (!out) return fail(COREC_ERR_ARGUMENT, "null out-parameter");
  return guard([&] {
    *out = new corec_session();
    return COREC_OK;
  });
}

void corec_session_close(corec_session* session) { delete session; }

corec_status corec_system_load(corec_session* session, corec_source source, const char* text, corec_system* out) {
  if (!session || !text || !out) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    LoadedSystem sys;
    sys.source = source;
    switch (source) {
      case COREC_SOURCE_SYSTEM:
        sys.system = corec::parse_system(text);
        break;
      case COREC_SOURCE_GNF:
        sys.system = corec::compile_gnf(corec::parse_gnf(text));
        break;
      case COREC_SOURCE_CCS:
        sys.ccs_file = corec::parse_ccs(text);
        sys.ccs = corec::compile_ccs(*sys.ccs_file);
        sys.system = sys.ccs->system;
        break;
      default:
        return fail(COREC_ERR_ARGUMENT, "unknown source format");
    }
    sys.solution = session->engine.solve_system(sys.system);
    session->systems.push_back(std::move(sys));
    *out = static_cast<corec_system>(session->systems.size() - 1);
    return COREC_OK;
  });
}

corec_status corec_system_vars(corec_session* session, corec_system system, corec_format format, char** out) {
  if (!session || !out) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    const LoadedSystem& sys = loaded(session, system);
    std::string text;
    Json j = Json::array();
    for (const auto& [v, h] : sys.solution.entries()) {
      text += v.name() + "\n";
      j.push_back(v.name());
    }
    *out = dup(format == COREC_JSON ? j.dump() : text);
    return COREC_OK;
  });
}

corec_status corec_observe(corec_session* session, corec_system system, const char* var, size_t depth,
                           corec_format format, char** out) {
  if (!session || !var || !out) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    const corec::SolutionHandle h = var_handle(loaded(session, system), var);
    *out = dup(observation(session->engine, h, var, depth, format));
    return COREC_OK;
  });
}

corec_status corec_diagram_check(corec_session* session, corec_system system, size_t depth, corec_format format,
                                 char** out) {
  if (!session || !out) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    const LoadedSystem& sys = loaded(session, system);
    const corec::CheckReport r = corec::diagram_check(session->engine, sys.system, sys.solution, depth);
    *out = dup(format == COREC_JSON ? report_json("diagram", r).dump() : corec::to_text(r));
    if (!r.pass) return fail(COREC_ERR_CHECK_FAILED, corec::to_text(r));
    return COREC_OK;
  });
}

corec_status corec_member(corec_session* session, corec_system system, const char* var, const char* word,
                          int* result) {
  if (!session || !var || !word || !result) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    const LoadedSystem& sys = loaded(session, system);
    const corec::SolutionHandle h = var_handle(sys, var);
    const corec::BehaviorKind& kind = session->engine.kind_of(h);
    if (kind.tag() != corec::KindTag::Language) {
      return fail(COREC_ERR_ARGUMENT, "'" + std::string(var) + "' is not a language");
    }
    const std::vector<corec::Port> ports = corec::instances::word_ports(kind, word);
    *result = corec::instances::member(session->engine, h, ports) ? 1 : 0;
    return COREC_OK;
  });
}

corec_status corec_ccs_agent(corec_session* session, corec_system system, const char* agent, size_t depth,
                             corec_format format, char** out) {
  if (!session || !agent || !out) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    LoadedSystem& sys = loaded(session, system);
    const corec::SolutionHandle h = agent_handle(session, sys, agent);
    *out = dup(observation(session->engine, h, agent, depth, format));
    return COREC_OK;
  });
}

corec_status corec_bounded_equal(corec_session* session, corec_system system, const char* left, const char* right,
                                 size_t depth, int* result, char** out) {
  if (!session || !left || !right || !result) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    LoadedSystem& sys = loaded(session, system);
    const corec::SolutionHandle a = agent_handle(session, sys, left);
    const corec::SolutionHandle b = agent_handle(session, sys, right);
    const corec::CheckReport r = corec::compare_report(session->engine, a, b, depth,
                                                       std::string(left) + " ~ " + right);
    *result = r.pass ? 1 : 0;
    if (out) *out = dup(corec::to_text(r));
    return COREC_OK;
  });
}

corec_status corec_bde_apply(corec_session* session, const char* bde_text, const char* function, const char* args,
                             size_t prefix, corec_format format, char** out) {
  if (!session || !bde_text || !function || !out) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    const corec::CompiledRps rps = corec::compile_bde(corec::parse_bde(bde_text));
    const corec::OpSym op = corec::rps_symbol(rps, function);
    std::vector<corec::SolutionHandle> handles;
    const std::string arg_text = str(args);
    if (!arg_text.empty()) {
      for (const auto& a : split(arg_text, ';')) {
        if (rps.table->kind().tag() == corec::KindTag::Stream) {
          handles.push_back(stream_arg(session->engine, rps.table, a));
        } else {
          handles.push_back(session->engine.interpret_op(rps.table, rps.table->symbol("const"), {},
                                                         corec::parse_rational(a)));
        }
      }
    }
    const corec::SolutionHandle h = session->engine.interpret_op(rps.table, op, handles);
    *out = dup(observation(session->engine, h, function, prefix, format));
    return COREC_OK;
  });
}

corec_status corec_circuit_run(corec_session* session, const char* circuit_json, const char* inputs, size_t prefix,
                               corec_format format, char** out) {
  if (!session || !circuit_json || !out) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    const corec::CompiledCircuit c = corec::compile_circuit(corec::parse_circuit(circuit_json));
    std::map<std::string, std::string> given;
    const std::string input_text = str(inputs);
    std::vector<std::string> pieces = input_text.empty() ? std::vector<std::string>{} : split(input_text, ';');
    std::size_t positional = 0;
    for (const auto& p : pieces) {
      const auto eq = p.find('=');
      if (eq != std::string::npos) {
        const std::string id = p.substr(0, eq);
        if (std::find(c.inputs.begin(), c.inputs.end(), id) == c.inputs.end()) {
          return fail(COREC_ERR_UNKNOWN_NAME, "circuit has no input '" + id + "'");
        }
        given[id] = p.substr(eq + 1);
      } else if (positional < c.inputs.size()) {
        given[c.inputs[positional++]] = p;
      } else {
        return fail(COREC_ERR_ARGUMENT, "more input streams than circuit inputs");
      }
    }
    std::vector<corec::SolutionHandle> streams;
    for (const auto& id : c.inputs) {
      auto it = given.find(id);
      if (it == given.end()) return fail(COREC_ERR_ARGUMENT, "no stream for input '" + id + "'");
      streams.push_back(stream_arg(session->engine, c.rps.table, it->second));
      given.erase(it);
    }
    if (!given.empty()) return fail(COREC_ERR_UNKNOWN_NAME, "no input named '" + given.begin()->first + "'");
    std::string text;
    Json j = Json::array();
    for (const auto& f : c.outputs) {
      std::vector<corec::SolutionHandle> args;
      for (std::size_t i : f.inputs) args.push_back(streams[i]);
      const corec::SolutionHandle h = session->engine.interpret_op(c.rps.table, f.symbol, args);
      const std::string line = observation(session->engine, h, f.node, prefix, format);
      if (format == COREC_JSON) {
        j.push_back(Json::parse(line));
      } else {
        text += line + "\n";
      }
    }
    *out = dup(format == COREC_JSON ? j.dump() : text);
    return COREC_OK;
  });
}

corec_status corec_circuit_compile(const char* circuit_json, char** out) {
  if (!circuit_json || !out) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    const corec::CompiledCircuit c = corec::compile_circuit(corec::parse_circuit(circuit_json));
    std::string text;
    for (const auto& f : c.registers) text += f.definition + "\n";
    for (const auto& f : c.outputs) text += f.definition + "\n";
    *out = dup(text);
    return COREC_OK;
  });
}

corec_status corec_run_suite(const char* name, corec_format format, char** out, int* all_passed) {
  if (!out || !all_passed) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    std::vector<std::string> suites;
    if (name && *name) {
      suites.emplace_back(name);
    } else {
      suites = corec::suite_names();
    }
    std::string text;
    Json j = Json::array();
    std::size_t passed = 0, total = 0;
    for (const auto& suite : suites) {
      for (const auto& r : corec::run_suite(suite)) {
        ++total;
        if (r.pass) ++passed;
        text += suite + ": " + corec::to_text(r) + "\n";
        j.push_back(report_json(suite, r));
      }
    }
    text += std::to_string(passed) + "/" + std::to_string(total) + " checks passed\n";
    *all_passed = passed == total ? 1 : 0;
    *out = dup(format == COREC_JSON ? j.dump() : text);
    return COREC_OK;
  });
}

const char* corec_suite_names(void) {
  static const std::string names = [] {
    std::string out;
    for (const auto& n : corec::suite_names()) out += (out.empty() ? "" : ",") + n;
    return out;
  }();
  return names.c_str();
}

corec_status corec_oracle_eval(const char* name, const char* const* inputs, size_t count, char** out) {
  if (!name || !out || (count && !inputs)) return fail(COREC_ERR_ARGUMENT, "null argument");
  return guard([&] {
    std::vector<std::string> args;
    for (std::size_t i = 0; i < count; ++i) args.push_back(str(inputs[i]));
    *out = dup(corec::oracles::oracle_eval(name, args));
    return COREC_OK;
  });
}

}  // extern "C"

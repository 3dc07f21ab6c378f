#include <json.hpp>
#include <map>
#include <memory>
#include <set>

#include "corec/frontends.hpp"
#include "corec/instances.hpp"

namespace corec {

namespace {

using nlohmann::json;

struct PortCounts {
  std::size_t in;
  std::size_t out;
  bool valued;
};

const std::map<std::string, PortCounts>& kinds() {
  static const std::map<std::string, PortCounts> table{
      {"input", {0, 1, false}},  {"output", {1, 0, false}},  {"adder", {2, 1, false}},
      {"mult", {1, 1, true}},    {"register", {1, 1, true}}, {"copier", {1, 2, false}},
  };
  return table;
}

Rational json_rational(const json& v, const std::string& id) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number()) return parse_rational(v.dump());
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "node '" + id + "': value must be a rational");
}

// Backward-traversal term of the proof: inputs and registers are leaves,
// copiers vanish.
struct CircTerm {
  enum class Kind { Input, Register, Plus, Mult };
  Kind kind = Kind::Input;
  std::size_t index = 0;  // input index or register index
  Rational factor;
  std::vector<CircTerm> args;
};

struct Graph {
  std::vector<CircuitNode> nodes;
  std::map<std::string, std::size_t> by_id;
  std::vector<std::vector<std::size_t>> preds;  // in edge order
  std::vector<std::vector<std::size_t>> succs;
};

Graph build_graph(const CircuitFile& c) {
  Graph g;
  g.nodes = c.nodes;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    if (!kinds().count(c.nodes[i].kind)) {
      throw Error(ErrorCode::InvalidArgument, "node '" + c.nodes[i].id + "': unknown kind '" + c.nodes[i].kind + "'");
    }
    if (!g.by_id.emplace(c.nodes[i].id, i).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate node id '" + c.nodes[i].id + "'");
    }
  }
  g.preds.resize(c.nodes.size());
  g.succs.resize(c.nodes.size());
  for (const auto& e : c.edges) {
    auto f = g.by_id.find(e.from);
    auto t = g.by_id.find(e.to);
    if (f == g.by_id.end() || t == g.by_id.end()) {
      throw Error(ErrorCode::DanglingPort, "edge " + e.from + " -> " + e.to + " names an unknown node");
    }
    g.succs[f->second].push_back(t->second);
    g.preds[t->second].push_back(f->second);
  }
  return g;
}

void check_ports(const Graph& g) {
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& pc = kinds().at(g.nodes[i].kind);
    if (g.preds[i].size() != pc.in || g.succs[i].size() != pc.out) {
      throw Error(ErrorCode::DanglingPort, g.nodes[i].kind + " '" + g.nodes[i].id + "' has " +
                                               std::to_string(g.preds[i].size()) + " input(s) and " +
                                               std::to_string(g.succs[i].size()) + " output(s), expected " +
                                               std::to_string(pc.in) + " and " + std::to_string(pc.out));
    }
  }
}

std::optional<std::vector<std::string>> find_loop(const Graph& g) {
  enum Color { White, Grey, Black };
  std::vector<Color> color(g.nodes.size(), White);
  std::vector<std::size_t> stack;
  std::optional<std::vector<std::string>> loop;
  std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
    color[v] = Grey;
    stack.push_back(v);
    if (g.nodes[v].kind != "register") {
      for (std::size_t w : g.succs[v]) {
        if (g.nodes[w].kind == "register") continue;
        if (color[w] == Grey) {
          std::vector<std::string> ids;
          auto it = std::find(stack.begin(), stack.end(), w);
          for (; it != stack.end(); ++it) ids.push_back(g.nodes[*it].id);
          ids.push_back(g.nodes[w].id);
          loop = std::move(ids);
          return true;
        }
        if (color[w] == White && dfs(w)) return true;
      }
    }
    stack.pop_back();
    color[v] = Black;
    return false;
  };
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    if (color[v] == White && g.nodes[v].kind != "register" && dfs(v)) return loop;
  }
  return std::nullopt;
}

struct Model {
  std::vector<std::size_t> input_nodes;   // node index per input
  std::vector<std::size_t> register_nodes;
  std::vector<std::size_t> output_nodes;
  std::map<std::size_t, std::size_t> input_of;     // node -> input index
  std::map<std::size_t, std::size_t> register_of;  // node -> register index
  std::vector<CircTerm> register_terms;            // term feeding each register
  std::vector<Rational> register_init;
  std::vector<std::vector<std::size_t>> register_reach;
  std::vector<CircTerm> output_terms;
  std::vector<std::vector<std::size_t>> output_reach;
};

CircTerm backward(const Graph& g, const Model& m, std::size_t v) {
  const std::string& kind = g.nodes[v].kind;
  CircTerm t;
  if (kind == "input") {
    t.kind = CircTerm::Kind::Input;
    t.index = m.input_of.at(v);
  } else if (kind == "register") {
    t.kind = CircTerm::Kind::Register;
    t.index = m.register_of.at(v);
  } else if (kind == "adder") {
    t.kind = CircTerm::Kind::Plus;
    t.args = {backward(g, m, g.preds[v][0]), backward(g, m, g.preds[v][1])};
  } else if (kind == "mult") {
    t.kind = CircTerm::Kind::Mult;
    t.factor = g.nodes[v].value;
    t.args = {backward(g, m, g.preds[v][0])};
  } else if (kind == "copier") {
    return backward(g, m, g.preds[v][0]);
  } else {
    throw Error(ErrorCode::DanglingPort, "'" + g.nodes[v].id + "' cannot feed another node");
  }
  return t;
}

std::vector<std::size_t> reachable_inputs(const Graph& g, const Model& m, std::size_t start) {
  std::set<std::size_t> seen{start};
  std::vector<std::size_t> todo{start};
  std::set<std::size_t> found;
  while (!todo.empty()) {
    std::size_t v = todo.back();
    todo.pop_back();
    if (auto it = m.input_of.find(v); it != m.input_of.end()) found.insert(it->second);
    for (std::size_t p : g.preds[v]) {
      if (seen.insert(p).second) todo.push_back(p);
    }
  }
  return {found.begin(), found.end()};
}

struct Symbols {
  OpSym plus, mult;
  std::vector<OpSym> g;
};

// Maps an input index to its position among a function's arguments.
using Positions = std::map<std::size_t, std::size_t>;

Positions positions(const std::vector<std::size_t>& reach) {
  Positions p;
  for (std::size_t k = 0; k < reach.size(); ++k) p[reach[k]] = k;
  return p;
}

Term register_call(const Model& m, const Symbols& s, std::size_t r, const RuleInput& in, const Positions& pos) {
  std::vector<Term> args;
  for (std::size_t i : m.register_reach[r]) args.push_back(in.args[pos.at(i)].self);
  return mk_app(s.g[r], std::move(args));
}

Term self_term(const Model& m, const Symbols& s, const CircTerm& t, const RuleInput& in, const Positions& pos) {
  switch (t.kind) {
    case CircTerm::Kind::Input:
      return in.args[pos.at(t.index)].self;
    case CircTerm::Kind::Register:
      return register_call(m, s, t.index, in, pos);
    case CircTerm::Kind::Plus:
      return mk_app(s.plus, {self_term(m, s, t.args[0], in, pos), self_term(m, s, t.args[1], in, pos)});
    case CircTerm::Kind::Mult:
      return mk_app(s.mult, t.factor, {self_term(m, s, t.args[0], in, pos)});
  }
  return {};
}

Term tail_term(const Model& m, const Symbols& s, const CircTerm& t, const RuleInput& in, const Positions& pos) {
  switch (t.kind) {
    case CircTerm::Kind::Input:
      return in.args[pos.at(t.index)].child(0);
    case CircTerm::Kind::Register:
      return self_term(m, s, m.register_terms[t.index], in, pos);
    case CircTerm::Kind::Plus:
      return mk_app(s.plus, {tail_term(m, s, t.args[0], in, pos), tail_term(m, s, t.args[1], in, pos)});
    case CircTerm::Kind::Mult:
      return mk_app(s.mult, t.factor, {tail_term(m, s, t.args[0], in, pos)});
  }
  return {};
}

LabelExpr head_expr(const Model& m, const CircTerm& t, const Positions& pos) {
  switch (t.kind) {
    case CircTerm::Kind::Input:
      return LabelExpr::premise(pos.at(t.index));
    case CircTerm::Kind::Register:
      return LabelExpr::constant(m.register_init[t.index]);
    case CircTerm::Kind::Plus:
      return LabelExpr::binary(LabelExpr::Op::Add, head_expr(m, t.args[0], pos), head_expr(m, t.args[1], pos));
    case CircTerm::Kind::Mult:
      return LabelExpr::binary(LabelExpr::Op::Mul, LabelExpr::constant(t.factor), head_expr(m, t.args[0], pos));
  }
  return LabelExpr::constant(Rational(0));
}

// Text forms of the same three readings, with input ids as variable names.
struct Printer {
  const Graph& g;
  const Model& m;

  std::string input(std::size_t i) const { return g.nodes[m.input_nodes[i]].id; }

  std::string call(std::size_t r) const {
    std::string out = "g_" + g.nodes[m.register_nodes[r]].id + "(";
    for (std::size_t k = 0; k < m.register_reach[r].size(); ++k) out += (k ? ", " : "") + input(m.register_reach[r][k]);
    return out + ")";
  }

  std::string self(const CircTerm& t) const {
    switch (t.kind) {
      case CircTerm::Kind::Input: return input(t.index);
      case CircTerm::Kind::Register: return call(t.index);
      case CircTerm::Kind::Plus: return "plus(" + self(t.args[0]) + ", " + self(t.args[1]) + ")";
      case CircTerm::Kind::Mult: return "mult[" + to_string(t.factor) + "](" + self(t.args[0]) + ")";
    }
    return {};
  }

  std::string tail(const CircTerm& t) const {
    switch (t.kind) {
      case CircTerm::Kind::Input: return input(t.index) + "'";
      case CircTerm::Kind::Register: return self(m.register_terms[t.index]);
      case CircTerm::Kind::Plus: return "plus(" + tail(t.args[0]) + ", " + tail(t.args[1]) + ")";
      case CircTerm::Kind::Mult: return "mult[" + to_string(t.factor) + "](" + tail(t.args[0]) + ")";
    }
    return {};
  }

  std::string head(const CircTerm& t, const std::vector<std::size_t>& reach) const {
    std::vector<std::string> names;
    for (std::size_t i : reach) names.push_back("head(" + input(i) + ")");
    return head_expr(m, t, positions(reach)).to_string(names);
  }

  std::string signature(const std::string& name, const std::vector<std::size_t>& reach) const {
    std::string out = name + "(";
    for (std::size_t k = 0; k < reach.size(); ++k) out += (k ? ", " : "") + input(reach[k]);
    return out + ")";
  }
};

}  // namespace

CircuitFile parse_circuit(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SyntaxError(1, e.byte, e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw SyntaxError(1, 1, "expected an object with a \"nodes\" array");
  }
  CircuitFile c;
  for (const auto& n : doc["nodes"]) {
    if (!n.is_object() || !n.contains("id") || !n.contains("kind") || !n["id"].is_string() || !n["kind"].is_string()) {
      throw SyntaxError(1, 1, "every node needs string \"id\" and \"kind\"");
    }
    CircuitNode node;
    node.id = n["id"].get<std::string>();
    node.kind = n["kind"].get<std::string>();
    auto it = kinds().find(node.kind);
    if (it == kinds().end()) throw Error(ErrorCode::InvalidArgument, "node '" + node.id + "': unknown kind '" + node.kind + "'");
    if (it->second.valued) {
      if (!n.contains("value")) throw Error(ErrorCode::InvalidArgument, "node '" + node.id + "' needs a \"value\"");
      node.value = json_rational(n["value"], node.id);
    }
    c.nodes.push_back(std::move(node));
  }
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw SyntaxError(1, 1, "\"edges\" must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_object() || !e.contains("from") || !e.contains("to") || !e["from"].is_string() || !e["to"].is_string()) {
        throw SyntaxError(1, 1, "every edge needs string \"from\" and \"to\"");
      }
      c.edges.push_back({e["from"].get<std::string>(), e["to"].get<std::string>()});
    }
  }
  return c;
}

std::string print_circuit(const CircuitFile& circuit) {
  json doc;
  doc["nodes"] = json::array();
  for (const auto& n : circuit.nodes) {
    json j{{"id", n.id}, {"kind", n.kind}};
    if (kinds().count(n.kind) && kinds().at(n.kind).valued) j["value"] = to_string(n.value);
    doc["nodes"].push_back(std::move(j));
  }
  doc["edges"] = json::array();
  for (const auto& e : circuit.edges) doc["edges"].push_back({{"from", e.from}, {"to", e.to}});
  return doc.dump(2) + "\n";
}

std::optional<std::vector<std::string>> register_free_loop(const CircuitFile& circuit) {
  return find_loop(build_graph(circuit));
}

CompiledCircuit compile_circuit(const CircuitFile& circuit) {
  const Graph g = build_graph(circuit);
  check_ports(g);
  if (auto loop = find_loop(g)) {
    std::string text;
    for (const auto& id : *loop) text += (text.empty() ? "" : " -> ") + id;
    throw Error(ErrorCode::InvalidCircuit, "loop without a register: " + text);
  }

  auto model = std::make_shared<Model>();
  Model& m = *model;
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const std::string& k = g.nodes[v].kind;
    if (k == "input") {
      m.input_of[v] = m.input_nodes.size();
      m.input_nodes.push_back(v);
    } else if (k == "register") {
      m.register_of[v] = m.register_nodes.size();
      m.register_nodes.push_back(v);
      m.register_init.push_back(g.nodes[v].value);
    } else if (k == "output") {
      m.output_nodes.push_back(v);
    }
  }
  for (std::size_t v : m.register_nodes) {
    m.register_terms.push_back(backward(g, m, g.preds[v][0]));
    m.register_reach.push_back(reachable_inputs(g, m, v));
  }
  for (std::size_t v : m.output_nodes) {
    m.output_terms.push_back(backward(g, m, g.preds[v][0]));
    m.output_reach.push_back(reachable_inputs(g, m, v));
  }

  CompiledCircuit out;
  out.rps.given = instances::stream_table();
  std::vector<SymbolDecl> decls;
  for (std::size_t r = 0; r < m.register_nodes.size(); ++r) {
    decls.push_back({"g_" + g.nodes[m.register_nodes[r]].id, m.register_reach[r].size(), false});
  }
  for (std::size_t o = 0; o < m.output_nodes.size(); ++o) {
    decls.push_back({"f_" + g.nodes[m.output_nodes[o]].id, m.output_reach[o].size(), false});
  }
  SignaturePtr fresh = Signature::make(std::move(decls));
  out.rps.def.new_sig = fresh;

  auto syms = std::make_shared<Symbols>();
  syms->plus = out.rps.given->symbol("plus");
  syms->mult = out.rps.given->symbol("mult");
  for (std::size_t r = 0; r < m.register_nodes.size(); ++r) syms->g.push_back(fresh->at(r));

  const Printer printer{g, m};
  for (std::size_t r = 0; r < m.register_nodes.size(); ++r) {
    Conclude conclude = [model, syms, fresh, r](const RuleInput& in) {
      const Positions pos = positions(model->register_reach[r]);
      Step<Term> s;
      s.label = model->register_init[r];
      s.children.emplace_back(0, self_term(*model, *syms, model->register_terms[r], in, pos));
      return s;
    };
    out.rps.def.rules.push_back(GsosRule{fresh->at(r), std::move(conclude)});
    CircuitFunction fn;
    fn.node = g.nodes[m.register_nodes[r]].id;
    fn.symbol = fresh->at(r);
    fn.inputs = m.register_reach[r];
    fn.definition = printer.signature(fn.symbol.name, fn.inputs) + " = (" + to_string(m.register_init[r]) + ", " +
                    printer.self(m.register_terms[r]) + ")";
    out.registers.push_back(std::move(fn));
  }
  for (std::size_t o = 0; o < m.output_nodes.size(); ++o) {
    const std::size_t k = m.register_nodes.size() + o;
    const LabelExpr head = head_expr(m, m.output_terms[o], positions(m.output_reach[o]));
    Conclude conclude = [model, syms, fresh, o, head](const RuleInput& in) {
      const Positions pos = positions(model->output_reach[o]);
      Step<Term> s;
      s.label = head.eval(in.args);
      s.children.emplace_back(0, tail_term(*model, *syms, model->output_terms[o], in, pos));
      return s;
    };
    out.rps.def.rules.push_back(GsosRule{fresh->at(k), std::move(conclude)});
    CircuitFunction fn;
    fn.node = g.nodes[m.output_nodes[o]].id;
    fn.symbol = fresh->at(k);
    fn.inputs = m.output_reach[o];
    fn.definition = printer.signature(fn.symbol.name, fn.inputs) + " = (" +
                    printer.head(m.output_terms[o], fn.inputs) + ", " + printer.tail(m.output_terms[o]) + ")";
    out.outputs.push_back(std::move(fn));
  }
  out.rps.table = extend_with_rps(out.rps.given, out.rps.def);
  for (auto& fn : out.registers) fn.symbol = out.rps.table->resolve(fn.symbol);
  for (auto& fn : out.outputs) fn.symbol = out.rps.table->resolve(fn.symbol);
  for (std::size_t i : m.input_nodes) out.inputs.push_back(g.nodes[i].id);
  return out;
}

}  // namespace corec

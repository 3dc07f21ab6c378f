#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corec/rules.hpp"
#include "corec/solver.hpp"

namespace corec {

// Equation systems -------------------------------------------------------------
//
//   kind stream | kind tree | kind language a b
//   t = 1 . zip(u, t)            # guard at the root: flat right-hand side
//   u = zip(0 . t, 1 . u)        # guards below operations: sandwiched
//   s = <3; L: s, R: const[0]>   # generic guard <label; port: term, ...>
//
// A bare number is const[r]. Inside a guard's continuation a nested guard
// becomes register[r](t) for streams and prefix_a(t) / cinv_j(...) for
// languages.

/// Errors: SyntaxError, UnknownSymbol, ArityMismatch, Unguarded.
System parse_system(std::string_view text);
std::string print_system(const System& system);

// Behavioral differential equations ---------------------------------------------
//
//   kind stream
//   shuffle(x, y): head = head(x) * head(y); tail = plus(shuffle(x, y'), shuffle(x', y))
//   kind tree
//   f(x): label = head(x) + 1; L = f(L(x)); R = R(x)

struct BdeTerm {
  enum class Kind { Self, Child, Const, App };
  Kind kind = Kind::Self;
  std::size_t arg = 0;
  Port port = 0;
  std::string name;
  std::optional<LabelExpr> scalar;  // value of Const, index of App
  std::vector<BdeTerm> args;
};

struct BdeDecl {
  std::string name;
  std::vector<std::string> params;
  LabelExpr head = LabelExpr::constant(Rational(0));
  std::vector<BdeTerm> derivatives;  // one per port
};

struct BdeFile {
  KindTag kind = KindTag::Stream;
  std::vector<BdeDecl> decls;
};

/// Errors: SyntaxError, UnknownSymbol, ArityMismatch.
BdeFile parse_bde(std::string_view text);
std::string print_bde(const BdeFile& file);

struct CompiledRps {
  TablePtr given;
  RpsDef def;
  TablePtr table;  // given extended by def
};

/// Builds the rps over the built-in table of the file's kind.
CompiledRps compile_bde(const BdeFile& file);
/// A symbol of the extended table by name; new symbols shadow given ones.
/// Errors: UnknownSymbol.
OpSym rps_symbol(const CompiledRps& rps, std::string_view name);

// Stream circuits (JSON) ---------------------------------------------------------
//
//   {"nodes": [{"id": "in", "kind": "input"}, {"id": "r", "kind": "register", "value": "1"}, ...],
//    "edges": [{"from": "in", "to": "c"}, ...]}
//
// Kinds: input, output, adder, mult (value), register (value), copier.

struct CircuitNode {
  std::string id;
  std::string kind;
  Rational value;
};

struct CircuitEdge {
  std::string from;
  std::string to;
};

struct CircuitFile {
  std::vector<CircuitNode> nodes;
  std::vector<CircuitEdge> edges;
};

/// Errors: SyntaxError, InvalidArgument.
CircuitFile parse_circuit(std::string_view json_text);
std::string print_circuit(const CircuitFile& circuit);

struct CircuitFunction {
  std::string node;                 // register or output id
  OpSym symbol;                     // g_<id> or f_<id>
  std::vector<std::size_t> inputs;  // indices into CompiledCircuit::inputs
  std::string definition;           // human-readable rule
};

struct CompiledCircuit {
  CompiledRps rps;
  std::vector<std::string> inputs;
  std::vector<CircuitFunction> registers;
  std::vector<CircuitFunction> outputs;
};

/// Errors: InvalidCircuit (register-free loop, listed in the message),
/// DanglingPort.
CompiledCircuit compile_circuit(const CircuitFile& circuit);
/// Node ids of a loop that avoids every register, if any.
std::optional<std::vector<std::string>> register_free_loop(const CircuitFile& circuit);

// Grammars in Greibach normal form ----------------------------------------------
//
//   terminals a b
//   nonterminals S B
//   start S
//   S -> a S B | b
//   B -> b

struct GnfProduction {
  std::string lhs;
  std::string terminal;
  std::vector<std::string> rest;

  bool operator==(const GnfProduction&) const = default;
};

struct GnfFile {
  std::vector<std::string> terminals;
  std::vector<std::string> nonterminals;
  std::string start;
  std::vector<GnfProduction> productions;

  bool operator==(const GnfFile&) const = default;
};

/// Errors: SyntaxError, NotGnf, UnknownSymbol.
GnfFile parse_gnf(std::string_view text);
std::string print_gnf(const GnfFile& grammar);
/// One variable per nonterminal over the language table of the terminals,
/// the start symbol's equation first.
System compile_gnf(const GnfFile& grammar);

// CCS agents -------------------------------------------------------------------
//
//   P = a.(P | c.0) + b.0
//   Q = alt(a.0, b.Q) ; 'c.0 \{c}
//
// Precedence from loosest: + then | then ; then prefix, then the postfix
// relabeling [new/old, ...] and restriction \{a, ...}.

struct Agent {
  enum class Kind { Nil, Var, Prefix, Sum, Par, Seq, Alt, Relabel, Restrict };
  Kind kind = Kind::Nil;
  std::string name;  // variable or action
  std::vector<Agent> kids;
  std::vector<std::pair<std::string, std::string>> relabel;  // (new, old)
  std::vector<std::string> hidden;

  static Agent nil();
  static Agent var(std::string name);
  static Agent prefix(std::string action, Agent next);
  static Agent sum(std::vector<Agent> kids);
  static Agent binary(Kind kind, Agent left, Agent right);
  static Agent relabeled(Agent inner, std::vector<std::pair<std::string, std::string>> pairs);
  static Agent restricted(Agent inner, std::vector<std::string> hidden);

  bool operator==(const Agent&) const = default;
};

struct CcsFile {
  std::vector<std::string> actions;  // base names, without complements or tau
  std::vector<std::pair<std::string, Agent>> defs;

  const Agent* find(std::string_view name) const;
  bool operator==(const CcsFile&) const = default;
};

/// Errors: SyntaxError, UnknownSymbol.
CcsFile parse_ccs(std::string_view text);
/// Parses one agent expression over the actions of `file`.
Agent parse_agent(std::string_view text, const CcsFile& file);
std::string print_agent(const Agent& agent);
std::string print_ccs(const CcsFile& file);
ActionSet ccs_actions(const CcsFile& file);

struct CompiledCcs {
  System system;
  ActionSet actions;
};

/// Errors: Unguarded, UnknownSymbol, BadActionStructure.
CompiledCcs compile_ccs(const CcsFile& file);
/// Term for an agent over the variables of `compiled`. Widens
/// compiled.system.table when the agent needs new sums, relabelings or
/// restrictions; the old table stays a summand.
Term agent_term(CompiledCcs& compiled, const Agent& agent);

/// Renders a process observation as a sum of prefixes, `*` for cut leaves.
std::string print_process_tree(const ObservationTree& tree, const ActionSet& actions);

// Stream literals ----------------------------------------------------------------
//
//   "1,2|3,4" = 1 2 3 4 3 4 ...; "|1" = ones; "ones", "zeros"; "5" = 5 0 0 ...

struct StreamLiteral {
  std::vector<Rational> prefix;
  std::vector<Rational> period;
};

/// Errors: InvalidArgument.
StreamLiteral parse_stream_literal(std::string_view text);

}  // namespace corec

#include <doctest.h>

#include <random>

#include "corec/checking.hpp"
#include "corec/error.hpp"
#include "corec/frontends.hpp"
#include "corec/instances.hpp"
#include "corec/oracles.hpp"

using namespace corec;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

std::vector<Rational> apply(Engine& engine, const CompiledRps& rps, const char* name,
                            const std::vector<StreamLiteral>& args, std::size_t n) {
  std::vector<SolutionHandle> hs;
  for (const auto& a : args) hs.push_back(instances::eventually_periodic(engine, rps.table, a.prefix, a.period));
  return instances::stream_take(engine, engine.interpret_op(rps.table, rps_symbol(rps, name), hs), n);
}

const char* kCircuit = R"({
  "nodes": [
    {"id": "in", "kind": "input"},
    {"id": "sum", "kind": "adder"},
    {"id": "split", "kind": "copier"},
    {"id": "reg", "kind": "register", "value": "1"},
    {"id": "out", "kind": "output"}
  ],
  "edges": [
    {"from": "in", "to": "sum"}, {"from": "reg", "to": "sum"}, {"from": "sum", "to": "split"},
    {"from": "split", "to": "out"}, {"from": "split", "to": "reg"}
  ]
})";

}  // namespace

// Equation systems ---------------------------------------------------------------

TEST_CASE("system files: flat and sandwiched forms") {
  const System flat = parse_system("t = 1 . zip(u,t)\nu = 0 . zip(t,u)\n");
  REQUIRE(flat.equations.size() == 2);
  CHECK(std::holds_alternative<Step<Term>>(flat.equations[0].rhs));
  const System sw = parse_system("t = zip(1.u, 0.t)\nu = zip(0.t, 1.u)\n");
  CHECK(std::holds_alternative<Context>(sw.equations[0].rhs));
  CHECK(flat.kind().tag() == KindTag::Stream);
}

TEST_CASE("system files: errors") {
  CHECK(code_of([] { parse_system("x = zip(x, y)\ny = 1 . y\n"); }) == ErrorCode::Unguarded);
  CHECK(code_of([] { parse_system("x = 1 . frob(x)\n"); }) == ErrorCode::UnknownSymbol);
  CHECK(code_of([] { parse_system("x = 1 . zip(x)\n"); }) == ErrorCode::ArityMismatch);
  CHECK(code_of([] { parse_system("x = 1 . (x\n"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_system("kind wobble\nx = 1 . x\n"); }) == ErrorCode::SyntaxError);
  try {
    parse_system("x = 1 . zip(x, y\n");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() > 1);
  }
}

TEST_CASE("system files: round trips") {
  const char* texts[] = {
      "t = 1 . zip(u, t)\nu = 0 . zip(t, u)\n",
      "u = zip(0 . t, 1 . u)\nt = zip(1 . u, 0 . t)\n",
      "# comment\nx = 1/2 . plus(mult[3](x), register[-1](x))\n",
      "x = conv(1 . x, shuffle(2 . x, 3))\n",
      "kind tree\ns = <1; L: plus(s, pi), R: const[2]>\n",
      "kind language a b\nx = union(a . x, <1; b: y>)\ny = star(b . x)\n",
      "kind language a b\nx = <0; a: concat(x, <1; b: x>)>\n",
      "x = 1 . 2 . x\n",
  };
  for (const char* text : texts) {
    CAPTURE(text);
    const std::string once = print_system(parse_system(text));
    CHECK(print_system(parse_system(once)) == once);
  }
}

TEST_CASE("system files: printed form solves to the same behavior") {
  Engine engine;
  const System a = parse_system("x = 1 . zip(x, 2 . y)\ny = conv(3 . y, 1 . x)\n");
  const System b = parse_system(print_system(a));
  const Solution sa = engine.solve_system(a), sb = engine.solve_system(b);
  for (const char* v : {"x", "y"}) CHECK(bounded_equal(engine, sa.at(v), sb.at(v), 10));
}

// Behavioral differential equations -----------------------------------------------

TEST_CASE("bde: shuffle and convolution match their oracles") {
  const CompiledRps rps = compile_bde(parse_bde(
      "kind stream\n"
      "shuffle(x,y): head = head(x)*head(y); tail = plus(shuffle(x,tail(y)), shuffle(tail(x),y))\n"
      "conv(x,y): head = head(x)*head(y); tail = plus(conv(tail(x),y), conv(const(head(x)), tail(y)))\n"));
  Engine engine;
  const StreamLiteral s = parse_stream_literal("1,2|3"), t = parse_stream_literal("-1|1/2,2");
  const auto xs = oracles::expand(s, 10), ys = oracles::expand(t, 10);
  CHECK(apply(engine, rps, "shuffle", {s, t}, 10) == oracles::binomial_shuffle(xs, ys, 10));
  CHECK(apply(engine, rps, "conv", {s, t}, 10) == oracles::cauchy_convolution(xs, ys, 10));
  CHECK(validate_table(*rps.table).empty());
}

TEST_CASE("bde: the zip fixpoint f(x) = zip(x, f(x))") {
  const CompiledRps rps = compile_bde(parse_bde("f(x): head = head(x); tail = zip(f(x), tail(x))\n"));
  Engine engine;
  const StreamLiteral s = parse_stream_literal("5,6,7|1,2");
  CHECK(apply(engine, rps, "f", {s}, 16) == oracles::zip_fixpoint(oracles::expand(s, 8), 16));
}

TEST_CASE("bde: trees") {
  const CompiledRps rps = compile_bde(parse_bde("kind tree\nmirror(x): label = label(x) + 1; L = mirror(R(x)); R = mirror(L(x))\n"));
  Engine engine;
  const SolutionHandle pi = engine.interpret_op(rps.table, rps.table->symbol("pi"), {});
  const SolutionHandle h = engine.interpret_op(rps.table, rps_symbol(rps, "mirror"), std::span(&pi, 1));
  CHECK(label_eq(engine.observe(h, 1).label, Label{instances::default_pi() + 1}));
}

TEST_CASE("bde: errors") {
  CHECK(code_of([] { parse_bde("f(x): head = head(x)\n"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_bde("f(x): head = head(x); tail = g(x)\n"); }) == ErrorCode::UnknownSymbol);
  CHECK(code_of([] { parse_bde("f(x): head = head(x); tail = zip(x)\n"); }) == ErrorCode::ArityMismatch);
  CHECK(code_of([] { parse_bde("f(x): head = head(y); tail = x\n"); }) != ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_bde("f(x): head = head(x); tail = f(tail(x)) extra\n"); }) == ErrorCode::SyntaxError);
}

TEST_CASE("bde: round trips") {
  const char* texts[] = {
      "kind stream\nshuffle(x, y): head = head(x) * head(y); tail = plus(shuffle(x, y'), shuffle(x', y))\n",
      "kind stream\nc(x, y): head = head(x) * head(y) - 1; tail = plus(c(x', y), c(const(head(x)), y'))\n",
      "kind stream\nf(x): head = -(head(x) + 2); tail = mult[1/2](f(register[3](x')))\n",
      "kind tree\nm(x): label = label(x) * 2; L = m(R(x)); R = plus(L(x), const(label(x)))\n",
  };
  for (const char* text : texts) {
    CAPTURE(text);
    const std::string once = print_bde(parse_bde(text));
    CHECK(print_bde(parse_bde(once)) == once);
  }
}

// Circuits -------------------------------------------------------------------

TEST_CASE("circuit: the feedback example compiles to the expected definitions") {
  const CompiledCircuit c = compile_circuit(parse_circuit(kCircuit));
  REQUIRE(c.registers.size() == 1);
  REQUIRE(c.outputs.size() == 1);
  CHECK(c.registers[0].definition == "g_reg(in) = (1, plus(in, g_reg(in)))");
  CHECK(c.outputs[0].definition == "f_out(in) = (head(in) + 1, plus(in', plus(in, g_reg(in))))");
  CHECK(validate_table(*c.rps.table).empty());
  Engine engine;
  const StreamLiteral ones = parse_stream_literal("ones");
  const SolutionHandle x = instances::eventually_periodic(engine, c.rps.table, ones.prefix, ones.period);
  const auto got = instances::stream_take(engine, engine.interpret_op(c.rps.table, c.outputs[0].symbol, std::span(&x, 1)), 4);
  CHECK(got == std::vector<Rational>{2, 3, 4, 5});
}

TEST_CASE("circuit: partial sums for arbitrary input") {
  const CompiledCircuit c = compile_circuit(parse_circuit(kCircuit));
  Engine engine;
  const StreamLiteral s = parse_stream_literal("3,-1|1/2,4");
  const SolutionHandle x = instances::eventually_periodic(engine, c.rps.table, s.prefix, s.period);
  const auto got = instances::stream_take(engine, engine.interpret_op(c.rps.table, c.outputs[0].symbol, std::span(&x, 1)), 10);
  Rational acc = 1;
  const auto in = oracles::expand(s, 10);
  for (std::size_t i = 0; i < 10; ++i) {
    acc += in[i];
    CHECK(got[i] == acc);
  }
}

TEST_CASE("circuit: validity and port errors") {
  const char* loop = R"({"nodes": [{"id": "i", "kind": "input"}, {"id": "a", "kind": "adder"},
    {"id": "c", "kind": "copier"}, {"id": "o", "kind": "output"}],
    "edges": [{"from": "i", "to": "a"}, {"from": "c", "to": "a"}, {"from": "a", "to": "c"}, {"from": "c", "to": "o"}]})";
  const CircuitFile f = parse_circuit(loop);
  const auto witness = register_free_loop(f);
  REQUIRE(witness.has_value());
  CHECK(std::find(witness->begin(), witness->end(), "a") != witness->end());
  try {
    compile_circuit(f);
    FAIL("expected InvalidCircuit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidCircuit);
    CHECK(std::string(e.what()).find("a -> c -> a") != std::string::npos);
  }
  const char* dangling = R"({"nodes": [{"id": "i", "kind": "input"}, {"id": "a", "kind": "adder"}, {"id": "o", "kind": "output"}],
    "edges": [{"from": "i", "to": "a"}, {"from": "a", "to": "o"}]})";
  CHECK(code_of([&] { compile_circuit(parse_circuit(dangling)); }) == ErrorCode::DanglingPort);
  const char* unknown = R"({"nodes": [{"id": "i", "kind": "input"}], "edges": [{"from": "i", "to": "zz"}]})";
  CHECK(code_of([&] { compile_circuit(parse_circuit(unknown)); }) == ErrorCode::DanglingPort);
  CHECK(code_of([] { parse_circuit("{not json"); }) == ErrorCode::SyntaxError);
}

TEST_CASE("circuit: two inputs, a multiplier and two outputs") {
  const char* text = R"({"nodes": [
      {"id": "x", "kind": "input"}, {"id": "y", "kind": "input"}, {"id": "m", "kind": "mult", "value": "2"},
      {"id": "a", "kind": "adder"}, {"id": "c", "kind": "copier"}, {"id": "r", "kind": "register", "value": 0.5},
      {"id": "o1", "kind": "output"}, {"id": "o2", "kind": "output"}],
    "edges": [{"from": "x", "to": "m"}, {"from": "m", "to": "a"}, {"from": "y", "to": "a"}, {"from": "a", "to": "c"},
              {"from": "c", "to": "o1"}, {"from": "c", "to": "r"}, {"from": "r", "to": "o2"}]})";
  const CompiledCircuit c = compile_circuit(parse_circuit(text));
  CHECK(c.inputs == std::vector<std::string>{"x", "y"});
  REQUIRE(c.outputs.size() == 2);
  Engine engine;
  const SolutionHandle xs = instances::eventually_periodic(engine, c.rps.table, {Rational(1), Rational(2)}, {});
  const SolutionHandle ys = instances::eventually_periodic(engine, c.rps.table, {}, {Rational(1)});
  const SolutionHandle args[] = {xs, ys};
  auto run = [&](const CircuitFunction& f) {
    std::vector<SolutionHandle> hs;
    for (auto i : f.inputs) hs.push_back(args[i]);
    return instances::stream_take(engine, engine.interpret_op(c.rps.table, f.symbol, hs), 4);
  };
  CHECK(run(c.outputs[0]) == std::vector<Rational>{3, 5, 1, 1});
  CHECK(run(c.outputs[1]) == std::vector<Rational>{ratio(1, 2), 3, 5, 1});
  const std::string once = print_circuit(parse_circuit(text));
  CHECK(print_circuit(parse_circuit(once)) == once);
}

// Grammars -------------------------------------------------------------------

TEST_CASE("gnf: a^n b b^n") {
  const GnfFile g = parse_gnf("terminals a b\nnonterminals S B\nstart S\nS -> a S B | b\nB -> b\n");
  Engine engine;
  const System sys = compile_gnf(g);
  CHECK(sys.equations.front().var == VarId("S"));
  const Solution sol = engine.solve_system(sys);
  auto in = [&](std::string_view w) { return instances::member(engine, sol.at("S"), instances::word_ports(sys.kind(), w)); };
  CHECK(in("aabbb"));
  CHECK_FALSE(in("abbb"));
  CHECK(in("b"));
  CHECK_FALSE(in(""));
}

TEST_CASE("gnf: nonterminal without productions is empty") {
  const GnfFile g = parse_gnf("terminals a\nnonterminals S N\nS -> a | a N\n");
  CHECK(g.start == "S");
  Engine engine;
  const System sys = compile_gnf(g);
  const Solution sol = engine.solve_system(sys);
  CHECK_FALSE(instances::member(engine, sol.at("N"), instances::word_ports(sys.kind(), "a")));
  CHECK(instances::member(engine, sol.at("S"), instances::word_ports(sys.kind(), "a")));
}

TEST_CASE("gnf: errors") {
  CHECK(code_of([] { parse_gnf("terminals a\nnonterminals S\nS -> S a\n"); }) == ErrorCode::NotGnf);
  CHECK(code_of([] { parse_gnf("terminals a\nnonterminals S\nS -> a a\n"); }) == ErrorCode::NotGnf);
  CHECK(code_of([] { parse_gnf("terminals a\nnonterminals S\nS -> a | \n"); }) == ErrorCode::NotGnf);
  CHECK(code_of([] { parse_gnf("terminals a\nnonterminals S\nS -> a X\n"); }) == ErrorCode::UnknownSymbol);
  CHECK(code_of([] { parse_gnf("nonterminals S\nS -> a\n"); }) == ErrorCode::SyntaxError);
  GnfFile bad{{"a"}, {"S"}, "S", {{"S", "S", {}}}};
  CHECK(code_of([&] { compile_gnf(bad); }) == ErrorCode::NotGnf);
}

TEST_CASE("gnf: random grammars round trip and agree with the derivation oracle") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> count(0, 3), len(0, 2), pick(0, 2), term(0, 1);
  const std::vector<std::string> ts{"a", "b"}, ns{"S", "T", "U"};
  for (int i = 0; i < 40; ++i) {
    GnfFile g{ts, ns, "S", {}};
    for (const auto& n : ns) {
      for (int k = count(rng); k > 0; --k) {
        GnfProduction p{n, ts[term(rng)], {}};
        for (int j = len(rng); j > 0; --j) p.rest.push_back(ns[pick(rng)]);
        g.productions.push_back(p);
      }
    }
    std::stable_sort(g.productions.begin(), g.productions.end(), [&](const auto& x, const auto& y) {
      return std::find(ns.begin(), ns.end(), x.lhs) < std::find(ns.begin(), ns.end(), y.lhs);
    });
    CHECK(parse_gnf(print_gnf(g)) == g);
    Engine engine;
    const System sys = compile_gnf(g);
    const Solution sol = engine.solve_system(sys);
    for (const auto& w : oracles::all_words(2, 5)) {
      std::vector<std::string> letters;
      for (auto x : w) letters.push_back(ts[x]);
      const std::vector<Port> ports(w.begin(), w.end());
      CHECK(instances::member(engine, sol.at("S"), ports) == oracles::gnf_derives(g, letters));
    }
  }
}

// CCS ------------------------------------------------------------------------

TEST_CASE("ccs: parsing and precedence") {
  const CcsFile f = parse_ccs("P = a.(P | c.0) + b.0\n");
  CHECK(f.actions == std::vector<std::string>{"a", "c", "b"});
  const Agent& p = *f.find("P");
  REQUIRE(p.kind == Agent::Kind::Sum);
  CHECK(p.kids[0].kind == Agent::Kind::Prefix);
  CHECK(p.kids[0].kids[0].kind == Agent::Kind::Par);
  CHECK(print_agent(p) == "a.(P | c.0) + b.0");
  const Agent q = parse_agent("a.0 | b.0 ; 'c.0 + tau.0", f);
  CHECK(q.kind == Agent::Kind::Sum);
  CHECK(q.kids[0].kind == Agent::Kind::Par);
  CHECK(q.kids[0].kids[1].kind == Agent::Kind::Seq);
}

TEST_CASE("ccs: errors") {
  CHECK(code_of([] { compile_ccs(parse_ccs("P = P + a.0\n")); }) == ErrorCode::Unguarded);
  CHECK(code_of([] { parse_ccs("P = a.Q\n"); }) == ErrorCode::UnknownSymbol);
  CHECK(code_of([] { parse_ccs("P = a.(P\n"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_ccs("actions a\nP = b.P\n"); }) == ErrorCode::UnknownSymbol);
  const CcsFile f = parse_ccs("P = a.P\n");
  CHECK(code_of([&] { parse_agent("Z", f); }) == ErrorCode::UnknownSymbol);
}

TEST_CASE("ccs: prefixes may sit anywhere inside terms") {
  const CcsFile f = parse_ccs("P = (a.P | b.P)\\{c} ; alt(c.P, 0)\n");
  CHECK_NOTHROW(compile_ccs(f));
}

TEST_CASE("ccs: random agents round trip and agree with the SOS oracle") {
  std::mt19937 rng(11);
  const CcsFile file = parse_ccs("actions a b\nP = a.(P | 'a.0) + b.0\nQ = alt(a.Q, b.P)\n");
  CompiledCcs c = compile_ccs(file);
  Engine engine;
  const Solution sol = engine.solve_system(c.system);
  Binding binding;
  for (const auto& [v, h] : sol.entries()) binding.emplace(v, h);
  const std::vector<std::string> acts{"a", "'a", "b", "'b", "tau"};
  std::function<Agent(int)> gen = [&](int depth) -> Agent {
    std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 8);
    std::uniform_int_distribution<std::size_t> act(0, acts.size() - 1);
    switch (pick(rng)) {
      case 0: return Agent::nil();
      case 1: return Agent::var(std::bernoulli_distribution()(rng) ? "P" : "Q");
      case 2:
      case 3: return Agent::prefix(acts[act(rng)], gen(depth - 1));
      case 4: return Agent::sum({gen(depth - 1), gen(depth - 1), gen(depth - 1)});
      case 5: return Agent::binary(Agent::Kind::Par, gen(depth - 1), gen(depth - 1));
      case 6: return Agent::binary(Agent::Kind::Seq, gen(depth - 1), gen(depth - 1));
      case 7: return Agent::binary(Agent::Kind::Alt, gen(depth - 1), gen(depth - 1));
      default: return Agent::restricted(gen(depth - 1), {"a"});
    }
  };
  for (int i = 0; i < 60; ++i) {
    const Agent a = gen(3);
    CAPTURE(print_agent(a));
    CHECK(parse_agent(print_agent(a), file) == a);
    const SolutionHandle h = engine.interpret(c.system.table, agent_term(c, a), binding);
    CHECK(engine.observe(h, 3) == oracles::sos_tree(a, file, c.actions, 3));
  }
}

TEST_CASE("ccs: file round trip") {
  const CcsFile f = parse_ccs("actions a b c\nP = a.(P | c.0) + b.0\nR = (P[b/a] | 'c.R)\\{c, b}\nS = alt(tau.S, 0) ; R\n");
  CHECK(parse_ccs(print_ccs(f)) == f);
}

// Stream literals -------------------------------------------------------------

TEST_CASE("stream literals") {
  CHECK(oracles::expand(parse_stream_literal("1,2|3,4"), 6) == std::vector<Rational>{1, 2, 3, 4, 3, 4});
  CHECK(oracles::expand(parse_stream_literal("|1"), 3) == std::vector<Rational>{1, 1, 1});
  CHECK(oracles::expand(parse_stream_literal("ones"), 2) == std::vector<Rational>{1, 1});
  CHECK(oracles::expand(parse_stream_literal("zeros"), 2) == std::vector<Rational>{0, 0});
  CHECK(oracles::expand(parse_stream_literal("5"), 3) == std::vector<Rational>{5, 0, 0});
  CHECK(oracles::expand(parse_stream_literal("1/2, 0.25"), 3) == std::vector<Rational>{ratio(1, 2), ratio(1, 4), 0});
  CHECK(code_of([] { parse_stream_literal("x"); }) == ErrorCode::InvalidArgument);
}

#include <doctest.h>

#include "corec/checking.hpp"
#include "corec/error.hpp"
#include "corec/frontends.hpp"
#include "corec/instances.hpp"
#include "corec/oracles.hpp"
#include "corec/solver.hpp"

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

std::vector<int> digits(Engine& engine, SolutionHandle h, std::size_t n) {
  std::vector<int> out;
  for (const auto& r : instances::stream_take(engine, h, n)) out.push_back(static_cast<int>(r.get_num().get_si()));
  return out;
}

Step<Term> stream_step(Rational r, Term tail) {
  Step<Term> s;
  s.label = std::move(r);
  s.children.emplace_back(0, std::move(tail));
  return s;
}

}  // namespace

TEST_CASE("flat zip system agrees with hand iteration") {
  Engine engine;
  const Solution sol = engine.solve_system(parse_system("t = 1 . zip(u, t)\nu = 0 . zip(t, u)\n"));
  const auto [t, u] = oracles::flat_zip_pair(24);
  CHECK(digits(engine, sol.at("t"), 24) == t);
  CHECK(digits(engine, sol.at("u"), 24) == u);
}

TEST_CASE("sandwiched zip system agrees with its index recurrences") {
  Engine engine;
  const Solution sol = engine.solve_system(parse_system("u = zip(0 . t, 1 . u)\nt = zip(1 . u, 0 . t)\n"));
  const auto [u, t] = oracles::sandwiched_zip_pair(64);
  CHECK(digits(engine, sol.at("u"), 64) == u);
  CHECK(digits(engine, sol.at("t"), 64) == t);
}

TEST_CASE("hand-built flat system: x = 1 . plus(x, x) doubles") {
  const TablePtr table = instances::stream_table();
  System sys{table, {}};
  sys.equations.push_back(Equation{VarId("x"), stream_step(Rational(1), mk_app(table->symbol("plus"), {mk_var("x"), mk_var("x")}))});
  Engine engine;
  const Solution sol = engine.solve_system(sys);
  CHECK(instances::stream_take(engine, sol.at("x"), 5) == std::vector<Rational>{1, 2, 4, 8, 16});
}

TEST_CASE("constants and the +C summand") {
  const TablePtr table = instances::stream_table();
  Engine engine;
  const SolutionHandle ones = instances::eventually_periodic(engine, table, {}, {Rational(1)});
  System sys{table, {}};
  sys.equations.push_back(Equation{VarId("c"), ones});
  sys.equations.push_back(Equation{VarId("y"), stream_step(Rational(5), mk_var("c"))});
  const Solution sol = engine.solve_system(sys);
  CHECK(sol.at("c") == ones);
  CHECK(instances::stream_take(engine, sol.at("y"), 3) == std::vector<Rational>{5, 1, 1});
}

TEST_CASE("malformed systems are rejected") {
  const TablePtr table = instances::stream_table();
  Engine engine;
  System twice{table, {}};
  twice.equations.push_back(Equation{VarId("x"), stream_step(Rational(0), mk_var("x"))});
  twice.equations.push_back(Equation{VarId("x"), stream_step(Rational(1), mk_var("x"))});
  CHECK(code_of([&] { engine.solve_system(twice); }) == ErrorCode::ValidationFailed);

  System unknown{table, {}};
  unknown.equations.push_back(Equation{VarId("x"), stream_step(Rational(0), mk_var("nowhere"))});
  CHECK(code_of([&] { engine.solve_system(unknown); }) == ErrorCode::ValidationFailed);

  System unguarded{table, {}};
  unguarded.equations.push_back(
      Equation{VarId("x"), Context::app(table->symbol("zip"), {Context::leaf(mk_var("x")), Context::leaf(mk_var("x"))})});
  CHECK(code_of([&] { engine.solve_system(unguarded); }) == ErrorCode::ValidationFailed);

  System wrong_label{table, {}};
  Step<Term> bits;
  bits.label = true;
  bits.children.emplace_back(0, mk_var("x"));
  wrong_label.equations.push_back(Equation{VarId("x"), bits});
  CHECK(code_of([&] { engine.solve_system(wrong_label); }) == ErrorCode::ValidationFailed);
}

TEST_CASE("handles are checked") {
  Engine a, b;
  const TablePtr table = instances::stream_table();
  const SolutionHandle h = instances::eventually_periodic(a, table, {}, {Rational(1)});
  CHECK(code_of([&] { b.unfold(h); }) == ErrorCode::InvalidHandle);
  CHECK(code_of([&] { a.unfold(SolutionHandle{a.id(), 1u << 30}); }) == ErrorCode::InvalidHandle);
  CHECK(code_of([&] { a.interpret_op(table, table->symbol("plus"), std::span(&h, 1)); }) == ErrorCode::ArityMismatch);
  CHECK(code_of([&] { a.interpret_op(table, table->symbol("mult"), std::span(&h, 1)); }) == ErrorCode::ArityMismatch);
}

TEST_CASE("the rule budget turns runaway unfolding into RuleDiverged") {
  Engine engine;
  engine.set_fuse(50);
  const Solution sol = engine.solve_system(parse_system("x = 1 . shuffle(x, x)\n"));
  CHECK(code_of([&] { engine.observe(sol.at("x"), 40); }) == ErrorCode::RuleDiverged);
}

TEST_CASE("memo is deterministic and observation is depth-monotone") {
  Engine e1, e2;
  const char* text = "x = 1 . shuffle(x, y)\ny = conv(2 . y, 1 . x)\n";
  const Solution s1 = e1.solve_system(parse_system(text));
  const Solution s2 = e2.solve_system(parse_system(text));
  for (const char* v : {"x", "y"}) {
    const auto t8 = e1.observe(s1.at(v), 8);
    CHECK(t8 == e1.observe(s1.at(v), 8));
    CHECK(t8 == e2.observe(s2.at(v), 8));
    CHECK(e1.observe(s1.at(v), 5).is_prefix_of(t8));
    CHECK(e1.recompute().observe(s1.at(v), 8) == t8);
  }
  const std::size_t nodes = e1.node_count();
  e1.observe(s1.at("x"), 8);
  CHECK(e1.node_count() == nodes);
}

TEST_CASE("given builds a state from one observation") {
  Engine engine;
  const TablePtr table = instances::stream_table();
  const SolutionHandle ones = instances::eventually_periodic(engine, table, {}, {Rational(1)});
  Step<SolutionHandle> s;
  s.label = Rational(7);
  s.children.emplace_back(0, ones);
  const SolutionHandle h = engine.given(table, s);
  CHECK(instances::stream_take(engine, h, 3) == std::vector<Rational>{7, 1, 1});
  CHECK(engine.unfold(h) == s);
  Step<SolutionHandle> bad;
  bad.label = true;
  CHECK(code_of([&] { engine.given(table, bad); }) == ErrorCode::KindMismatch);
}

TEST_CASE("elaborate_guards unfolds a sandwiched context once") {
  Engine engine;
  const TablePtr table = instances::stream_table();
  const SolutionHandle ones = instances::eventually_periodic(engine, table, {}, {Rational(1)});
  const Context ctx = Context::app(table->symbol("plus"),
                                   {Context::guard(stream_step(Rational(3), mk_var("o"))), Context::guard(stream_step(Rational(4), mk_var("o")))});
  Binding b{{VarId("o"), ones}};
  const Step<SolutionHandle> s = engine.elaborate_guards(table, ctx, b);
  CHECK(label_eq(s.label, Label{Rational(7)}));
  CHECK(instances::stream_take(engine, s.at(0), 3) == std::vector<Rational>{2, 2, 2});
}

TEST_CASE("interpret binds variables and describes states") {
  Engine engine;
  const TablePtr table = instances::stream_table();
  const SolutionHandle ones = instances::eventually_periodic(engine, table, {}, {Rational(1)});
  const Term t = mk_app(table->symbol("plus"), {mk_var("a"), mk_app(table->symbol("const"), Rational(2), {})});
  const SolutionHandle h = engine.interpret(table, t, Binding{{VarId("a"), ones}});
  CHECK(instances::stream_take(engine, h, 3) == std::vector<Rational>{3, 1, 1});
  CHECK(!engine.describe(h).empty());
  CHECK(engine.kind_of(h).tag() == KindTag::Stream);
}

TEST_CASE("engines move") {
  Engine a;
  const Solution sol = a.solve_system(parse_system("x = 2 . x\n"));
  Engine b = std::move(a);
  CHECK(instances::stream_take(b, sol.at("x"), 2) == std::vector<Rational>{2, 2});
}

TEST_CASE("composition of systems") {
  Engine engine;
  const System both = parse_system("x = 1 . zip(x, y)\ny = 0 . plus(x, y)\nz = 2 . shuffle(z, x)\n");
  System f{both.table, {*both.find(VarId("x")), *both.find(VarId("y"))}};
  System e{both.table, {*both.find(VarId("z"))}};
  e.equations.push_back(Equation{VarId("w"), VarId("x")});
  const Composition c = compose_systems(engine, f, e, 10);
  CHECK(c.law_holds);
  CHECK(c.disagreements.empty());
  CHECK(c.combined.equations.size() == 4);

  System clash{both.table, {*both.find(VarId("x"))}};
  CHECK(code_of([&] { compose_systems(engine, f, clash, 4); }) == ErrorCode::VariableClash);
}

TEST_CASE("processes: solution of P = a.(P | c.0) + b.0 unfolds to the expected steps") {
  Engine engine;
  const CcsFile file = parse_ccs("P = a.(P | c.0) + b.0\n");
  const CompiledCcs c = compile_ccs(file);
  const Solution sol = engine.solve_system(c.system);
  const Step<SolutionHandle> s = engine.unfold(sol.at("P"));
  REQUIRE(s.children.size() == 2);
  CHECK(c.actions.name(s.children[0].first) == "a");
  CHECK(c.actions.name(s.children[1].first) == "b");
  CHECK(engine.unfold(s.children[1].second).children.empty());
}

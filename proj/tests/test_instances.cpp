#include <doctest.h>

#include <random>

#include "corec/checking.hpp"
#include "corec/error.hpp"
#include "corec/frontends.hpp"
#include "corec/instances.hpp"
#include "corec/oracles.hpp"

using namespace corec;

namespace {

std::vector<Rational> take(Engine& engine, const TablePtr& table, const char* op, SolutionHandle a, SolutionHandle b,
                           std::size_t n) {
  const SolutionHandle args[] = {a, b};
  return instances::stream_take(engine, engine.interpret_op(table, table->symbol(op), args), n);
}

}  // namespace

TEST_CASE("built-in tables validate") {
  CHECK(validate_table(*instances::stream_table()).empty());
  CHECK(validate_table(*instances::tree_table()).empty());
  CHECK(validate_table(*instances::language_table({"a", "b", "c"})).empty());
  CHECK(validate_table(*instances::ccs_table(ActionSet::from_names({"a", "b"}))).empty());
  CHECK(instances::language_tower({"a"}).size() == 5);
}

TEST_CASE("stream basics") {
  Engine engine;
  const TablePtr t = instances::stream_table();
  const SolutionHandle ones = instances::eventually_periodic(engine, t, {}, {Rational(1)});
  const SolutionHandle nat = instances::eventually_periodic(engine, t, {Rational(0), Rational(1), Rational(2)}, {});
  CHECK(instances::stream_take(engine, nat, 5) == std::vector<Rational>{0, 1, 2, 0, 0});
  CHECK(take(engine, t, "plus", ones, nat, 4) == std::vector<Rational>{1, 2, 3, 1});
  CHECK(take(engine, t, "zip", ones, nat, 6) == std::vector<Rational>{1, 0, 1, 1, 1, 2});
  const SolutionHandle half = engine.interpret_op(t, t->symbol("mult"), std::span(&ones, 1), ratio(1, 2));
  CHECK(instances::stream_take(engine, half, 2) == std::vector<Rational>{ratio(1, 2), ratio(1, 2)});
  const SolutionHandle reg = engine.interpret_op(t, t->symbol("register"), std::span(&nat, 1), Rational(9));
  CHECK(instances::stream_take(engine, reg, 3) == std::vector<Rational>{9, 0, 1});
  // ones (x) ones = 1, 2, 4, 8; ones x ones = 1, 2, 3, 4.
  CHECK(take(engine, t, "shuffle", ones, ones, 5) == std::vector<Rational>{1, 2, 4, 8, 16});
  CHECK(take(engine, t, "conv", ones, ones, 5) == std::vector<Rational>{1, 2, 3, 4, 5});
}

TEST_CASE("stream products against the oracles on random eventually periodic streams") {
  Engine engine;
  const TablePtr t = instances::stream_table();
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 4), len(0, 3), plen(0, 2);
  auto lit = [&] {
    StreamLiteral s;
    for (int i = len(rng); i > 0; --i) s.prefix.push_back(ratio(num(rng), den(rng)));
    for (int i = plen(rng); i > 0; --i) s.period.push_back(ratio(num(rng), den(rng)));
    return s;
  };
  for (int i = 0; i < 30; ++i) {
    const StreamLiteral a = lit(), b = lit();
    const SolutionHandle x = instances::eventually_periodic(engine, t, a.prefix, a.period);
    const SolutionHandle y = instances::eventually_periodic(engine, t, b.prefix, b.period);
    const auto s = oracles::expand(a, 10), u = oracles::expand(b, 10);
    CHECK(take(engine, t, "shuffle", x, y, 10) == oracles::binomial_shuffle(s, u, 10));
    CHECK(take(engine, t, "conv", x, y, 10) == oracles::cauchy_convolution(s, u, 10));
  }
}

TEST_CASE("trees") {
  Engine engine;
  const TablePtr t = instances::tree_table();
  const SolutionHandle pi = engine.interpret_op(t, t->symbol("pi"), {});
  const SolutionHandle two = engine.interpret_op(t, t->symbol("const"), {}, Rational(2));
  const SolutionHandle args[] = {pi, two};
  const SolutionHandle sum = engine.interpret_op(t, t->symbol("plus"), args);
  const ObservationTree o = engine.observe(sum, 2);
  CHECK(label_eq(o.label, Label{instances::default_pi() + 2}));
  CHECK(label_eq(o.children[1].second.label, Label{instances::default_pi()}));
}

TEST_CASE("languages: fixed terms") {
  Engine engine;
  const TablePtr t = instances::language_table({"a", "b"});
  const SolutionHandle a = engine.interpret_op(t, t->symbol("letter_a"), {});
  const SolutionHandle b = engine.interpret_op(t, t->symbol("letter_b"), {});
  const SolutionHandle ab_args[] = {a, b};
  const SolutionHandle ab = engine.interpret_op(t, t->symbol("concat"), ab_args);
  const SolutionHandle star = engine.interpret_op(t, t->symbol("star"), std::span(&ab, 1));
  auto in = [&](SolutionHandle h, std::string_view w) {
    return instances::member(engine, h, instances::word_ports(t->kind(), w));
  };
  CHECK(in(star, ""));
  CHECK(in(star, "abab"));
  CHECK_FALSE(in(star, "aba"));
  const SolutionHandle co = engine.interpret_op(t, t->symbol("compl"), std::span(&star, 1));
  CHECK(in(co, "aba"));
  CHECK_FALSE(in(co, "ab"));
  const SolutionHandle pre = engine.interpret_op(t, t->symbol("prefix_b"), std::span(&ab, 1));
  CHECK(in(pre, "bab"));
  CHECK_FALSE(in(pre, "ab"));
  CHECK_THROWS_AS(instances::word_ports(t->kind(), "abc"), Error);
}

TEST_CASE("languages: multi-character letters split on spaces") {
  const BehaviorKind k = BehaviorKind::language({"if", "then"});
  CHECK(instances::word_ports(k, "if then if") == std::vector<Port>{0, 1, 0});
}

TEST_CASE("processes: relabel and restrict") {
  const ActionSet acts = ActionSet::from_names({"a", "b"});
  const TablePtr base = instances::ccs_table(acts);
  std::vector<std::size_t> swap(acts.size());
  for (std::size_t i = 0; i < swap.size(); ++i) swap[i] = i;
  std::swap(swap[*acts.find("a")], swap[*acts.find("b")]);
  std::swap(swap[*acts.find("'a")], swap[*acts.find("'b")]);
  CHECK_NOTHROW(instances::with_relabel(base, swap));
  std::vector<std::size_t> moves_tau = swap;
  moves_tau[acts.tau()] = *acts.find("a");
  CHECK_THROWS_AS(instances::with_relabel(base, moves_tau), Error);
  auto [t2, op] = instances::with_sum(base, 9);
  CHECK(op.arity == 9);
  CHECK(validate_table(*t2).empty());
}

TEST_CASE("processes: seq and alt against the SOS oracle") {
  const CcsFile file = parse_ccs("actions a b c\nP = a.(P | c.0) + b.0\nL = a.L + b.0\n");
  CompiledCcs c = compile_ccs(file);
  Engine engine;
  const Solution sol = engine.solve_system(c.system);
  Binding binding;
  for (const auto& [v, h] : sol.entries()) binding.emplace(v, h);
  const char* cases[] = {
      "a.0 ; b.0",          "(a.0 + b.0) ; c.0",      "0 ; a.0",          "a.b.0 ; (c.0 + a.0)",
      "(a.0 | 'a.0) ; c.0", "alt(a.0, b.0)",          "alt(0, b.0)",      "alt(a.b.0, c.0)",
      "alt(a.0 + b.0, c.a.0)", "alt(a.0, 0)",         "P ; b.0",          "alt(L, c.L)",
      "(a.0 | b.0)\\{a}",   "(a.c.0)[b/a, a/c]",      "alt(a.0, b.0) ; alt(c.0, a.0)",
  };
  for (const char* text : cases) {
    CAPTURE(text);
    const Agent agent = parse_agent(text, file);
    const SolutionHandle h = engine.interpret(c.system.table, agent_term(c, agent), binding);
    CHECK(engine.observe(h, 4) == oracles::sos_tree(agent, file, c.actions, 4));
  }
}

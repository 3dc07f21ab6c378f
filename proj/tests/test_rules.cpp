#include <doctest.h>

#include "corec/behavior.hpp"
#include "corec/error.hpp"
#include "corec/instances.hpp"
#include "corec/rules.hpp"
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

Step<Term> stream_step(Rational r, Term tail) {
  Step<Term> s;
  s.label = std::move(r);
  s.children.emplace_back(0, std::move(tail));
  return s;
}

}  // namespace

TEST_CASE("behavior kinds fix labels and ports") {
  const BehaviorKind s = BehaviorKind::stream(), t = BehaviorKind::tree();
  const BehaviorKind l = BehaviorKind::language({"a", "b"});
  CHECK(s.port_count() == 1);
  CHECK(t.port_count() == 2);
  CHECK(t.port_name(1) == "R");
  CHECK(l.find_port("b") == Port{1});
  CHECK(l.label_fits(Label{true}));
  CHECK_FALSE(l.label_fits(Label{Rational(1)}));
  CHECK(code_of([] { BehaviorKind::language({}); }) == ErrorCode::EmptyAlphabet);
  CHECK(code_of([] { label_eq(Label{Rational(0)}, Label{false}); }) == ErrorCode::KindMismatch);
  CHECK(label_eq(Label{ratio(2, 4)}, Label{ratio(1, 2)}));
}

TEST_CASE("action sets have an involutive complement fixing tau") {
  const ActionSet a = ActionSet::from_names({"a", "b"});
  REQUIRE(a.size() == 5);
  const std::size_t x = *a.find("a"), nx = *a.find("'a");
  CHECK(a.complement(x) == nx);
  CHECK(a.complement(nx) == x);
  CHECK(a.complement(a.tau()) == a.tau());
  CHECK(code_of([] { ActionSet::make({"a", "b"}, {1, 1}, 0); }) == ErrorCode::BadActionStructure);
}

TEST_CASE("process steps canonicalize as sets") {
  const BehaviorKind p = BehaviorKind::process(ActionSet::from_names({"a"}));
  Step<int> s;
  s.children = {{1, 3}, {0, 2}, {1, 3}};
  const Step<int> c = canonicalize_step(p, s);
  CHECK(c.children == std::vector<std::pair<Port, int>>{{0, 2}, {1, 3}});
  CHECK(step_violation(BehaviorKind::stream(), s).has_value());
}

TEST_CASE("observation prefixes") {
  ObservationTree leaf;
  ObservationTree one{false, Label{Rational(1)}, {{0, leaf}}};
  ObservationTree two{false, Label{Rational(1)}, {{0, ObservationTree{false, Label{Rational(2)}, {{0, leaf}}}}}};
  CHECK(one.is_prefix_of(two));
  CHECK_FALSE(two.is_prefix_of(one));
  CHECK(two.depth() == 2);
  CHECK(stream_prefix(two) == std::vector<Rational>{1, 2});
}

TEST_CASE("label expressions") {
  const auto e = LabelExpr::binary(LabelExpr::Op::Add, LabelExpr::premise(0),
                                   LabelExpr::binary(LabelExpr::Op::Mul, LabelExpr::premise(1),
                                                     LabelExpr::constant(Label{Rational(3)})));
  const Label labels[] = {Label{Rational(1)}, Label{ratio(1, 3)}};
  CHECK(label_eq(e.eval_labels(labels), Label{Rational(2)}));
  CHECK(e.max_premise() == 2);
  CHECK(e.references_premises());
  const Label bits[] = {Label{true}};
  CHECK(code_of([&] { e.eval_labels(bits); }) != ErrorCode::SyntaxError);
}

TEST_CASE("build_table rejects missing, duplicate and foreign rules") {
  const BehaviorKind kind = BehaviorKind::stream();
  auto sig = Signature::make({{"ones", 0}});
  const OpSym ones = sig->at(0);
  GsosRule rule{ones, [ones](const RuleInput&) { return stream_step(Rational(1), mk_app(ones, {})); }};
  CHECK(code_of([&] { build_table(kind, sig, {}); }) == ErrorCode::MissingRule);
  CHECK(code_of([&] { build_table(kind, sig, {rule, rule}); }) == ErrorCode::DuplicateRule);
  auto other = Signature::make({{"zeros", 0}});
  GsosRule foreign{other->at(0), rule.conclude};
  CHECK(code_of([&] { build_table(kind, sig, {rule, foreign}); }) == ErrorCode::ForeignSymbol);

  const TablePtr table = build_table(kind, sig, {rule});
  CHECK(validate_table(*table).empty());
  Engine engine;
  const auto h = engine.interpret_op(table, ones, {});
  CHECK(instances::stream_take(engine, h, 4) == std::vector<Rational>{1, 1, 1, 1});
}

TEST_CASE("rules with the wrong port shape are rejected") {
  auto sig = Signature::make({{"bad", 0}});
  GsosRule rule{sig->at(0), [](const RuleInput&) {
                  Step<Term> s;
                  s.label = Rational(0);
                  return s;
                }};
  CHECK_THROWS_AS(build_table(BehaviorKind::stream(), sig, {rule}), Error);
}

TEST_CASE("a missing rule is reported by validation") {
  auto sig = Signature::make({{"hole", 0}});
  RuleTable table(BehaviorKind::stream(), sig, {std::monostate{}});
  const auto v = validate_table(table);
  REQUIRE(v.size() == 1);
  CHECK(v[0].symbol == "hole");
}

TEST_CASE("add_rule extends a table and refuses duplicates") {
  const TablePtr base = instances::stream_base_table();
  const OpSym plus = base->symbol("plus");
  GsosRule twice = make_rule({"twice", 1}, [plus](const RuleInput& in) {
    const Premise& x = in.args[0];
    return stream_step(x.number() * 2, mk_app(plus, {x.child(0), x.child(0)}));
  });
  const TablePtr t = add_rule(base, twice);
  CHECK(t->signature()->size() == base->signature()->size() + 1);
  CHECK(code_of([&] { add_rule(t, twice); }) == ErrorCode::DuplicateRule);
  Engine engine;
  const auto ones = instances::eventually_periodic(engine, t, {}, {Rational(1)});
  const auto h = engine.interpret_op(t, t->symbol("twice"), std::span(&ones, 1));
  CHECK(instances::stream_take(engine, h, 3) == std::vector<Rational>{2, 2, 2});
}

TEST_CASE("extensions keep old symbols resolvable") {
  const TablePtr base = instances::stream_base_table();
  const TablePtr full = instances::stream_table();
  const OpSym zip = base->symbol("zip");
  CHECK(full->resolve(zip).name == "zip");
  CHECK(full->signature()->is_summand(base->signature()->id()));
  auto unrelated = Signature::make({{"q", 0}});
  CHECK(code_of([&] { full->resolve(unrelated->at(0)); }) == ErrorCode::ForeignSymbol);
}

TEST_CASE("srps registration rejects unguarded contexts") {
  const TablePtr base = instances::stream_base_table();
  auto sig = Signature::make({{"loop", 1}});
  const OpSym op = sig->at(0);
  const OpSym plus = base->symbol("plus");
  SrpsDef def{sig, {SrpsRule{op, [plus](const RuleInput& in) {
                              return Context::app(plus, {Context::leaf(in.args[0].self), Context::leaf(in.args[0].self)});
                            }}}};
  CHECK(code_of([&] { register_srps(base, def); }) == ErrorCode::UnguardedPath);
}

TEST_CASE("contexts report unguarded paths") {
  const TablePtr base = instances::stream_base_table();
  const OpSym zip = base->symbol("zip");
  const Context guarded = Context::app(zip, {Context::guard(stream_step(Rational(0), mk_var("t"))),
                                             Context::leaf(mk_app(base->symbol("const"), Rational(1), {}))});
  CHECK_FALSE(guarded.unguarded_path().has_value());
  CHECK(guarded.free_vars() == std::set<VarId>{VarId("t")});
  const Context bad = Context::app(zip, {Context::leaf(mk_var("x")), Context::leaf(mk_var("y"))});
  CHECK(bad.unguarded_path().has_value());
}

TEST_CASE("probe premises cover every label shape") {
  CHECK(!probe_premises(BehaviorKind::stream(), 2).empty());
  CHECK(!probe_premises(BehaviorKind::language({"a"}), 1).empty());
  CHECK(!probe_premises(BehaviorKind::process(ActionSet::from_names({"a"})), 1).empty());
}

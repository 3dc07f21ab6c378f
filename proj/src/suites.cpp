#include <functional>
#include <map>
#include <random>

#include "corec/checking.hpp"
#include "corec/error.hpp"
#include "corec/frontends.hpp"
#include "corec/instances.hpp"
#include "corec/oracles.hpp"

namespace corec {

namespace {

using instances::eventually_periodic;

constexpr std::uint32_t kSeed = 20240611;

CheckReport verdict(std::string name, bool pass, std::string detail) {
  return CheckReport{std::move(name), pass, std::move(detail), std::nullopt};
}

// Any failure inside a check becomes a failed report rather than an abort.
CheckReport guarded(const std::string& name, const std::function<CheckReport()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    return verdict(name, false, std::string(to_string(e.code())) + ": " + e.what());
  }
}

Rational random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 3);
  return ratio(num(rng), den(rng));
}

SolutionHandle random_stream(Engine& engine, const TablePtr& table, std::mt19937& rng) {
  std::uniform_int_distribution<int> len(0, 3), plen(1, 3);
  std::vector<Rational> prefix, period;
  for (int i = len(rng); i > 0; --i) prefix.push_back(random_rational(rng));
  for (int i = plen(rng); i > 0; --i) period.push_back(random_rational(rng));
  return eventually_periodic(engine, table, prefix, period);
}

// Reports the first pair of handles that differ.
CheckReport compare_all(Engine& engine, const std::string& name,
                        const std::vector<std::pair<SolutionHandle, SolutionHandle>>& pairs, std::size_t depth) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CheckReport r = compare_report(engine, pairs[i].first, pairs[i].second, depth, name);
    if (!r.pass) {
      r.detail = "case " + std::to_string(i) + " differs";
      return r;
    }
  }
  return verdict(name, true, std::to_string(pairs.size()) + " cases equal to depth " + std::to_string(depth));
}

// ---------------------------------------------------------------------------
// modularity

CheckReport restriction_check() {
  Engine engine;
  std::mt19937 rng(kSeed);
  const TablePtr base = instances::stream_base_table();
  const TablePtr full = instances::stream_table();
  const OpSym plus = base->symbol("plus"), zip = base->symbol("zip"), mult = base->symbol("mult");
  std::vector<std::pair<SolutionHandle, SolutionHandle>> pairs;
  for (int i = 0; i < 10; ++i) {
    const SolutionHandle x = random_stream(engine, base, rng), y = random_stream(engine, base, rng);
    const Term t = mk_app(plus, {mk_app(zip, {param_term(x), param_term(y)}),
                                 mk_app(mult, random_rational(rng), {mk_app(zip, {param_term(y), param_term(x)})})});
    pairs.emplace_back(engine.interpret(base, t), engine.interpret(full, t));
  }
  CheckReport r = compare_all(engine, "restriction", pairs, 12);
  if (r.pass) r.detail = "old operations of the extended table interpret as before (" + r.detail + ")";
  return r;
}

CheckReport order_check() {
  Engine engine;
  std::mt19937 rng(kSeed + 1);
  const TablePtr base = instances::stream_base_table();
  const TablePtr shuffle_first = extend_with_rps(base, instances::shuffle_rps(base));
  const TablePtr sc = extend_with_rps(shuffle_first, instances::conv_rps(shuffle_first));
  const TablePtr conv_first = extend_with_rps(base, instances::conv_rps(base));
  const TablePtr cs = extend_with_rps(conv_first, instances::shuffle_rps(conv_first));
  std::vector<std::pair<SolutionHandle, SolutionHandle>> pairs;
  for (int i = 0; i < 10; ++i) {
    const SolutionHandle x = random_stream(engine, base, rng), y = random_stream(engine, base, rng);
    for (const char* name : {"shuffle", "conv"}) {
      const SolutionHandle args[] = {x, y};
      pairs.emplace_back(engine.interpret_op(sc, sc->symbol(name), args), engine.interpret_op(cs, cs->symbol(name), args));
    }
    const Term mixed_sc = mk_app(sc->symbol("conv"), {mk_app(sc->symbol("shuffle"), {param_term(x), param_term(y)}), param_term(x)});
    const Term mixed_cs = mk_app(cs->symbol("conv"), {mk_app(cs->symbol("shuffle"), {param_term(x), param_term(y)}), param_term(x)});
    pairs.emplace_back(engine.interpret(sc, mixed_sc), engine.interpret(cs, mixed_cs));
  }
  CheckReport r = compare_all(engine, "order-independence", pairs, 12);
  if (r.pass) r.detail = "shuffle-then-conv and conv-then-shuffle agree (" + r.detail + ")";
  return r;
}

std::vector<Equation> only(const System& s, const std::vector<std::string>& names) {
  std::vector<Equation> out;
  for (const auto& n : names) out.push_back(*s.find(VarId(n)));
  return out;
}

CheckReport compositionality_streams() {
  Engine engine;
  const System both = parse_system(
      "kind stream\n"
      "x = 1 . zip(x, y)\n"
      "y = 0 . plus(x, y)\n"
      "z = 2 . shuffle(z, x)\n"
      "u = conv(1 . x, zip(2 . z, 3 . u))\n");
  System f{both.table, only(both, {"x", "y"})};
  System e{both.table, only(both, {"z", "u"})};
  e.equations.push_back(Equation{VarId("w"), VarId("y")});
  const Composition c = compose_systems(engine, f, e, 12);
  std::string detail = c.law_holds ? "sol(f (+) e) = [sol(sol f . e), sol f] to depth 12" : c.disagreements.front();
  return verdict("compositionality-streams", c.law_holds, detail);
}

CheckReport compositionality_processes() {
  Engine engine;
  const CcsFile file = parse_ccs(
      "P = a.(P | c.0) + b.0\n"
      "R = 'c.R + a.0\n"
      "Q = c.(Q + P) + alt(b.0, 'c.R)\n"
      "S = (a.P | 'c.R)\\{c} ; b.S\n");
  const CompiledCcs compiled = compile_ccs(file);
  System f{compiled.system.table, only(compiled.system, {"P", "R"})};
  System e{compiled.system.table, only(compiled.system, {"Q", "S"})};
  e.equations.push_back(Equation{VarId("T"), VarId("P")});
  const Composition c = compose_systems(engine, f, e, 4);
  std::string detail = c.law_holds ? "sol(f (+) e) = [sol(sol f . e), sol f] to depth 4" : c.disagreements.front();
  return verdict("compositionality-processes", c.law_holds, detail);
}

CheckReport srps_degenerate_check() {
  Engine engine;
  std::mt19937 rng(kSeed + 2);
  const TablePtr base = instances::stream_base_table();
  const TablePtr with_rps = extend_with_rps(base, instances::shuffle_rps(base));

  // The same shuffle, written as guarded contexts that are bare guards.
  auto sig = Signature::make({{"shuffle", 2, false}});
  const OpSym op = sig->at(0);
  const OpSym plus = base->symbol("plus");
  SrpsDef def{sig, {}};
  def.rules.push_back(SrpsRule{op, [op, plus](const RuleInput& in) {
                                 const Premise& x = in.args[0];
                                 const Premise& y = in.args[1];
                                 Step<Term> s;
                                 s.label = Rational(x.number() * y.number());
                                 s.children.emplace_back(0, mk_app(plus, {mk_app(op, {x.self, y.child(0)}),
                                                                          mk_app(op, {x.child(0), y.self})}));
                                 return Context::guard(std::move(s));
                               }});
  const TablePtr with_srps = register_srps(base, def);
  std::vector<std::pair<SolutionHandle, SolutionHandle>> pairs;
  for (int i = 0; i < 10; ++i) {
    const SolutionHandle args[] = {random_stream(engine, base, rng), random_stream(engine, base, rng)};
    pairs.emplace_back(engine.interpret_op(with_rps, with_rps->symbol("shuffle"), args),
                       engine.interpret_op(with_srps, with_srps->symbol("shuffle"), args));
  }
  CheckReport r = compare_all(engine, "srps-degenerate", pairs, 12);
  if (r.pass) r.detail = "guard-only srps agrees with its rps (" + r.detail + ")";
  return r;
}

std::vector<CheckReport> modularity_suite() {
  return {guarded("restriction", restriction_check), guarded("order-independence", order_check),
          guarded("compositionality-streams", compositionality_streams),
          guarded("compositionality-processes", compositionality_processes),
          guarded("srps-degenerate", srps_degenerate_check)};
}

// ---------------------------------------------------------------------------
// language-laws

using oracles::LangPtr;
using oracles::LangTerm;

LangPtr random_lang(std::mt19937& rng, std::size_t depth, std::size_t letters) {
  using Op = LangTerm::Op;
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 2 : 9);
  std::uniform_int_distribution<std::size_t> letter(0, letters - 1);
  std::bernoulli_distribution coin;
  switch (pick(rng)) {
    case 0: return oracles::lang(coin(rng) ? Op::Empty : Op::Eps);
    case 1:
    case 2: return oracles::lang(Op::Letter, {}, letter(rng));
    case 3: return oracles::lang(Op::Union, {random_lang(rng, depth - 1, letters), random_lang(rng, depth - 1, letters)});
    case 4: return oracles::lang(Op::Inter, {random_lang(rng, depth - 1, letters), random_lang(rng, depth - 1, letters)});
    case 5: return oracles::lang(Op::Compl, {random_lang(rng, depth - 1, letters)});
    case 6: return oracles::lang(Op::Concat, {random_lang(rng, depth - 1, letters), random_lang(rng, depth - 1, letters)});
    case 7: return oracles::lang(Op::Star, {random_lang(rng, depth - 1, letters)});
    case 8: return oracles::lang(Op::Prefix, {random_lang(rng, depth - 1, letters)}, letter(rng));
    default: {
      std::vector<LangPtr> kids;
      for (std::size_t a = 0; a < letters; ++a) kids.push_back(random_lang(rng, depth - 1, letters));
      return oracles::lang(Op::Cinv, std::move(kids), 0, coin(rng));
    }
  }
}

Term lang_to_term(const LangTerm& t, const TablePtr& table) {
  using Op = LangTerm::Op;
  const auto& alphabet = table->kind().alphabet();
  std::vector<Term> kids;
  for (const auto& k : t.kids) kids.push_back(lang_to_term(*k, table));
  switch (t.op) {
    case Op::Empty: return mk_app(table->symbol("empty"), {});
    case Op::Eps: return mk_app(table->symbol("eps"), {});
    case Op::Letter: return mk_app(table->symbol("letter_" + alphabet[t.letter]), {});
    case Op::Union: return mk_app(table->symbol("union"), std::move(kids));
    case Op::Inter: return mk_app(table->symbol("inter"), std::move(kids));
    case Op::Compl: return mk_app(table->symbol("compl"), std::move(kids));
    case Op::Concat: return mk_app(table->symbol("concat"), std::move(kids));
    case Op::Star: return mk_app(table->symbol("star"), std::move(kids));
    case Op::Prefix: return mk_app(table->symbol("prefix_" + alphabet[t.letter]), std::move(kids));
    case Op::Cinv: return mk_app(table->symbol(t.accept ? "cinv_1" : "cinv_0"), std::move(kids));
  }
  return {};
}

std::vector<CheckReport> language_suite() {
  std::vector<CheckReport> out;
  out.push_back(guarded("membership", [] {
    Engine engine;
    std::mt19937 rng(kSeed + 3);
    const TablePtr table = instances::language_table({"a", "b"});
    const auto words = oracles::all_words(2, 6);
    for (int i = 0; i < 50; ++i) {
      const LangPtr l = random_lang(rng, 4, 2);
      const SolutionHandle h = engine.interpret(table, lang_to_term(*l, table));
      for (const auto& w : words) {
        std::vector<Port> ports(w.begin(), w.end());
        if (instances::member(engine, h, ports) != oracles::lang_member(*l, w)) {
          return verdict("membership", false, "term " + std::to_string(i) + " (" + engine.describe(h) +
                                                   ") disagrees with the oracle on a word of length " +
                                                   std::to_string(w.size()));
        }
      }
    }
    return verdict("membership", true, "50 random terms agree with the oracle on all 127 words of length <= 6");
  }));
  out.push_back(guarded("star-derivative", [] {
    Engine engine;
    std::mt19937 rng(kSeed + 4);
    const TablePtr table = instances::language_table({"a", "b"});
    const OpSym star = table->symbol("star"), concat = table->symbol("concat");
    std::vector<std::pair<SolutionHandle, SolutionHandle>> pairs;
    for (int i = 0; i < 50; ++i) {
      const SolutionHandle l = engine.interpret(table, lang_to_term(*random_lang(rng, 3, 2), table));
      const SolutionHandle ls = engine.interpret_op(table, star, std::span(&l, 1));
      for (Port a = 0; a < 2; ++a) {
        const SolutionHandle lhs = engine.unfold(ls).at(a);
        const SolutionHandle args[] = {engine.unfold(l).at(a), ls};
        pairs.emplace_back(lhs, engine.interpret_op(table, concat, args));
      }
    }
    CheckReport r = compare_all(engine, "star-derivative", pairs, 5);
    if (r.pass) r.detail = "(L*)_a = L_a . L* on 50 random terms (" + r.detail + ")";
    return r;
  }));
  return out;
}

// ---------------------------------------------------------------------------
// instances

std::vector<CheckReport> instance_suite() {
  std::vector<CheckReport> out;
  auto validate = [&](const std::string& name, const TablePtr& table) {
    out.push_back(guarded("valid-" + name, [&] {
      auto v = validate_table(*table);
      return verdict("valid-" + name, v.empty(),
                     v.empty() ? std::to_string(table->signature()->size()) + " rules pass validation"
                               : v.front().symbol + ": " + v.front().message);
    }));
  };
  validate("streams", instances::stream_table());
  validate("trees", instances::tree_table());
  validate("languages", instances::language_table({"a", "b"}));
  validate("processes", instances::ccs_table(ActionSet::from_names({"a", "b", "c"})));

  out.push_back(guarded("zip-pairs", [] {
    Engine engine;
    const System sandwiched = parse_system("u = zip(0 . t, 1 . u)\nt = zip(1 . u, 0 . t)\n");
    const System flat = parse_system("t = 1 . zip(u, t)\nu = 0 . zip(t, u)\n");
    const Solution s1 = engine.solve_system(sandwiched), s2 = engine.solve_system(flat);
    auto digits = [&](SolutionHandle h, std::size_t n) {
      std::vector<int> out;
      for (const auto& r : instances::stream_take(engine, h, n)) out.push_back(static_cast<int>(r.get_num().get_si()));
      return out;
    };
    const auto [u, t] = oracles::sandwiched_zip_pair(32);
    const auto [ft, fu] = oracles::flat_zip_pair(16);
    const bool ok = digits(s1.at("u"), 32) == u && digits(s1.at("t"), 32) == t && digits(s2.at("t"), 16) == ft &&
                    digits(s2.at("u"), 16) == fu;
    return verdict("zip-pairs", ok, ok ? "sandwiched and flat zip systems match their index recurrences"
                                       : "a zip system differs from its index recurrence");
  }));
  out.push_back(guarded("stream-products", [] {
    Engine engine;
    std::mt19937 rng(kSeed + 5);
    const TablePtr table = instances::stream_table();
    for (int i = 0; i < 20; ++i) {
      std::vector<Rational> p1{random_rational(rng)}, q1{random_rational(rng), random_rational(rng)};
      std::vector<Rational> p2{}, q2{random_rational(rng)};
      const SolutionHandle args[] = {eventually_periodic(engine, table, p1, q1), eventually_periodic(engine, table, p2, q2)};
      const auto s = oracles::expand({p1, q1}, 12), t = oracles::expand({p2, q2}, 12);
      const auto sh = instances::stream_take(engine, engine.interpret_op(table, table->symbol("shuffle"), args), 12);
      const auto cv = instances::stream_take(engine, engine.interpret_op(table, table->symbol("conv"), args), 12);
      if (sh != oracles::binomial_shuffle(s, t, 12)) return verdict("stream-products", false, "shuffle differs in case " + std::to_string(i));
      if (cv != oracles::cauchy_convolution(s, t, 12)) return verdict("stream-products", false, "conv differs in case " + std::to_string(i));
    }
    return verdict("stream-products", true, "shuffle and conv match their oracles on 20 pairs, prefix 12");
  }));
  out.push_back(guarded("gnf", [] {
    Engine engine;
    const GnfFile g = parse_gnf("terminals a b\nnonterminals S B\nstart S\nS -> a S B | b\nB -> b\n");
    const Solution sol = engine.solve_system(compile_gnf(g));
    const TablePtr table = instances::language_table(g.terminals);
    for (const auto& w : oracles::all_words(2, 7)) {
      std::vector<std::string> letters;
      for (auto a : w) letters.push_back(g.terminals[a]);
      std::vector<Port> ports(w.begin(), w.end());
      if (instances::member(engine, sol.at("S"), ports) != oracles::gnf_derives(g, letters)) {
        return verdict("gnf", false, "disagreement on a word of length " + std::to_string(w.size()));
      }
    }
    return verdict("gnf", true, "a^n b b^n agrees with the derivation oracle on all words of length <= 7");
  }));
  out.push_back(guarded("ccs", [] {
    Engine engine;
    const CcsFile file = parse_ccs("P = a.(P | c.0) + b.0\n");
    const CompiledCcs c = compile_ccs(file);
    const Solution sol = engine.solve_system(c.system);
    const ObservationTree got = engine.observe(sol.at("P"), 4);
    const ObservationTree want = oracles::sos_tree(Agent::var("P"), file, c.actions, 4);
    CheckReport d = diagram_check(engine, c.system, sol, 4);
    if (!d.pass) return d;
    return verdict("ccs", got == want, got == want ? "P = a.(P | c.0) + b.0 matches the SOS oracle to depth 4"
                                                   : "P differs from the SOS oracle");
  }));
  return out;
}

// ---------------------------------------------------------------------------
// invariants

Term random_stream_term(std::mt19937& rng, const TablePtr& table, const std::vector<Term>& leaves, std::size_t depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 7);
  std::uniform_int_distribution<std::size_t> leaf(0, leaves.size() - 1);
  auto sub = [&] { return random_stream_term(rng, table, leaves, depth - 1); };
  switch (pick(rng)) {
    case 0: return leaves[leaf(rng)];
    case 1: return mk_app(table->symbol("const"), random_rational(rng), {});
    case 2: return mk_app(table->symbol("plus"), {sub(), sub()});
    case 3: return mk_app(table->symbol("zip"), {sub(), sub()});
    case 4: return mk_app(table->symbol("mult"), random_rational(rng), {sub()});
    case 5: return mk_app(table->symbol("register"), random_rational(rng), {sub()});
    case 6: return mk_app(table->symbol("shuffle"), {sub(), sub()});
    default: return mk_app(table->symbol("conv"), {sub(), sub()});
  }
}

// Three variables; each right-hand side is flat (r . t) or an operation
// over guards and closed leaves.
System random_stream_system(std::mt19937& rng, const TablePtr& table) {
  const std::vector<Term> vars{mk_var("x"), mk_var("y"), mk_var("z")};
  std::bernoulli_distribution flat;
  auto guard = [&] {
    Step<Term> s;
    s.label = random_rational(rng);
    s.children.emplace_back(0, random_stream_term(rng, table, vars, 2));
    return Context::guard(std::move(s));
  };
  System sys{table, {}};
  for (const auto& v : vars) {
    if (flat(rng)) {
      Step<Term> s;
      s.label = random_rational(rng);
      s.children.emplace_back(0, random_stream_term(rng, table, vars, 3));
      sys.equations.push_back(Equation{v.as_var(), std::move(s)});
      continue;
    }
    static const char* ops[] = {"plus", "zip", "shuffle", "conv"};
    const OpSym op = table->symbol(ops[std::uniform_int_distribution<int>(0, 3)(rng)]);
    Context right = flat(rng) ? guard() : Context::leaf(mk_app(table->symbol("const"), random_rational(rng), {}));
    sys.equations.push_back(Equation{v.as_var(), Context::app(op, {guard(), std::move(right)})});
  }
  return sys;
}

std::vector<CheckReport> invariant_suite() {
  std::vector<CheckReport> out;
  const TablePtr table = instances::stream_table();
  out.push_back(guarded("monad-laws", [&] {
    std::mt19937 rng(kSeed + 6);
    const std::vector<Term> vars{mk_var("x"), mk_var("y"), mk_var("z")};
    for (int i = 0; i < 500; ++i) {
      const Term t = random_stream_term(rng, table, vars, 3);
      Substitution unit, s1, s2, composed;
      for (const auto& v : vars) unit.emplace(v.as_var(), v);
      for (const auto& v : vars) s1.emplace(v.as_var(), random_stream_term(rng, table, vars, 2));
      for (const auto& v : vars) s2.emplace(v.as_var(), random_stream_term(rng, table, vars, 2));
      for (const auto& [v, u] : s1) composed.emplace(v, substitute(u, s2));
      if (!(substitute(t, unit) == t)) return verdict("monad-laws", false, "right unit fails on " + to_string(t));
      if (!(substitute(vars[0], s1) == s1.at(vars[0].as_var()))) return verdict("monad-laws", false, "left unit fails");
      if (!(substitute(substitute(t, s1), s2) == substitute(t, composed))) {
        return verdict("monad-laws", false, "associativity fails on " + to_string(t));
      }
    }
    return verdict("monad-laws", true, "unit and associativity hold on 500 random terms");
  }));
  out.push_back(guarded("memo-and-monotonicity", [&] {
    Engine engine;
    std::mt19937 rng(kSeed + 7);
    for (int i = 0; i < 400; ++i) {
      const std::vector<Term> leaves{param_term(random_stream(engine, table, rng)), param_term(random_stream(engine, table, rng))};
      const SolutionHandle h = engine.interpret(table, random_stream_term(rng, table, leaves, 3));
      const auto first = engine.unfold(h);
      if (!(engine.unfold(h) == first)) return verdict("memo-and-monotonicity", false, "unfold changed on re-query");
      const ObservationTree t6 = engine.observe(h, 6), t7 = engine.observe(h, 7);
      if (!t6.is_prefix_of(t7)) return verdict("memo-and-monotonicity", false, "observe is not depth-monotone");
      Engine::Recompute rc = engine.recompute();
      if (!(rc.observe(h, 6) == t6)) return verdict("memo-and-monotonicity", false, "memo disagrees with recomputation");
    }
    return verdict("memo-and-monotonicity", true, "400 random states are stable, monotone and recompute identically");
  }));
  out.push_back(guarded("diagrams", [&] {
    Engine engine;
    const char* systems[] = {
        "u = zip(0 . t, 1 . u)\nt = zip(1 . u, 0 . t)\n",
        "t = 1 . zip(u, t)\nu = 0 . zip(t, u)\n",
        "x = 1 . shuffle(x, x)\ny = conv(2 . y, 1 . x)\n",
        "kind tree\ns = <1; L: plus(s, pi), R: const[2]>\n",
        "kind language a b\nx = union(a . x, <1; b: y>)\ny = star(b . x)\n",
    };
    for (const char* text : systems) {
      const System sys = parse_system(text);
      CheckReport r = diagram_check(engine, sys, engine.solve_system(sys), 8);
      if (!r.pass) return r;
    }
    const CompiledCcs c = compile_ccs(parse_ccs("P = a.(P | c.0) + b.0\nQ = alt(a.Q, b.0) ; 'c.P\n"));
    CheckReport r = diagram_check(engine, c.system, engine.solve_system(c.system), 4);
    if (!r.pass) return r;
    return verdict("diagrams", true, "6 fixture systems commute with their right-hand sides");
  }));
  out.push_back(guarded("random-diagrams", [&] {
    Engine engine;
    std::mt19937 rng(kSeed + 8);
    for (int i = 0; i < 100; ++i) {
      const System sys = random_stream_system(rng, table);
      CheckReport r = diagram_check(engine, sys, engine.solve_system(sys), 8);
      if (!r.pass) {
        r.name = "random-diagrams";
        r.detail = "system " + std::to_string(i) + ": " + r.detail;
        return r;
      }
    }
    return verdict("random-diagrams", true, "100 random flat and sandwiched stream systems commute to depth 8");
  }));
  return out;
}

const std::map<std::string, std::function<std::vector<CheckReport>()>>& registry() {
  static const std::map<std::string, std::function<std::vector<CheckReport>()>> suites{
      {"modularity", modularity_suite},
      {"language-laws", language_suite},
      {"instances", instance_suite},
      {"invariants", invariant_suite},
  };
  return suites;
}

}  // namespace

std::vector<CheckReport> run_suite(std::string_view name) {
  auto it = registry().find(std::string(name));
  if (it == registry().end()) throw Error(ErrorCode::UnknownSuite, "no suite named '" + std::string(name) + "'");
  return it->second();
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

}  // namespace corec

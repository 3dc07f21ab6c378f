// One line per acceptance criterion. `acceptance` runs all of them,
// `acceptance --criterion N` runs one; the exit status is nonzero when any
// selected criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corec/checking.hpp"
#include "corec/frontends.hpp"
#include "corec/instances.hpp"
#include "corec/oracles.hpp"

using namespace corec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr std::uint32_t kSeed = 424242;

const char* kSandwiched = "u = zip(0 . t, 1 . u)\nt = zip(1 . u, 0 . t)\n";
const char* kFlat = "t = 1 . zip(u, t)\nu = 0 . zip(t, u)\n";

const char* kCircuit = R"({
  "nodes": [
    {"id": "in", "kind": "input"}, {"id": "sum", "kind": "adder"}, {"id": "split", "kind": "copier"},
    {"id": "reg", "kind": "register", "value": "1"}, {"id": "out", "kind": "output"}
  ],
  "edges": [
    {"from": "in", "to": "sum"}, {"from": "reg", "to": "sum"}, {"from": "sum", "to": "split"},
    {"from": "split", "to": "out"}, {"from": "split", "to": "reg"}
  ]
})";

const char* kLoop = R"({
  "nodes": [
    {"id": "in", "kind": "input"}, {"id": "sum", "kind": "adder"}, {"id": "split", "kind": "copier"},
    {"id": "out", "kind": "output"}
  ],
  "edges": [
    {"from": "in", "to": "sum"}, {"from": "split", "to": "sum"}, {"from": "sum", "to": "split"},
    {"from": "split", "to": "out"}
  ]
})";

std::vector<int> digits(Engine& engine, SolutionHandle h, std::size_t n) {
  std::vector<int> out;
  for (const auto& r : instances::stream_take(engine, h, n)) out.push_back(static_cast<int>(r.get_num().get_si()));
  return out;
}

std::string join(const std::vector<int>& xs) {
  std::string out;
  for (int x : xs) out += (out.empty() ? "" : " ") + std::to_string(x);
  return out;
}

Rational random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  return ratio(num(rng), den(rng));
}

StreamLiteral random_literal(std::mt19937& rng) {
  std::uniform_int_distribution<int> len(0, 3), plen(1, 3);
  StreamLiteral s;
  for (int i = len(rng); i > 0; --i) s.prefix.push_back(random_rational(rng));
  for (int i = plen(rng); i > 0; --i) s.period.push_back(random_rational(rng));
  return s;
}

Outcome suite_outcome(const std::string& name) {
  Outcome o{true, ""};
  for (const auto& r : run_suite(name)) {
    o.pass = o.pass && r.pass;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += to_text(r);
  }
  return o;
}

// 1 -------------------------------------------------------------------------
Outcome thue_morse() {
  Engine engine;
  const System sys = parse_system(kSandwiched);
  const Solution sol = engine.solve_system(sys);
  const std::vector<int> u = digits(engine, sol.at("u"), 32);
  std::vector<int> tm;
  for (std::uint64_t i = 0; i < 32; ++i) tm.push_back(oracles::thue_morse(i));
  if (u == tm) return {true, "u matches the parity-of-ones oracle on 32 digits"};
  std::size_t first = 0;
  while (u[first] == tm[first]) ++first;
  const bool literal = u == oracles::sandwiched_zip_pair(32).first;
  return {false, "u differs from the parity-of-ones oracle at index " + std::to_string(first) + " (u = " +
                     join(std::vector<int>(u.begin(), u.begin() + 12)) + " ..., oracle = " +
                     join(std::vector<int>(tm.begin(), tm.begin() + 12)) + " ...); the engine " +
                     (literal ? "matches" : "does NOT match") +
                     " the index recurrence u(0) = 0, u(1) = 1, u(2n) = t(n-1), u(2n+1) = u(n-1) (n >= 1) of the literal system, so the "
                     "stated solution is not Thue-Morse (u(4) = t(1) = 0 but TM(4) = 1)"};
}

// 2 -------------------------------------------------------------------------
Outcome flat_variant() {
  Engine engine;
  const Solution flat = engine.solve_system(parse_system(kFlat));
  const Solution sw = engine.solve_system(parse_system(kSandwiched));
  const auto [t, u] = oracles::flat_zip_pair(16);
  const bool prefix_ok = digits(engine, flat.at("t"), 16) == t && digits(engine, flat.at("u"), 16) == u;
  const bool differs = !bounded_equal(engine, flat.at("u"), sw.at("u"), 4);
  const CheckReport d = diagram_check(engine, parse_system(kFlat), flat, 16);
  return {prefix_ok && differs && d.pass,
          std::string("flat t/u ") + (prefix_ok ? "match" : "do NOT match") + " 16 steps of hand iteration; flat u " +
              (differs ? "differs" : "does NOT differ") + " from the sandwiched u within depth 4 (" + join(u) + ")"};
}

// 3, 4 ----------------------------------------------------------------------
Outcome product(const char* op, std::uint32_t seed) {
  Engine engine;
  std::mt19937 rng(seed);
  const TablePtr built_in = instances::stream_table();
  const CompiledRps from_bde = compile_bde(parse_bde(
      "shuffle(x,y): head = head(x)*head(y); tail = plus(shuffle(x,tail(y)), shuffle(tail(x),y))\n"
      "conv(x,y): head = head(x)*head(y); tail = plus(conv(tail(x),y), conv(const(head(x)), tail(y)))\n"));
  const bool shuffle = std::string(op) == "shuffle";
  for (int i = 0; i < 20; ++i) {
    const StreamLiteral a = random_literal(rng), b = random_literal(rng);
    const auto xs = oracles::expand(a, 12), ys = oracles::expand(b, 12);
    const auto want = shuffle ? oracles::binomial_shuffle(xs, ys, 12) : oracles::cauchy_convolution(xs, ys, 12);
    for (const TablePtr& table : {built_in, from_bde.table}) {
      const SolutionHandle args[] = {instances::eventually_periodic(engine, table, a.prefix, a.period),
                                     instances::eventually_periodic(engine, table, b.prefix, b.period)};
      const OpSym sym = table == built_in ? table->symbol(op) : rps_symbol(from_bde, op);
      if (instances::stream_take(engine, engine.interpret_op(table, sym, args), 12) != want) {
        return {false, std::string(op) + " differs from the oracle on pair " + std::to_string(i) +
                           (table == built_in ? " (built-in table)" : " (BDE-compiled)")};
      }
    }
  }
  return {true, std::string(op) + " (built-in and BDE-compiled) equals the " +
                    (shuffle ? "binomial-convolution" : "polynomial-multiplication") +
                    " oracle on 20 random eventually periodic pairs, prefix 12"};
}

// 5 -------------------------------------------------------------------------
Outcome circuit() {
  const CompiledCircuit c = compile_circuit(parse_circuit(kCircuit));
  Engine engine;
  const StreamLiteral ones = parse_stream_literal("ones");
  const SolutionHandle x = instances::eventually_periodic(engine, c.rps.table, ones.prefix, ones.period);
  const auto got =
      instances::stream_take(engine, engine.interpret_op(c.rps.table, c.outputs.at(0).symbol, std::span(&x, 1)), 10);
  // f(s)_n = 1 + s_0 + ... + s_n
  std::vector<Rational> want;
  Rational acc = 1;
  for (const auto& v : oracles::expand(ones, 10)) want.push_back(acc += v);
  std::string witness;
  bool rejected = false;
  try {
    compile_circuit(parse_circuit(kLoop));
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::InvalidCircuit;
    witness = e.what();
  }
  const bool ok = got == want && rejected && witness.find("sum -> split -> sum") != std::string::npos;
  std::string shown;
  for (const auto& v : got) shown += (shown.empty() ? "" : ",") + to_string(v);
  return {ok, "f(ones) = " + shown + "; " + c.registers.at(0).definition + "; " + c.outputs.at(0).definition +
                  "; register-free loop " + (rejected ? "rejected: " + witness : "NOT rejected")};
}

// 6 -------------------------------------------------------------------------
Outcome zip_fixpoint() {
  const CompiledRps rps = compile_bde(parse_bde("f(x): head = head(x); tail = zip(f(x), tail(x))\n"));
  Engine engine;
  std::mt19937 rng(kSeed + 6);
  for (int i = 0; i < 20; ++i) {
    const StreamLiteral s = random_literal(rng);
    const SolutionHandle x = instances::eventually_periodic(engine, rps.table, s.prefix, s.period);
    const SolutionHandle f = engine.interpret_op(rps.table, rps_symbol(rps, "f"), std::span(&x, 1));
    const auto got = instances::stream_take(engine, f, 16);
    const auto sigma = oracles::expand(s, 16);
    if (got != oracles::zip_fixpoint(sigma, 16)) return {false, "f differs from the recurrence on sigma " + std::to_string(i)};
    if (got[0] != sigma[0]) return {false, "f(sigma)_0 != sigma_0 on sigma " + std::to_string(i)};
    // f(sigma) = zip(sigma, f(sigma)) itself, as a bounded equation.
    const SolutionHandle args[] = {x, f};
    if (!bounded_equal(engine, f, engine.interpret_op(rps.table, rps.table->symbol("zip"), args), 16)) {
      return {false, "f(sigma) != zip(sigma, f(sigma)) on sigma " + std::to_string(i)};
    }
  }
  return {true, "f matches f(2n) = s(n), f(2n+1) = f(n) to prefix 16 and f(s)_0 = s_0 on 20 random s"};
}

// 7 -------------------------------------------------------------------------
Outcome languages() { return suite_outcome("language-laws"); }

// 8 -------------------------------------------------------------------------
Outcome gnf() {
  const GnfFile g = parse_gnf("terminals a b\nnonterminals S B\nstart S\nS -> a S B | b\nB -> b\n");
  Engine engine;
  const System sys = compile_gnf(g);
  const Solution sol = engine.solve_system(sys);
  std::size_t words = 0, members = 0;
  for (const auto& w : oracles::all_words(2, 7)) {
    std::vector<std::string> letters;
    for (auto x : w) letters.push_back(g.terminals[x]);
    const std::vector<Port> ports(w.begin(), w.end());
    const bool got = instances::member(engine, sol.at("S"), ports);
    if (got != oracles::gnf_derives(g, letters)) {
      return {false, "disagreement on a word of length " + std::to_string(w.size())};
    }
    ++words;
    members += got;
  }
  const CheckReport d = diagram_check(engine, sys, sol, 8);
  return {d.pass, "start symbol agrees with the derivation oracle on all " + std::to_string(words) +
                      " words of length <= 7 (" + std::to_string(members) + " members)"};
}

// 9 -------------------------------------------------------------------------
Outcome ccs() {
  const CcsFile file = parse_ccs("actions a b c\nP = a.(P | c.0) + b.0\n");
  CompiledCcs c = compile_ccs(file);
  Engine engine;
  const Solution sol = engine.solve_system(c.system);
  Binding binding;
  for (const auto& [v, h] : sol.entries()) binding.emplace(v, h);
  auto handle = [&](const Agent& a) { return engine.interpret(c.system.table, agent_term(c, a), binding); };

  const CheckReport d = diagram_check(engine, c.system, sol, 4);
  if (!d.pass) return {false, "diagram_check: " + d.detail};

  // Depth-1 transitions.
  const auto sos = oracles::sos_step(Agent::var("P"), file);
  const std::vector<std::pair<std::string, Agent>> want{{"a", parse_agent("P | c.0", file)}, {"b", Agent::nil()}};
  if (sos.size() != want.size()) return {false, "SOS oracle gives " + std::to_string(sos.size()) + " transitions"};
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (sos[i].action != want[i].first || !(sos[i].next == want[i].second)) return {false, "SOS transitions differ"};
  }
  const Step<SolutionHandle> step = engine.unfold(sol.at("P"));
  if (step.children.size() != 2) return {false, "engine has " + std::to_string(step.children.size()) + " transitions"};
  for (std::size_t i = 0; i < 2; ++i) {
    if (c.actions.name(step.children[i].first) != want[i].first ||
        !bounded_equal(engine, step.children[i].second, handle(want[i].second), 4)) {
      return {false, "engine transition " + std::to_string(i) + " differs from the SOS oracle"};
    }
  }

  // Sum laws on random agents.
  std::mt19937 rng(kSeed + 9);
  const std::vector<std::string> acts{"a", "'a", "b", "c", "'c", "tau"};
  std::function<Agent(int)> gen = [&](int depth) -> Agent {
    std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 6);
    std::uniform_int_distribution<std::size_t> act(0, acts.size() - 1);
    switch (pick(rng)) {
      case 0: return Agent::nil();
      case 1: return Agent::var("P");
      case 2:
      case 3: return Agent::prefix(acts[act(rng)], gen(depth - 1));
      case 4: return Agent::sum({gen(depth - 1), gen(depth - 1)});
      case 5: return Agent::binary(Agent::Kind::Par, gen(depth - 1), gen(depth - 1));
      default: return Agent::binary(Agent::Kind::Seq, gen(depth - 1), gen(depth - 1));
    }
  };
  auto sum = [](std::vector<Agent> xs) { return Agent::sum(std::move(xs)); };
  for (int i = 0; i < 30; ++i) {
    const Agent p = gen(3), q = gen(3), r = gen(3);
    const bool comm = bounded_equal(engine, handle(sum({p, q})), handle(sum({q, p})), 4);
    const bool assoc = bounded_equal(engine, handle(sum({sum({p, q}), r})), handle(sum({p, sum({q, r})})), 4);
    const bool idem = bounded_equal(engine, handle(sum({p, p})), handle(p), 4);
    const bool oracle = engine.observe(handle(p), 4) == oracles::sos_tree(p, file, c.actions, 4);
    if (!(comm && assoc && idem && oracle)) {
      return {false, "sum law or SOS agreement fails on random agent " + std::to_string(i) + ": " + print_agent(p)};
    }
  }

  // seq and alt, hand-built.
  const char* cases[] = {"a.0 ; b.0",          "(a.0 + b.0) ; c.0",  "0 ; a.0",        "a.b.0 ; (c.0 + a.0)",
                         "(a.0 | 'a.0) ; c.0", "alt(a.0, b.0)",      "alt(0, b.0)",    "alt(a.b.0, c.0)",
                         "alt(a.0 + b.0, c.a.0)", "alt(P, c.0) ; b.0"};
  for (const char* text : cases) {
    const Agent a = parse_agent(text, file);
    if (!(engine.observe(handle(a), 4) == oracles::sos_tree(a, file, c.actions, 4))) {
      return {false, std::string("'") + text + "' differs from the SOS oracle"};
    }
  }
  return {true, "P passes diagram_check to depth 4; transitions {(a, P | c.0), (b, 0)}; sum laws on 30 random agents; "
                "10 seq/alt cases match the SOS oracle"};
}

// 10, 11 --------------------------------------------------------------------
Outcome modularity() { return suite_outcome("modularity"); }
Outcome invariants() { return suite_outcome("invariants"); }

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"Thue-Morse from the sandwiched zip system", thue_morse},
      {"flat zip variant", flat_variant},
      {"shuffle product", [] { return product("shuffle", kSeed + 3); }},
      {"convolution product", [] { return product("conv", kSeed + 4); }},
      {"stream circuit", circuit},
      {"zip fixpoint", zip_fixpoint},
      {"languages", languages},
      {"GNF grammar", gnf},
      {"CCS", ccs},
      {"modularity suite", modularity},
      {"engine invariants", invariants},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::stoul(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]...\n");
      return 2;
    }
  }
  if (selected.empty()) {
    for (std::size_t i = 1; i <= criteria().size(); ++i) selected.push_back(i);
  }
  bool all = true;
  for (std::size_t n : selected) {
    if (n == 0 || n > criteria().size()) {
      std::fprintf(stderr, "no criterion %zu\n", n);
      return 2;
    }
    const Criterion& c = criteria()[n - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", n, c.name, secs, o.detail.c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}

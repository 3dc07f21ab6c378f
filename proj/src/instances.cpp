#include "corec/instances.hpp"

#include <map>
#include <mutex>
#include <set>

#include "corec/error.hpp"

namespace corec::instances {

namespace {

Step<Term> stream_step(Rational head, Term tail) {
  Step<Term> s;
  s.label = std::move(head);
  s.children.emplace_back(0, std::move(tail));
  return s;
}

Step<Term> tree_step(Rational label, Term left, Term right) {
  Step<Term> s;
  s.label = std::move(label);
  s.children.emplace_back(0, std::move(left));
  s.children.emplace_back(1, std::move(right));
  return s;
}

const Term& tail(const Premise& p) { return p.child(0); }

}  // namespace

// ---------------------------------------------------------------------------
// Streams

TablePtr stream_base_table() {
  static const TablePtr table = [] {
    auto sig = Signature::make({{"const", 0, true},
                                {"plus", 2, false},
                                {"zip", 2, false},
                                {"mult", 1, true},
                                {"register", 1, true}});
    const OpSym cst = sig->at(0), plus = sig->at(1), zip = sig->at(2), mult = sig->at(3), reg = sig->at(4);
    std::vector<GsosRule> rules;
    rules.push_back({cst, [cst](const RuleInput& in) {
                       return stream_step(*in.scalar, mk_app(cst, Rational(0), {}));
                     }});
    rules.push_back({plus, [plus](const RuleInput& in) {
                       const auto& [x, y] = std::tie(in.args[0], in.args[1]);
                       return stream_step(x.number() + y.number(), mk_app(plus, {tail(x), tail(y)}));
                     }});
    rules.push_back({zip, [zip](const RuleInput& in) {
                       const auto& [x, y] = std::tie(in.args[0], in.args[1]);
                       return stream_step(x.number(), mk_app(zip, {y.self, tail(x)}));
                     }});
    rules.push_back({mult, [mult](const RuleInput& in) {
                       const Premise& x = in.args[0];
                       return stream_step(*in.scalar * x.number(), mk_app(mult, *in.scalar, {tail(x)}));
                     }});
    rules.push_back({reg, [](const RuleInput& in) { return stream_step(*in.scalar, in.args[0].self); }});
    return build_table(BehaviorKind::stream(), sig, std::move(rules));
  }();
  return table;
}

RpsDef shuffle_rps(const TablePtr& given) {
  auto sig = Signature::make({{"shuffle", 2, false}});
  const OpSym shuffle = sig->at(0);
  const OpSym plus = given->symbol("plus");
  RpsDef def{sig, {}};
  def.rules.push_back({shuffle, [shuffle, plus](const RuleInput& in) {
                         const auto& [x, y] = std::tie(in.args[0], in.args[1]);
                         return stream_step(x.number() * y.number(),
                                            mk_app(plus, {mk_app(shuffle, {x.self, tail(y)}),
                                                          mk_app(shuffle, {tail(x), y.self})}));
                       }});
  return def;
}

RpsDef conv_rps(const TablePtr& given) {
  auto sig = Signature::make({{"conv", 2, false}});
  const OpSym conv = sig->at(0);
  const OpSym plus = given->symbol("plus");
  const OpSym cst = given->symbol("const");
  RpsDef def{sig, {}};
  def.rules.push_back({conv, [conv, plus, cst](const RuleInput& in) {
                         const auto& [x, y] = std::tie(in.args[0], in.args[1]);
                         return stream_step(x.number() * y.number(),
                                            mk_app(plus, {mk_app(conv, {tail(x), y.self}),
                                                          mk_app(conv, {mk_app(cst, x.number(), {}), tail(y)})}));
                       }});
  return def;
}

TablePtr stream_table() {
  static const TablePtr table = [] {
    TablePtr with_shuffle = extend_with_rps(stream_base_table(), shuffle_rps(stream_base_table()));
    return extend_with_rps(with_shuffle, conv_rps(with_shuffle));
  }();
  return table;
}

SolutionHandle eventually_periodic(Engine& engine, const TablePtr& table, const std::vector<Rational>& prefix,
                                   const std::vector<Rational>& period) {
  if (table->kind().tag() != KindTag::Stream) throw Error(ErrorCode::KindMismatch, "not a stream table");
  std::vector<Rational> values = prefix;
  values.insert(values.end(), period.begin(), period.end());
  System sys{table, {}};
  auto var = [](std::size_t i) { return VarId(std::string(1, kReservedPrefix) + "s" + std::to_string(i)); };
  const OpSym cst = table->symbol("const");
  for (std::size_t i = 0; i < values.size(); ++i) {
    Term next;
    if (i + 1 < values.size()) {
      next = mk_var(var(i + 1));
    } else if (!period.empty()) {
      next = mk_var(var(prefix.size()));
    } else {
      next = mk_app(cst, Rational(0), {});
    }
    sys.equations.push_back(Equation{var(i), stream_step(values[i], next)});
  }
  if (values.empty()) return engine.interpret(table, mk_app(cst, Rational(0), {}));
  return engine.solve_system(sys).at(var(0));
}

std::vector<Rational> stream_take(Engine& engine, SolutionHandle h, std::size_t n) {
  std::vector<Rational> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Step<SolutionHandle> s = engine.unfold(h);
    out.push_back(std::get<Rational>(s.label));
    h = s.at(0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trees

TablePtr tree_table(const Rational& pi) {
  auto sig = Signature::make({{"const", 0, true}, {"plus", 2, false}, {"pi", 0, false}});
  const OpSym cst = sig->at(0), plus = sig->at(1), pi_sym = sig->at(2);
  std::vector<GsosRule> rules;
  rules.push_back({cst, [cst](const RuleInput& in) {
                     Term zero = mk_app(cst, Rational(0), {});
                     return tree_step(*in.scalar, zero, zero);
                   }});
  rules.push_back({plus, [plus](const RuleInput& in) {
                     const auto& [x, y] = std::tie(in.args[0], in.args[1]);
                     return tree_step(x.number() + y.number(), mk_app(plus, {x.child(0), y.child(0)}),
                                      mk_app(plus, {x.child(1), y.child(1)}));
                   }});
  rules.push_back({pi_sym, [pi_sym, pi](const RuleInput&) {
                     Term p = mk_app(pi_sym, {});
                     return tree_step(pi, p, p);
                   }});
  return build_table(BehaviorKind::tree(), sig, std::move(rules));
}

// ---------------------------------------------------------------------------
// Languages

namespace {

Step<Term> lang_step(bool accept, std::vector<Term> derivatives) {
  Step<Term> s;
  s.label = accept;
  for (std::size_t a = 0; a < derivatives.size(); ++a) s.children.emplace_back(static_cast<Port>(a), derivatives[a]);
  return s;
}

std::vector<TablePtr> build_tower(const std::vector<std::string>& alphabet) {
  const BehaviorKind kind = BehaviorKind::language(alphabet);
  const std::size_t n = alphabet.size();
  std::vector<TablePtr> tower;

  // Stage 0: constants.
  std::vector<SymbolDecl> consts{{"empty", 0, false}, {"eps", 0, false}};
  for (const auto& c : alphabet) consts.push_back({"letter_" + c, 0, false});
  auto sig0 = Signature::make(consts);
  const OpSym empty = sig0->at(0), eps = sig0->at(1);
  auto all_empty = [empty, n] { return std::vector<Term>(n, mk_app(empty, {})); };
  RpsDef stage0{sig0, {}};
  stage0.rules.push_back({empty, [all_empty](const RuleInput&) { return lang_step(false, all_empty()); }});
  stage0.rules.push_back({eps, [all_empty](const RuleInput&) { return lang_step(true, all_empty()); }});
  for (std::size_t c = 0; c < n; ++c) {
    stage0.rules.push_back({sig0->at(2 + c), [all_empty, eps, c](const RuleInput&) {
                              auto d = all_empty();
                              d[c] = mk_app(eps, {});
                              return lang_step(false, d);
                            }});
  }
  tower.push_back(extend_with_rps(empty_table(kind), stage0));

  // Stage 1: boolean operations.
  auto sig1 = Signature::make({{"union", 2, false}, {"inter", 2, false}, {"compl", 1, false}});
  const OpSym uni = sig1->at(0), inter = sig1->at(1), compl_ = sig1->at(2);
  auto pointwise = [n](const OpSym& op, const RuleInput& in) {
    std::vector<Term> d;
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<Term> args;
      for (const auto& p : in.args) args.push_back(p.child(static_cast<Port>(a)));
      d.push_back(mk_app(op, std::move(args)));
    }
    return d;
  };
  RpsDef stage1{sig1, {}};
  stage1.rules.push_back({uni, [uni, pointwise](const RuleInput& in) {
                            return lang_step(in.args[0].bit() || in.args[1].bit(), pointwise(uni, in));
                          }});
  stage1.rules.push_back({inter, [inter, pointwise](const RuleInput& in) {
                            return lang_step(in.args[0].bit() && in.args[1].bit(), pointwise(inter, in));
                          }});
  stage1.rules.push_back({compl_, [compl_, pointwise](const RuleInput& in) {
                            return lang_step(!in.args[0].bit(), pointwise(compl_, in));
                          }});
  tower.push_back(extend_with_rps(tower.back(), stage1));

  // Stage 2: concatenation.
  auto sig2 = Signature::make({{"concat", 2, false}});
  const OpSym concat = sig2->at(0);
  RpsDef stage2{sig2, {}};
  stage2.rules.push_back({concat, [concat, uni, n](const RuleInput& in) {
                            const auto& [x, y] = std::tie(in.args[0], in.args[1]);
                            std::vector<Term> d;
                            for (std::size_t a = 0; a < n; ++a) {
                              Term left = mk_app(concat, {x.child(static_cast<Port>(a)), y.self});
                              d.push_back(x.bit() ? mk_app(uni, {left, y.child(static_cast<Port>(a))}) : left);
                            }
                            return lang_step(x.bit() && y.bit(), d);
                          }});
  tower.push_back(extend_with_rps(tower.back(), stage2));

  // Stage 3: star.
  auto sig3 = Signature::make({{"star", 1, false}});
  const OpSym star = sig3->at(0);
  RpsDef stage3{sig3, {}};
  stage3.rules.push_back({star, [star, concat, n](const RuleInput& in) {
                            const Premise& x = in.args[0];
                            std::vector<Term> d;
                            for (std::size_t a = 0; a < n; ++a) {
                              d.push_back(mk_app(concat, {x.child(static_cast<Port>(a)), mk_app(star, {x.self})}));
                            }
                            return lang_step(true, d);
                          }});
  tower.push_back(extend_with_rps(tower.back(), stage3));

  // Stage 4: prefixing and the inverse of the final structure.
  std::vector<SymbolDecl> decls4;
  for (const auto& c : alphabet) decls4.push_back({"prefix_" + c, 1, false});
  decls4.push_back({"cinv_0", n, false});
  decls4.push_back({"cinv_1", n, false});
  auto sig4 = Signature::make(decls4);
  RpsDef stage4{sig4, {}};
  for (std::size_t c = 0; c < n; ++c) {
    stage4.rules.push_back({sig4->at(c), [all_empty, c](const RuleInput& in) {
                              auto d = all_empty();
                              d[c] = in.args[0].self;
                              return lang_step(false, d);
                            }});
  }
  for (int j = 0; j < 2; ++j) {
    stage4.rules.push_back({sig4->at(n + j), [j](const RuleInput& in) {
                              std::vector<Term> d;
                              for (const auto& p : in.args) d.push_back(p.self);
                              return lang_step(j == 1, d);
                            }});
  }
  tower.push_back(extend_with_rps(tower.back(), stage4));
  return tower;
}

}  // namespace

std::vector<TablePtr> language_tower(const std::vector<std::string>& alphabet) {
  static std::mutex mutex;
  static std::map<std::vector<std::string>, std::vector<TablePtr>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(alphabet);
  if (it == cache.end()) it = cache.emplace(alphabet, build_tower(alphabet)).first;
  return it->second;
}

TablePtr language_table(const std::vector<std::string>& alphabet) { return language_tower(alphabet).back(); }

bool member(Engine& engine, SolutionHandle h, std::span<const Port> word) {
  for (Port p : word) h = engine.unfold(h).at(p);
  const Label label = engine.unfold(h).label;
  if (const auto* b = std::get_if<bool>(&label)) return *b;
  throw Error(ErrorCode::KindMismatch, "membership needs a language state");
}

std::vector<Port> word_ports(const BehaviorKind& kind, std::string_view word) {
  if (kind.tag() != KindTag::Language) throw Error(ErrorCode::KindMismatch, "words need a language kind");
  bool single = true;
  for (const auto& letter : kind.alphabet()) single = single && letter.size() == 1;
  std::vector<Port> out;
  auto push = [&](std::string_view letter) {
    auto port = kind.find_port(letter);
    if (!port) throw Error(ErrorCode::InvalidArgument, "'" + std::string(letter) + "' is not a letter");
    out.push_back(*port);
  };
  if (single) {
    for (char c : word) {
      if (c == ' ' || c == '\t') continue;
      push(std::string_view(&c, 1));
    }
    return out;
  }
  std::size_t i = 0;
  while (i < word.size()) {
    while (i < word.size() && (word[i] == ' ' || word[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < word.size() && word[j] != ' ' && word[j] != '\t') ++j;
    if (j > i) push(word.substr(i, j - i));
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Processes

namespace {

Step<Term> proc_step(std::vector<std::pair<Port, Term>> children) {
  Step<Term> s;
  s.label = std::monostate{};
  s.children = std::move(children);
  return s;
}

GsosRule sum_rule(const OpSym& op) {
  return GsosRule{op, [](const RuleInput& in) {
                    std::vector<std::pair<Port, Term>> out;
                    for (const auto& p : in.args) out.insert(out.end(), p.children.begin(), p.children.end());
                    return proc_step(std::move(out));
                  }};
}

TablePtr build_ccs(const ActionSet& actions) {
  std::vector<SymbolDecl> decls;
  for (std::size_t a = 0; a < actions.size(); ++a) decls.push_back({"prefix_" + actions.name(a), 1, false});
  for (std::size_t k = 0; k <= kPreinstalledSums; ++k) decls.push_back({"sum_" + std::to_string(k), k, false});
  decls.push_back({"par", 2, false});
  decls.push_back({"seq", 2, false});
  auto sig = Signature::make(decls);
  const OpSym par = sig->lookup("par");
  const OpSym seq = sig->lookup("seq");

  std::vector<GsosRule> rules;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    rules.push_back({sig->at(a), [a](const RuleInput& in) {
                       return proc_step({{static_cast<Port>(a), in.args[0].self}});
                     }});
  }
  for (std::size_t k = 0; k <= kPreinstalledSums; ++k) rules.push_back(sum_rule(sig->lookup("sum_" + std::to_string(k))));
  rules.push_back({par, [par, actions](const RuleInput& in) {
                     const auto& [x, y] = std::tie(in.args[0], in.args[1]);
                     std::vector<std::pair<Port, Term>> out;
                     for (const auto& [a, xc] : x.children) out.emplace_back(a, mk_app(par, {xc, y.self}));
                     for (const auto& [a, yc] : y.children) out.emplace_back(a, mk_app(par, {x.self, yc}));
                     for (const auto& [a, xc] : x.children) {
                       if (a == actions.tau()) continue;
                       for (const auto& [b, yc] : y.children) {
                         if (b == actions.complement(a)) {
                           out.emplace_back(static_cast<Port>(actions.tau()), mk_app(par, {xc, yc}));
                         }
                       }
                     }
                     return proc_step(std::move(out));
                   }});
  rules.push_back({seq, [seq](const RuleInput& in) {
                     const auto& [x, y] = std::tie(in.args[0], in.args[1]);
                     if (x.children.empty()) return proc_step(y.children);
                     std::vector<std::pair<Port, Term>> out;
                     for (const auto& [a, xc] : x.children) out.emplace_back(a, mk_app(seq, {xc, y.self}));
                     return proc_step(std::move(out));
                   }});
  TablePtr table = build_table(BehaviorKind::process(actions), sig, std::move(rules));

  auto alt_sig = Signature::make({{"alt", 2, false}});
  const OpSym alt = alt_sig->at(0);
  SrpsDef def{alt_sig, {}};
  def.rules.push_back({alt, [alt, seq](const RuleInput& in) {
                         const auto& [x, y] = std::tie(in.args[0], in.args[1]);
                         if (!y.children.empty()) {
                           std::vector<std::pair<Port, Term>> second;
                           for (const auto& [a, yc] : y.children) {
                             second.emplace_back(a, mk_app(seq, {yc, mk_app(alt, {x.self, y.self})}));
                           }
                           return Context::app(seq, {Context::guard(proc_step(x.children)),
                                                     Context::guard(proc_step(std::move(second)))});
                         }
                         std::vector<std::pair<Port, Term>> out;
                         for (const auto& [a, xc] : x.children) {
                           out.emplace_back(a, mk_app(seq, {xc, mk_app(alt, {y.self, x.self})}));
                         }
                         return Context::guard(proc_step(std::move(out)));
                       }});
  return register_srps(table, def);
}

std::string fresh_name(const TablePtr& table, const std::string& stem) {
  for (std::size_t k = 0;; ++k) {
    std::string name = stem + "_" + std::to_string(k);
    if (!table->signature()->find(name)) return name;
  }
}

}  // namespace

TablePtr ccs_table(const ActionSet& actions) {
  static std::mutex mutex;
  static std::vector<std::pair<ActionSet, TablePtr>> cache;
  std::lock_guard lock(mutex);
  for (const auto& [a, t] : cache) {
    if (a == actions) return t;
  }
  TablePtr t = build_ccs(actions);
  cache.emplace_back(actions, t);
  return t;
}

std::pair<TablePtr, OpSym> with_sum(const TablePtr& table, std::size_t n) {
  const std::string name = "sum_" + std::to_string(n);
  if (auto sym = table->signature()->find(name)) return {table, *sym};
  GsosRule rule = make_rule({name, n, false}, sum_rule(OpSym{}).conclude);
  TablePtr out = add_rule(table, std::move(rule));
  return {out, out->symbol(name)};
}

std::pair<TablePtr, OpSym> with_relabel(const TablePtr& table, std::vector<std::size_t> mapping) {
  const ActionSet& actions = table->kind().actions();
  if (mapping.size() != actions.size()) {
    throw Error(ErrorCode::BadActionStructure, "relabeling must map every action");
  }
  for (std::size_t a = 0; a < mapping.size(); ++a) {
    if (mapping[a] >= actions.size()) throw Error(ErrorCode::BadActionStructure, "relabeling to an unknown action");
    if ((a == actions.tau()) != (mapping[a] == actions.tau())) {
      throw Error(ErrorCode::BadActionStructure, "relabeling must fix tau and only tau");
    }
    if (mapping[actions.complement(a)] != actions.complement(mapping[a])) {
      throw Error(ErrorCode::BadActionStructure, "relabeling must commute with complement");
    }
  }
  const std::string name = fresh_name(table, "relabel");
  GsosRule rule = make_recursive_rule({name, 1, false}, [mapping](const OpSym& self) -> Conclude {
    return [self, mapping](const RuleInput& in) {
      std::vector<std::pair<Port, Term>> out;
      for (const auto& [a, xc] : in.args[0].children) {
        out.emplace_back(static_cast<Port>(mapping[a]), mk_app(self, {xc}));
      }
      return proc_step(std::move(out));
    };
  });
  TablePtr out = add_rule(table, std::move(rule));
  return {out, out->symbol(name)};
}

std::pair<TablePtr, OpSym> with_restrict(const TablePtr& table, std::vector<std::size_t> hidden) {
  const ActionSet& actions = table->kind().actions();
  std::set<std::size_t> blocked;
  for (std::size_t a : hidden) {
    if (a >= actions.size()) throw Error(ErrorCode::BadActionStructure, "restricting an unknown action");
    if (a == actions.tau()) throw Error(ErrorCode::BadActionStructure, "tau cannot be restricted");
    blocked.insert(a);
    blocked.insert(actions.complement(a));
  }
  const std::string name = fresh_name(table, "restrict");
  GsosRule rule = make_recursive_rule({name, 1, false}, [blocked](const OpSym& self) -> Conclude {
    return [self, blocked](const RuleInput& in) {
      std::vector<std::pair<Port, Term>> out;
      for (const auto& [a, xc] : in.args[0].children) {
        if (!blocked.contains(a)) out.emplace_back(a, mk_app(self, {xc}));
      }
      return proc_step(std::move(out));
    };
  });
  TablePtr out = add_rule(table, std::move(rule));
  return {out, out->symbol(name)};
}

}  // namespace corec::instances

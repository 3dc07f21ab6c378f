#include "corec/solver.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <unordered_set>

#include "corec/checking.hpp"
#include "corec/error.hpp"

namespace corec {

Term param_term(SolutionHandle h) { return Term::param(ParamRef{h.engine, h.node}); }

const Equation* System::find(const VarId& var) const {
  for (const auto& eq : equations) {
    if (eq.var == var) return &eq;
  }
  return nullptr;
}

std::vector<VarId> System::vars() const {
  std::vector<VarId> out;
  out.reserve(equations.size());
  for (const auto& eq : equations) out.push_back(eq.var);
  return out;
}

SolutionHandle Solution::at(const VarId& var) const {
  for (const auto& [v, h] : entries_) {
    if (v == var) return h;
  }
  throw Error(ErrorCode::InvalidArgument, "no solution for variable '" + var.name() + "'");
}

bool Solution::contains(const VarId& var) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == var; });
}

namespace {

std::atomic<std::uint64_t> next_engine_id{1};

constexpr std::size_t kMaxNesting = 20000;

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_label(const Label& l) {
  if (const auto* r = std::get_if<Rational>(&l)) return mix(11, hash_value(*r));
  if (const auto* b = std::get_if<bool>(&l)) return *b ? 13 : 17;
  return 19;
}

struct TermKey {
  std::uint32_t table;
  std::uint32_t op;
  std::optional<Rational> scalar;
  std::vector<std::uint32_t> children;

  bool operator==(const TermKey&) const = default;
};

struct TermKeyHash {
  std::size_t operator()(const TermKey& k) const noexcept {
    std::size_t h = mix(k.table, k.op);
    if (k.scalar) h = mix(h, hash_value(*k.scalar));
    for (auto c : k.children) h = mix(h, c);
    return h;
  }
};

struct GivenKey {
  std::uint32_t table;
  Step<std::uint32_t> step;

  bool operator==(const GivenKey&) const = default;
};

struct GivenKeyHash {
  std::size_t operator()(const GivenKey& k) const noexcept {
    std::size_t h = mix(k.table, hash_label(k.step.label));
    for (const auto& [p, c] : k.step.children) h = mix(mix(h, p), c);
    return h;
  }
};

enum class NodeKind : std::uint8_t { Equation, Term, Given };

struct Node {
  NodeKind kind = NodeKind::Term;
  std::uint32_t table = 0;
  std::uint32_t system = 0;
  std::uint32_t equation = 0;
  std::uint32_t op = 0;
  std::optional<Rational> scalar;
  std::vector<std::uint32_t> children;
  Step<std::uint32_t> given;
  std::optional<Step<std::uint32_t>> memo;
  bool busy = false;
};

struct SystemRecord {
  System system;
  std::unordered_map<VarId, std::uint32_t, std::hash<VarId>> binding;
};

using NodeBinding = std::unordered_map<VarId, std::uint32_t, std::hash<VarId>>;

}  // namespace

struct Engine::Impl {
  std::uint64_t id = next_engine_id++;
  std::deque<Node> nodes;
  std::vector<TablePtr> tables;
  std::unordered_map<std::uint64_t, std::uint32_t> table_index;
  std::unordered_set<std::uint64_t> validated;
  std::vector<SystemRecord> systems;
  std::unordered_map<TermKey, std::uint32_t, TermKeyHash> term_nodes;
  std::unordered_map<GivenKey, std::uint32_t, GivenKeyHash> given_nodes;
  std::size_t fuse = 1'000'000;
  std::size_t applications = 0;
  std::size_t nesting = 0;

  std::uint32_t register_table(const TablePtr& table) {
    if (!table) throw Error(ErrorCode::InvalidArgument, "null rule table");
    auto [it, inserted] = table_index.emplace(table->id(), static_cast<std::uint32_t>(tables.size()));
    if (inserted) tables.push_back(table);
    return it->second;
  }

  std::uint32_t check_handle(std::uint64_t engine, std::uint32_t node) const {
    if (engine != id) throw Error(ErrorCode::InvalidHandle, "handle belongs to another engine");
    if (node >= nodes.size()) throw Error(ErrorCode::InvalidHandle, "no such state");
    return node;
  }

  std::uint32_t check(SolutionHandle h) const { return check_handle(h.engine, h.node); }

  const BehaviorKind& kind_of(std::uint32_t node) const { return tables[nodes[node].table]->kind(); }

  std::uint32_t push(Node node) {
    nodes.push_back(std::move(node));
    return static_cast<std::uint32_t>(nodes.size() - 1);
  }

  std::uint32_t intern_term(std::uint32_t table, const OpSym& op, std::optional<Rational> scalar,
                            std::vector<std::uint32_t> children) {
    TermKey key{table, static_cast<std::uint32_t>(op.index), std::move(scalar), std::move(children)};
    if (auto it = term_nodes.find(key); it != term_nodes.end()) return it->second;
    Node node;
    node.kind = NodeKind::Term;
    node.table = table;
    node.op = key.op;
    node.scalar = key.scalar;
    node.children = key.children;
    std::uint32_t idx = push(std::move(node));
    term_nodes.emplace(std::move(key), idx);
    return idx;
  }

  std::uint32_t intern_given(std::uint32_t table, Step<std::uint32_t> step) {
    step = canonicalize_step(tables[table]->kind(), std::move(step));
    GivenKey key{table, std::move(step)};
    if (auto it = given_nodes.find(key); it != given_nodes.end()) return it->second;
    Node node;
    node.kind = NodeKind::Given;
    node.table = table;
    node.given = key.step;
    std::uint32_t idx = push(std::move(node));
    given_nodes.emplace(std::move(key), idx);
    return idx;
  }

  std::uint32_t interpret(std::uint32_t table, const Term& term, const NodeBinding& binding) {
    switch (term.kind()) {
      case Term::Kind::Var: {
        auto it = binding.find(term.as_var());
        if (it == binding.end()) {
          throw Error(ErrorCode::InvalidArgument, "unbound variable '" + term.as_var().name() + "'");
        }
        return it->second;
      }
      case Term::Kind::Param: {
        ParamRef p = term.as_param();
        std::uint32_t n = check_handle(p.engine, p.node);
        if (!(kind_of(n) == tables[table]->kind())) {
          throw Error(ErrorCode::KindMismatch, "parameter of kind " + kind_of(n).describe() + " in a " +
                                                   tables[table]->kind().describe() + " term");
        }
        return n;
      }
      case Term::Kind::App: {
        OpSym op = tables[table]->resolve(term.op());
        if (term.args().size() != op.arity || term.scalar().has_value() != op.scalar_indexed) {
          throw Error(ErrorCode::ArityMismatch, "'" + op.name + "' applied with the wrong shape");
        }
        std::vector<std::uint32_t> kids;
        kids.reserve(term.args().size());
        for (const auto& a : term.args()) kids.push_back(interpret(table, a, binding));
        return intern_term(table, op, term.scalar(), std::move(kids));
      }
    }
    throw Error(ErrorCode::InvalidArgument, "malformed term");
  }

  Step<std::uint32_t> interpret_step(std::uint32_t table, const Step<Term>& step, const NodeBinding& binding) {
    Step<std::uint32_t> out;
    out.label = step.label;
    out.children.reserve(step.children.size());
    for (const auto& [port, t] : step.children) out.children.emplace_back(port, interpret(table, t, binding));
    return canonicalize_step(tables[table]->kind(), std::move(out));
  }

  std::uint32_t build_context(std::uint32_t table, const Context& ctx, const NodeBinding& binding) {
    switch (ctx.kind()) {
      case Context::Kind::Guard: return intern_given(table, interpret_step(table, ctx.guard_step(), binding));
      case Context::Kind::Leaf: return interpret(table, ctx.leaf_term(), binding);
      case Context::Kind::App: {
        OpSym op = tables[table]->resolve(ctx.op());
        std::vector<std::uint32_t> kids;
        for (const auto& a : ctx.args()) kids.push_back(build_context(table, a, binding));
        return intern_term(table, op, ctx.scalar(), std::move(kids));
      }
    }
    throw Error(ErrorCode::InvalidArgument, "malformed context");
  }

  // `get` yields the step of a node: memoized unfolding or a recomputation.
  template <typename Get>
  Step<std::uint32_t> elaborate(std::uint32_t table, const Context& ctx, const NodeBinding& binding, Get&& get) {
    if (auto path = ctx.unguarded_path()) {
      throw Error(ErrorCode::UnguardedPath, "context reaches a variable outside any guard at " + *path);
    }
    if (ctx.kind() == Context::Kind::Guard) return interpret_step(table, ctx.guard_step(), binding);
    return get(build_context(table, ctx, binding));
  }

  template <typename Get>
  Step<std::uint32_t> compute(std::uint32_t idx, Get&& get) {
    const NodeKind kind = nodes[idx].kind;
    if (kind == NodeKind::Given) return nodes[idx].given;
    if (kind == NodeKind::Equation) {
      const SystemRecord& rec = systems[nodes[idx].system];
      const Equation& eq = rec.system.equations[nodes[idx].equation];
      const std::uint32_t table = nodes[idx].table;
      if (const auto* step = std::get_if<Step<Term>>(&eq.rhs)) return interpret_step(table, *step, rec.binding);
      if (const auto* ctx = std::get_if<Context>(&eq.rhs)) return elaborate(table, *ctx, rec.binding, get);
      if (const auto* h = std::get_if<SolutionHandle>(&eq.rhs)) return get(check(*h));
      throw Error(ErrorCode::ValidationFailed, "equation for '" + eq.var.name() + "' has no usable right-hand side");
    }

    if (++applications > fuse) {
      throw Error(ErrorCode::RuleDiverged, "rule application budget exhausted");
    }
    const std::uint32_t table_idx = nodes[idx].table;
    const TablePtr table = tables[table_idx];
    const OpSym& op = table->signature()->at(nodes[idx].op);
    const std::vector<std::uint32_t> kids = nodes[idx].children;
    const std::optional<Rational> scalar = nodes[idx].scalar;

    std::vector<Premise> premises;
    premises.reserve(kids.size());
    for (std::uint32_t c : kids) {
      Step<std::uint32_t> s = get(c);
      Premise p;
      p.label = std::move(s.label);
      p.self = Term::param(ParamRef{id, c});
      p.children.reserve(s.children.size());
      for (const auto& [port, child] : s.children) p.children.emplace_back(port, Term::param(ParamRef{id, child}));
      premises.push_back(std::move(p));
    }
    RuleInput input{premises, scalar};
    if (table->srps_backed(op)) {
      return elaborate(table_idx, table->context(op, input), NodeBinding{}, get);
    }
    Step<Term> concl = table->conclude(op, input);
    if (auto v = step_violation(table->kind(), concl)) {
      throw Error(ErrorCode::KindMismatch, "rule for '" + op.name + "' broke port discipline: " + *v);
    }
    return interpret_step(table_idx, concl, NodeBinding{});
  }

  Step<std::uint32_t> unfold(std::uint32_t idx) {
    if (nodes[idx].memo) return *nodes[idx].memo;
    if (nodes[idx].busy) {
      throw Error(ErrorCode::RuleDiverged, "state depends on its own first step (unguarded recursion)");
    }
    if (nesting >= kMaxNesting) throw Error(ErrorCode::RuleDiverged, "unfolding nested too deeply");
    if (nesting == 0) applications = 0;
    struct Guard {
      Impl& impl;
      std::uint32_t idx;
      ~Guard() {
        impl.nodes[idx].busy = false;
        --impl.nesting;
      }
    };
    nodes[idx].busy = true;
    ++nesting;
    Guard guard{*this, idx};
    Step<std::uint32_t> step = compute(idx, [this](std::uint32_t n) { return unfold(n); });
    nodes[idx].memo = step;
    return step;
  }

  SolutionHandle handle(std::uint32_t n) const { return SolutionHandle{id, n}; }

  Step<SolutionHandle> lift(const Step<std::uint32_t>& s) const {
    return step_map(s, [this](std::uint32_t n) { return handle(n); });
  }

  template <typename Get>
  ObservationTree observe(std::uint32_t idx, std::size_t depth, Get&& get) {
    ObservationTree tree;
    if (depth == 0) return tree;
    Step<std::uint32_t> s = get(idx);
    tree.cut = false;
    tree.label = s.label;
    tree.children.reserve(s.children.size());
    for (const auto& [port, child] : s.children) tree.children.emplace_back(port, observe(child, depth - 1, get));
    return tree;
  }

  void validate_terms(const Term& t, std::uint32_t table, const NodeBinding& binding, const std::string& where) {
    switch (t.kind()) {
      case Term::Kind::Var:
        if (!binding.contains(t.as_var())) {
          throw Error(ErrorCode::ValidationFailed, where + ": unknown variable '" + t.as_var().name() + "'");
        }
        return;
      case Term::Kind::Param: {
        ParamRef p = t.as_param();
        std::uint32_t n = check_handle(p.engine, p.node);
        if (!(kind_of(n) == tables[table]->kind())) {
          throw Error(ErrorCode::ValidationFailed, where + ": parameter of another kind");
        }
        return;
      }
      case Term::Kind::App: {
        OpSym op;
        try {
          op = tables[table]->resolve(t.op());
        } catch (const Error& e) {
          throw Error(ErrorCode::ValidationFailed, where + ": " + e.what());
        }
        if (t.args().size() != op.arity || t.scalar().has_value() != op.scalar_indexed) {
          throw Error(ErrorCode::ValidationFailed, where + ": '" + op.name + "' applied with the wrong shape");
        }
        for (const auto& a : t.args()) validate_terms(a, table, binding, where);
        return;
      }
    }
  }

  void validate_step(const Step<Term>& step, std::uint32_t table, const NodeBinding& binding,
                     const std::string& where) {
    if (auto v = step_violation(tables[table]->kind(), step)) {
      throw Error(ErrorCode::ValidationFailed, where + ": " + *v);
    }
    for (const auto& [port, t] : step.children) validate_terms(t, table, binding, where);
  }

  void validate_context(const Context& ctx, std::uint32_t table, const NodeBinding& binding,
                        const std::string& where) {
    switch (ctx.kind()) {
      case Context::Kind::Guard: validate_step(ctx.guard_step(), table, binding, where); return;
      case Context::Kind::Leaf: validate_terms(ctx.leaf_term(), table, binding, where); return;
      case Context::Kind::App: {
        try {
          tables[table]->resolve(ctx.op());
        } catch (const Error& e) {
          throw Error(ErrorCode::ValidationFailed, where + ": " + e.what());
        }
        for (const auto& a : ctx.args()) validate_context(a, table, binding, where);
        return;
      }
    }
  }

  void ensure_valid_table(const TablePtr& table) {
    if (validated.contains(table->id())) return;
    auto report = validate_table(*table);
    if (!report.empty()) {
      throw Error(ErrorCode::ValidationFailed,
                  "rule table is invalid at '" + report.front().symbol + "': " + report.front().message);
    }
    validated.insert(table->id());
  }
};

// ---------------------------------------------------------------------------
// Engine

Engine::Engine() : impl_(std::make_unique<Impl>()) {}
Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

std::uint64_t Engine::id() const noexcept { return impl_->id; }

Solution Engine::solve_system(const System& system) {
  Impl& im = *impl_;
  if (!system.table) throw Error(ErrorCode::ValidationFailed, "system has no rule table");
  im.ensure_valid_table(system.table);
  const std::uint32_t table = im.register_table(system.table);

  SystemRecord rec;
  rec.system = system;
  const auto sys_index = static_cast<std::uint32_t>(im.systems.size());
  std::vector<std::uint32_t> fresh;
  for (std::size_t i = 0; i < system.equations.size(); ++i) {
    const Equation& eq = system.equations[i];
    if (rec.binding.contains(eq.var)) {
      throw Error(ErrorCode::ValidationFailed, "variable '" + eq.var.name() + "' defined twice");
    }
    if (const auto* h = std::get_if<SolutionHandle>(&eq.rhs)) {
      std::uint32_t n = im.check(*h);
      if (!(im.kind_of(n) == system.kind())) {
        throw Error(ErrorCode::ValidationFailed, "constant for '" + eq.var.name() + "' has another kind");
      }
      rec.binding.emplace(eq.var, n);
      continue;
    }
    if (std::holds_alternative<VarId>(eq.rhs)) {
      throw Error(ErrorCode::ValidationFailed,
                  "'" + eq.var.name() + "' is bound to a variable of another system");
    }
    rec.binding.emplace(eq.var, static_cast<std::uint32_t>(im.nodes.size() + fresh.size()));
    fresh.push_back(static_cast<std::uint32_t>(i));
  }
  for (const auto& eq : system.equations) {
    const std::string where = "equation for '" + eq.var.name() + "'";
    if (const auto* step = std::get_if<Step<Term>>(&eq.rhs)) {
      im.validate_step(*step, table, rec.binding, where);
    } else if (const auto* ctx = std::get_if<Context>(&eq.rhs)) {
      if (auto path = ctx->unguarded_path()) {
        throw Error(ErrorCode::ValidationFailed, where + ": unguarded path " + *path);
      }
      im.validate_context(*ctx, table, rec.binding, where);
    }
  }
  for (std::uint32_t i : fresh) {
    Node node;
    node.kind = NodeKind::Equation;
    node.table = table;
    node.system = sys_index;
    node.equation = i;
    im.push(std::move(node));
  }
  im.systems.push_back(std::move(rec));

  Solution out;
  for (const auto& eq : system.equations) out.add(eq.var, im.handle(im.systems[sys_index].binding.at(eq.var)));
  return out;
}

SolutionHandle Engine::interpret_op(const TablePtr& table, const OpSym& op, std::span<const SolutionHandle> args,
                                    std::optional<Rational> scalar) {
  Impl& im = *impl_;
  const std::uint32_t t = im.register_table(table);
  OpSym resolved = table->resolve(op);
  if (args.size() != resolved.arity) {
    throw Error(ErrorCode::ArityMismatch, "'" + resolved.name + "' expects " + std::to_string(resolved.arity) +
                                              " arguments, got " + std::to_string(args.size()));
  }
  if (resolved.scalar_indexed != scalar.has_value()) {
    throw Error(ErrorCode::ArityMismatch, "scalar index mismatch for '" + resolved.name + "'");
  }
  std::vector<std::uint32_t> kids;
  for (const auto& h : args) {
    std::uint32_t n = im.check(h);
    if (!(im.kind_of(n) == table->kind())) {
      throw Error(ErrorCode::KindMismatch, "argument of kind " + im.kind_of(n).describe() + " for '" +
                                               resolved.name + "'");
    }
    kids.push_back(n);
  }
  return im.handle(im.intern_term(t, resolved, std::move(scalar), std::move(kids)));
}

SolutionHandle Engine::interpret(const TablePtr& table, const Term& term, const Binding& binding) {
  Impl& im = *impl_;
  const std::uint32_t t = im.register_table(table);
  NodeBinding nb;
  for (const auto& [v, h] : binding) nb.emplace(v, im.check(h));
  return im.handle(im.interpret(t, term, nb));
}

SolutionHandle Engine::given(const TablePtr& table, const Step<SolutionHandle>& step) {
  Impl& im = *impl_;
  const std::uint32_t t = im.register_table(table);
  if (auto v = step_violation(table->kind(), step)) throw Error(ErrorCode::KindMismatch, *v);
  Step<std::uint32_t> s;
  s.label = step.label;
  for (const auto& [port, h] : step.children) {
    std::uint32_t n = im.check(h);
    if (!(im.kind_of(n) == table->kind())) throw Error(ErrorCode::KindMismatch, "continuation of another kind");
    s.children.emplace_back(port, n);
  }
  return im.handle(im.intern_given(t, std::move(s)));
}

Step<SolutionHandle> Engine::unfold(SolutionHandle h) {
  Impl& im = *impl_;
  return im.lift(im.unfold(im.check(h)));
}

ObservationTree Engine::observe(SolutionHandle h, std::size_t depth) {
  Impl& im = *impl_;
  std::uint32_t n = im.check(h);
  ObservationTree tree = im.observe(n, depth, [&im](std::uint32_t x) { return im.unfold(x); });
  if (!im.kind_of(n).deterministic()) tree = canonical_set_tree(std::move(tree));
  return tree;
}

const BehaviorKind& Engine::kind_of(SolutionHandle h) const { return impl_->kind_of(impl_->check(h)); }

const TablePtr& Engine::table_of(SolutionHandle h) const {
  return impl_->tables[impl_->nodes[impl_->check(h)].table];
}

Step<SolutionHandle> Engine::elaborate_guards(const TablePtr& table, const Context& ctx, const Binding& binding) {
  Impl& im = *impl_;
  const std::uint32_t t = im.register_table(table);
  NodeBinding nb;
  for (const auto& [v, h] : binding) nb.emplace(v, im.check(h));
  return im.lift(im.elaborate(t, ctx, nb, [&im](std::uint32_t x) { return im.unfold(x); }));
}

Engine::Recompute Engine::recompute() { return Recompute(*impl_); }

std::string Engine::describe(SolutionHandle h) const {
  const Impl& im = *impl_;
  std::uint32_t root = im.check(h);
  std::string out;
  std::size_t budget = 400;
  auto rec = [&](auto& self, std::uint32_t n) -> void {
    if (budget == 0) {
      out += "...";
      return;
    }
    --budget;
    const Node& node = im.nodes[n];
    switch (node.kind) {
      case NodeKind::Equation:
        out += im.systems[node.system].system.equations[node.equation].var.name();
        return;
      case NodeKind::Given: {
        const BehaviorKind& kind = im.tables[node.table]->kind();
        out += "<" + to_string(node.given.label);
        for (std::size_t i = 0; i < node.given.children.size(); ++i) {
          out += i ? ", " : "; ";
          out += kind.port_name(node.given.children[i].first) + ": ";
          self(self, node.given.children[i].second);
        }
        out += ">";
        return;
      }
      case NodeKind::Term: {
        const OpSym& op = im.tables[node.table]->signature()->at(node.op);
        out += op.name;
        if (node.scalar) out += "[" + to_string(*node.scalar) + "]";
        if (!node.children.empty()) {
          out += "(";
          for (std::size_t i = 0; i < node.children.size(); ++i) {
            if (i) out += ", ";
            self(self, node.children[i]);
          }
          out += ")";
        }
        return;
      }
    }
  };
  rec(rec, root);
  return out;
}

std::size_t Engine::node_count() const noexcept { return impl_->nodes.size(); }

void Engine::set_fuse(std::size_t rule_applications) noexcept { impl_->fuse = rule_applications; }

void Engine::overwrite_memo_for_testing(SolutionHandle h, const Step<SolutionHandle>& step) {
  Impl& im = *impl_;
  std::uint32_t n = im.check(h);
  Step<std::uint32_t> s;
  s.label = step.label;
  for (const auto& [port, c] : step.children) s.children.emplace_back(port, im.check(c));
  im.nodes[n].memo = std::move(s);
}

// ---------------------------------------------------------------------------
// Recompute

namespace {

struct RecomputeGet {
  Engine::Impl& impl;
  std::unordered_map<std::uint32_t, Step<std::uint32_t>>& cache;
  std::unordered_set<std::uint32_t>& busy;

  Step<std::uint32_t> operator()(std::uint32_t n) {
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    if (!busy.insert(n).second) {
      throw Error(ErrorCode::RuleDiverged, "recomputation depends on its own first step");
    }
    struct Release {
      std::unordered_set<std::uint32_t>& busy;
      std::uint32_t n;
      ~Release() { busy.erase(n); }
    } release{busy, n};
    Step<std::uint32_t> s = impl.compute(n, *this);
    cache.emplace(n, s);
    return s;
  }
};

}  // namespace

Step<SolutionHandle> Engine::Recompute::step(SolutionHandle h) {
  std::unordered_set<std::uint32_t> busy;
  RecomputeGet get{*impl_, cache_, busy};
  return impl_->lift(get(impl_->check(h)));
}

ObservationTree Engine::Recompute::observe(SolutionHandle h, std::size_t depth) {
  std::unordered_set<std::uint32_t> busy;
  RecomputeGet get{*impl_, cache_, busy};
  std::uint32_t n = impl_->check(h);
  ObservationTree tree = impl_->observe(n, depth, get);
  if (!impl_->kind_of(n).deterministic()) tree = canonical_set_tree(std::move(tree));
  return tree;
}

Step<SolutionHandle> Engine::Recompute::rhs_step(const System& system, const Rhs& rhs, const Solution& solution) {
  Impl& im = *impl_;
  const std::uint32_t table = im.register_table(system.table);
  NodeBinding nb;
  for (const auto& [v, h] : solution.entries()) nb.emplace(v, im.check(h));
  std::unordered_set<std::uint32_t> busy;
  RecomputeGet get{im, cache_, busy};
  if (const auto* step = std::get_if<Step<Term>>(&rhs)) return im.lift(im.interpret_step(table, *step, nb));
  if (const auto* ctx = std::get_if<Context>(&rhs)) return im.lift(im.elaborate(table, *ctx, nb, get));
  if (const auto* h = std::get_if<SolutionHandle>(&rhs)) return im.lift(get(im.check(*h)));
  throw Error(ErrorCode::InvalidArgument, "right-hand side refers to another system");
}

// ---------------------------------------------------------------------------
// Compositionality

namespace {

Term plug_term(const Term& t, const Substitution& env) { return substitute(t, env); }

Context plug_context(const Context& ctx, const Substitution& env) {
  switch (ctx.kind()) {
    case Context::Kind::Guard:
      return Context::guard(step_map(ctx.guard_step(), [&](const Term& t) { return plug_term(t, env); }));
    case Context::Kind::Leaf: return Context::leaf(plug_term(ctx.leaf_term(), env));
    case Context::Kind::App: {
      std::vector<Context> args;
      for (const auto& a : ctx.args()) args.push_back(plug_context(a, env));
      return Context::app(ctx.op(), std::move(args), ctx.scalar());
    }
  }
  return ctx;
}

Rhs plug_rhs(const Rhs& rhs, const Substitution& env) {
  if (const auto* step = std::get_if<Step<Term>>(&rhs)) {
    return step_map(*step, [&](const Term& t) { return plug_term(t, env); });
  }
  if (const auto* ctx = std::get_if<Context>(&rhs)) return plug_context(*ctx, env);
  return rhs;
}

}  // namespace

Composition compose_systems(Engine& engine, const System& f, const System& e, std::size_t depth) {
  for (const auto& eq : e.equations) {
    if (f.find(eq.var)) throw Error(ErrorCode::VariableClash, "variable '" + eq.var.name() + "' is defined twice");
  }
  if (f.table != e.table && !(f.kind() == e.kind())) {
    throw Error(ErrorCode::KindMismatch, "systems of different kinds");
  }
  Composition out;
  out.combined.table = e.table;
  out.plugged.table = e.table;

  for (const auto& eq : f.equations) {
    if (std::holds_alternative<VarId>(eq.rhs)) {
      throw Error(ErrorCode::ValidationFailed, "the parameter system may not refer to other systems");
    }
    out.combined.equations.push_back(eq);
  }
  for (const auto& eq : e.equations) {
    if (const auto* x = std::get_if<VarId>(&eq.rhs)) {
      const Equation* source = f.find(*x);
      if (!source) throw Error(ErrorCode::ValidationFailed, "'" + x->name() + "' is not a variable of the first system");
      out.combined.equations.push_back(Equation{eq.var, source->rhs});
    } else {
      out.combined.equations.push_back(eq);
    }
  }

  Solution sol_f = engine.solve_system(f);
  Substitution env;
  for (const auto& [v, h] : sol_f.entries()) env.emplace(v, param_term(h));
  for (const auto& eq : e.equations) {
    if (const auto* x = std::get_if<VarId>(&eq.rhs)) {
      out.plugged.equations.push_back(Equation{eq.var, sol_f.at(*x)});
    } else {
      out.plugged.equations.push_back(Equation{eq.var, plug_rhs(eq.rhs, env)});
    }
  }

  Solution sol_combined = engine.solve_system(out.combined);
  Solution sol_plugged = engine.solve_system(out.plugged);
  out.law_holds = true;
  auto compare = [&](const VarId& v, SolutionHandle a, SolutionHandle b) {
    CheckReport r = compare_report(engine, a, b, depth, v.name());
    if (!r.pass) {
      out.law_holds = false;
      out.disagreements.push_back(v.name() + ": " + (r.witness ? to_string(*r.witness) : r.detail));
    }
  };
  for (const auto& eq : e.equations) compare(eq.var, sol_combined.at(eq.var), sol_plugged.at(eq.var));
  for (const auto& eq : f.equations) compare(eq.var, sol_combined.at(eq.var), sol_f.at(eq.var));
  return out;
}

}  // namespace corec

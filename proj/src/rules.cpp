#include "corec/rules.hpp"

#include <atomic>
#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "corec/error.hpp"

namespace corec {

// ---------------------------------------------------------------------------
// Premises

const Term& Premise::child(Port port) const {
  for (const auto& [p, t] : children) {
    if (p == port) return t;
  }
  throw Error(ErrorCode::InvalidArgument, "premise has no continuation at port " + std::to_string(port));
}

const Rational& Premise::number() const {
  if (const auto* r = std::get_if<Rational>(&label)) return *r;
  throw Error(ErrorCode::KindMismatch, "premise label is not a number");
}

bool Premise::bit() const {
  if (const auto* b = std::get_if<bool>(&label)) return *b;
  throw Error(ErrorCode::KindMismatch, "premise label is not a bit");
}

VarId placeholder_self(std::size_t arg) {
  return VarId(std::string(1, kReservedPrefix) + "x" + std::to_string(arg));
}

VarId placeholder_child(std::size_t arg, std::size_t position) {
  return VarId(std::string(1, kReservedPrefix) + "x" + std::to_string(arg) + "/" +
               std::to_string(position));
}

// ---------------------------------------------------------------------------
// Context

struct Context::Node {
  Kind kind;
  OpSym op;
  std::vector<Context> args;
  std::optional<Rational> scalar;
  Step<Term> step;
  std::optional<Term> term;
};

Context Context::app(OpSym op, std::vector<Context> args, std::optional<Rational> scalar) {
  if (args.size() != op.arity) {
    throw Error(ErrorCode::ArityMismatch, "'" + op.name + "' expects " + std::to_string(op.arity) +
                                              " arguments, got " + std::to_string(args.size()));
  }
  if (op.scalar_indexed != scalar.has_value()) {
    throw Error(ErrorCode::ArityMismatch, "scalar index mismatch for '" + op.name + "'");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::App;
  node->op = std::move(op);
  node->args = std::move(args);
  node->scalar = std::move(scalar);
  return Context(std::move(node));
}

Context Context::guard(Step<Term> step) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Guard;
  node->step = std::move(step);
  return Context(std::move(node));
}

Context Context::leaf(Term term) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Leaf;
  node->term = std::move(term);
  return Context(std::move(node));
}

Context::Kind Context::kind() const noexcept { return node_->kind; }

const OpSym& Context::op() const {
  if (node_->kind != Kind::App) throw Error(ErrorCode::InvalidArgument, "context is not an application");
  return node_->op;
}

std::span<const Context> Context::args() const { return node_->args; }
const std::optional<Rational>& Context::scalar() const { return node_->scalar; }

const Step<Term>& Context::guard_step() const {
  if (node_->kind != Kind::Guard) throw Error(ErrorCode::InvalidArgument, "context is not a guard");
  return node_->step;
}

const Term& Context::leaf_term() const {
  if (node_->kind != Kind::Leaf) throw Error(ErrorCode::InvalidArgument, "context is not a leaf");
  return *node_->term;
}

bool Context::operator==(const Context& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::App: return a.op == b.op && a.scalar == b.scalar && a.args == b.args;
    case Kind::Guard: return a.step == b.step;
    case Kind::Leaf: return *a.term == *b.term;
  }
  return false;
}

std::optional<std::string> Context::unguarded_path() const {
  switch (node_->kind) {
    case Kind::Guard: return std::nullopt;
    case Kind::Leaf: {
      auto vars = corec::free_vars(*node_->term);
      if (vars.empty()) return std::nullopt;
      return vars.begin()->name();
    }
    case Kind::App:
      for (std::size_t i = 0; i < node_->args.size(); ++i) {
        if (auto path = node_->args[i].unguarded_path()) {
          return node_->op.name + "/" + std::to_string(i) + "/" + *path;
        }
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::set<VarId> Context::free_vars() const {
  std::set<VarId> out;
  switch (node_->kind) {
    case Kind::Guard:
      for (const auto& [port, t] : node_->step.children) out.merge(corec::free_vars(t));
      break;
    case Kind::Leaf: out = corec::free_vars(*node_->term); break;
    case Kind::App:
      for (const auto& a : node_->args) out.merge(a.free_vars());
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// LabelExpr

struct LabelExpr::Node {
  Op op;
  Label value;
  std::size_t arg = 0;
  std::vector<LabelExpr> kids;
};

LabelExpr LabelExpr::constant(Label value) {
  auto node = std::make_shared<Node>();
  node->op = Op::Const;
  node->value = std::move(value);
  return LabelExpr(std::move(node));
}

LabelExpr LabelExpr::premise(std::size_t arg) {
  auto node = std::make_shared<Node>();
  node->op = Op::Premise;
  node->arg = arg;
  return LabelExpr(std::move(node));
}

LabelExpr LabelExpr::binary(Op op, LabelExpr lhs, LabelExpr rhs) {
  if (op != Op::Add && op != Op::Sub && op != Op::Mul && op != Op::And && op != Op::Or) {
    throw Error(ErrorCode::InvalidArgument, "not a binary label operator");
  }
  auto node = std::make_shared<Node>();
  node->op = op;
  node->kids = {std::move(lhs), std::move(rhs)};
  return LabelExpr(std::move(node));
}

LabelExpr LabelExpr::unary(Op op, LabelExpr operand) {
  if (op != Op::Neg && op != Op::Not) throw Error(ErrorCode::InvalidArgument, "not a unary label operator");
  auto node = std::make_shared<Node>();
  node->op = op;
  node->kids = {std::move(operand)};
  return LabelExpr(std::move(node));
}

namespace {

const Rational& as_number(const Label& l) {
  if (const auto* r = std::get_if<Rational>(&l)) return *r;
  throw Error(ErrorCode::KindMismatch, "arithmetic on a non-numeric label");
}

bool as_bit(const Label& l) {
  if (const auto* b = std::get_if<bool>(&l)) return *b;
  throw Error(ErrorCode::KindMismatch, "boolean operator on a non-boolean label");
}

}  // namespace

Label LabelExpr::eval_labels(std::span<const Label> labels) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Premise:
      if (n.arg >= labels.size()) {
        throw Error(ErrorCode::InvalidArgument, "label of argument " + std::to_string(n.arg) + " not available");
      }
      return labels[n.arg];
    case Op::Neg: return Rational(-as_number(n.kids[0].eval_labels(labels)));
    case Op::Not: return !as_bit(n.kids[0].eval_labels(labels));
    default: break;
  }
  Label l = n.kids[0].eval_labels(labels);
  Label r = n.kids[1].eval_labels(labels);
  switch (n.op) {
    case Op::Add: return Rational(as_number(l) + as_number(r));
    case Op::Sub: return Rational(as_number(l) - as_number(r));
    case Op::Mul: return Rational(as_number(l) * as_number(r));
    case Op::And: return as_bit(l) && as_bit(r);
    case Op::Or: return as_bit(l) || as_bit(r);
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "malformed label expression");
}

Label LabelExpr::eval(std::span<const Premise> args) const {
  std::vector<Label> labels;
  labels.reserve(args.size());
  for (const auto& p : args) labels.push_back(p.label);
  return eval_labels(labels);
}

std::size_t LabelExpr::max_premise() const {
  const Node& n = *node_;
  if (n.op == Op::Premise) return n.arg + 1;
  std::size_t m = 0;
  for (const auto& k : n.kids) m = std::max(m, k.max_premise());
  return m;
}

bool LabelExpr::references_premises() const {
  const Node& n = *node_;
  if (n.op == Op::Premise) return true;
  for (const auto& k : n.kids) {
    if (k.references_premises()) return true;
  }
  return false;
}

namespace {

int precedence(LabelExpr::Op op) {
  switch (op) {
    case LabelExpr::Op::Add:
    case LabelExpr::Op::Sub:
    case LabelExpr::Op::Or: return 1;
    case LabelExpr::Op::Mul:
    case LabelExpr::Op::And: return 2;
    case LabelExpr::Op::Neg:
    case LabelExpr::Op::Not: return 3;
    default: return 4;
  }
}

}  // namespace

std::string LabelExpr::to_string(std::span<const std::string> names) const {
  const Node& n = *node_;
  auto wrap = [&](const LabelExpr& kid, int min_prec) {
    std::string s = kid.to_string(names);
    return precedence(kid.node_->op) < min_prec ? "(" + s + ")" : s;
  };
  switch (n.op) {
    case Op::Const: {
      std::string s = corec::to_string(n.value);
      if (const auto* r = std::get_if<Rational>(&n.value); r && *r < 0) return "(" + s + ")";
      return s;
    }
    case Op::Premise:
      return n.arg < names.size() ? names[n.arg] : "$" + std::to_string(n.arg);
    case Op::Neg: return "-" + wrap(n.kids[0], 3);
    case Op::Not: return "!" + wrap(n.kids[0], 3);
    case Op::Add: return wrap(n.kids[0], 1) + " + " + wrap(n.kids[1], 2);
    case Op::Sub: return wrap(n.kids[0], 1) + " - " + wrap(n.kids[1], 2);
    case Op::Or: return wrap(n.kids[0], 1) + " | " + wrap(n.kids[1], 2);
    case Op::Mul: return wrap(n.kids[0], 2) + " * " + wrap(n.kids[1], 3);
    case Op::And: return wrap(n.kids[0], 2) + " & " + wrap(n.kids[1], 3);
  }
  return {};
}

// ---------------------------------------------------------------------------
// RuleTable

namespace {

std::atomic<std::uint64_t> next_table_id{1};

Term embed_into(const Term& t, const Signature& sig) {
  try {
    return embed_signature(t, sig);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotASummand) throw;
    throw Error(ErrorCode::ForeignSymbol, std::string("conclusion uses a symbol outside the table: ") + e.what());
  }
}

Step<Term> embed_step(const Step<Term>& step, const Signature& sig) {
  return step_map(step, [&](const Term& t) { return embed_into(t, sig); });
}

Context embed_context(const Context& ctx, const Signature& sig) {
  switch (ctx.kind()) {
    case Context::Kind::Guard: return Context::guard(embed_step(ctx.guard_step(), sig));
    case Context::Kind::Leaf: return Context::leaf(embed_into(ctx.leaf_term(), sig));
    case Context::Kind::App: {
      auto image = sig.embed(ctx.op());
      if (!image) throw Error(ErrorCode::ForeignSymbol, "context uses '" + ctx.op().name + "' outside the table");
      std::vector<Context> args;
      for (const auto& a : ctx.args()) args.push_back(embed_context(a, sig));
      return Context::app(*image, std::move(args), ctx.scalar());
    }
  }
  return ctx;
}

}  // namespace

RuleTable::RuleTable(BehaviorKind kind, SignaturePtr sig, std::vector<TableRule> rules)
    : kind_(std::move(kind)), sig_(std::move(sig)), rules_(std::move(rules)), id_(next_table_id++) {
  if (!sig_) throw Error(ErrorCode::InvalidArgument, "rule table needs a signature");
  if (rules_.size() != sig_->size()) {
    throw Error(ErrorCode::InvalidArgument, "rule table needs exactly one slot per symbol");
  }
}

OpSym RuleTable::resolve(const OpSym& op) const {
  if (sig_->contains(op)) return op;
  if (auto image = sig_->embed(op)) return *image;
  throw Error(ErrorCode::ForeignSymbol, "symbol '" + op.name + "' is not part of this table");
}

const TableRule& RuleTable::rule(const OpSym& op) const { return rules_[resolve(op).index]; }

bool RuleTable::srps_backed(const OpSym& op) const {
  return std::holds_alternative<SrpsRule>(rule(op));
}

Step<Term> RuleTable::conclude(const OpSym& op, const RuleInput& input) const {
  const TableRule& r = rule(op);
  if (const auto* g = std::get_if<GsosRule>(&r)) return embed_step(g->conclude(input), *sig_);
  if (std::holds_alternative<SrpsRule>(r)) {
    throw Error(ErrorCode::InvalidArgument, "'" + op.name + "' is defined by a guarded context");
  }
  throw Error(ErrorCode::MissingRule, "no rule for '" + op.name + "'");
}

Context RuleTable::context(const OpSym& op, const RuleInput& input) const {
  const TableRule& r = rule(op);
  if (const auto* s = std::get_if<SrpsRule>(&r)) return embed_context(s->body(input), *sig_);
  throw Error(ErrorCode::InvalidArgument, "'" + op.name + "' is not defined by a guarded context");
}

// ---------------------------------------------------------------------------
// Probing

std::vector<std::vector<Premise>> probe_premises(const BehaviorKind& kind, std::size_t arity) {
  auto premise = [&](std::size_t i, Label label, bool full) {
    Premise p;
    p.label = std::move(label);
    p.self = mk_var(placeholder_self(i));
    if (kind.deterministic()) {
      for (std::size_t port = 0; port < kind.port_count(); ++port) {
        p.children.emplace_back(static_cast<Port>(port), mk_var(placeholder_child(i, port)));
      }
    } else if (full) {
      for (std::size_t a = 0; a < kind.actions().size(); ++a) {
        p.children.emplace_back(static_cast<Port>(a), mk_var(placeholder_child(i, a)));
      }
    }
    return p;
  };

  std::vector<std::vector<Premise>> out;
  const int samples = 4;
  for (int s = 0; s < samples; ++s) {
    std::vector<Premise> args;
    for (std::size_t i = 0; i < arity; ++i) {
      switch (kind.tag()) {
        case KindTag::Stream:
        case KindTag::Tree: {
          static const Rational values[] = {Rational(0), Rational(1), Rational(2), Rational(-1, 3),
                                            Rational(5), Rational(7, 2)};
          Rational v = s == 0 ? Rational(0) : s == 1 ? Rational(1) : values[(i + s) % 6];
          args.push_back(premise(i, v, true));
          break;
        }
        case KindTag::Language:
          args.push_back(premise(i, s == 0 ? false : s == 1 ? true : ((i + s) % 2 == 0), true));
          break;
        case KindTag::Process:
          args.push_back(premise(i, std::monostate{}, s == 0 ? false : s == 1 ? true : ((i + s) % 2 == 0)));
          break;
      }
    }
    out.push_back(std::move(args));
    if (arity == 0) break;
  }
  return out;
}

namespace {

void check_arity(const Term& t) {
  if (!t.is_app()) return;
  if (t.args().size() != t.op().arity || t.scalar().has_value() != t.op().scalar_indexed) {
    throw Error(ErrorCode::ArityMismatch, "'" + t.op().name + "' applied with the wrong shape");
  }
  for (const auto& a : t.args()) check_arity(a);
}

void check_arity(const Context& c) {
  switch (c.kind()) {
    case Context::Kind::Guard:
      for (const auto& [port, t] : c.guard_step().children) check_arity(t);
      break;
    case Context::Kind::Leaf: check_arity(c.leaf_term()); break;
    case Context::Kind::App:
      for (const auto& a : c.args()) check_arity(a);
      break;
  }
}

std::set<VarId> declared_placeholders(std::span<const Premise> args) {
  std::set<VarId> out;
  for (const auto& p : args) {
    if (p.self.is_var()) out.insert(p.self.as_var());
    for (const auto& [port, t] : p.children) {
      if (t.is_var()) out.insert(t.as_var());
    }
  }
  return out;
}

std::optional<std::string> undeclared(const std::set<VarId>& used, const std::set<VarId>& declared) {
  for (const auto& v : used) {
    if (!declared.contains(v)) return "uses undeclared placeholder " + v.name();
  }
  return std::nullopt;
}

std::optional<Rational> probe_scalar(const OpSym& op) {
  if (op.scalar_indexed) return Rational(2);
  return std::nullopt;
}

// Probes one rule of `table`; returns the first problem found.
std::optional<std::pair<ErrorCode, std::string>> probe_rule(const RuleTable& table, std::size_t index,
                                                            std::size_t outer_limit) {
  const OpSym& op = table.signature()->at(index);
  const TableRule& rule = table.rules()[index];
  if (std::holds_alternative<std::monostate>(rule)) {
    return std::pair{ErrorCode::MissingRule, "no rule"};
  }
  for (const auto& args : probe_premises(table.kind(), op.arity)) {
    RuleInput input{args, probe_scalar(op)};
    const auto declared = declared_placeholders(args);
    try {
      if (std::holds_alternative<GsosRule>(rule)) {
        Step<Term> step = table.conclude(op, input);
        if (auto v = step_violation(table.kind(), step)) return std::pair{ErrorCode::KindMismatch, *v};
        for (const auto& [port, t] : step.children) {
          check_arity(t);
          std::set<VarId> used = free_vars(t);
          if (auto v = undeclared(used, declared)) return std::pair{ErrorCode::ForeignSymbol, *v};
        }
      } else {
        Context ctx = table.context(op, input);
        check_arity(ctx);
        if (auto path = ctx.unguarded_path()) {
          return std::pair{ErrorCode::UnguardedPath, "unguarded path " + *path};
        }
        if (auto v = undeclared(ctx.free_vars(), declared)) return std::pair{ErrorCode::ForeignSymbol, *v};
        std::vector<const Context*> stack{&ctx};
        while (!stack.empty()) {
          const Context* c = stack.back();
          stack.pop_back();
          if (c->kind() == Context::Kind::Guard) {
            if (auto v = step_violation(table.kind(), c->guard_step())) {
              return std::pair{ErrorCode::KindMismatch, *v};
            }
          } else if (c->kind() == Context::Kind::App) {
            if (table.srps_backed(c->op())) {
              return std::pair{ErrorCode::ForeignSymbol, "context applies '" + c->op().name + "' outside a guard"};
            }
            if (c->op().index >= outer_limit) {
              return std::pair{ErrorCode::ForeignSymbol,
                               "context applies new symbol '" + c->op().name + "' outside a guard"};
            }
            for (const auto& a : c->args()) stack.push_back(&a);
          }
        }
      }
    } catch (const Error& e) {
      return std::pair{e.code(), std::string(e.what())};
    }
  }
  return std::nullopt;
}

// Matches rules to symbol slots by name.
template <typename R>
std::vector<TableRule> slot_rules(const Signature& sig, std::vector<R> rules) {
  std::vector<TableRule> slots(sig.size());
  std::vector<std::string> foreign;
  for (auto& r : rules) {
    auto sym = sig.find(r.op.name);
    if (!sym) {
      foreign.push_back(r.op.name);
      continue;
    }
    if (sym->arity != r.op.arity || sym->scalar_indexed != r.op.scalar_indexed) {
      throw Error(ErrorCode::ArityMismatch, "rule for '" + r.op.name + "' has arity " + std::to_string(r.op.arity) +
                                                ", symbol has " + std::to_string(sym->arity));
    }
    if (!std::holds_alternative<std::monostate>(slots[sym->index])) {
      throw Error(ErrorCode::DuplicateRule, "two rules for '" + r.op.name + "'");
    }
    r.op = *sym;
    slots[sym->index] = std::move(r);
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (std::holds_alternative<std::monostate>(slots[i])) {
      throw Error(ErrorCode::MissingRule, "no rule for '" + sig.at(i).name + "'");
    }
  }
  if (!foreign.empty()) {
    throw Error(ErrorCode::ForeignSymbol, "rule for '" + foreign.front() + "' which is not in the signature");
  }
  return slots;
}

void probe_or_throw(const RuleTable& table, std::size_t from, std::size_t outer_limit) {
  for (std::size_t i = from; i < table.signature()->size(); ++i) {
    if (auto problem = probe_rule(table, i, outer_limit)) {
      throw Error(problem->first, "'" + table.signature()->at(i).name + "': " + problem->second);
    }
  }
}

}  // namespace

TablePtr build_table(BehaviorKind kind, SignaturePtr sig, std::vector<GsosRule> rules) {
  if (!sig) throw Error(ErrorCode::InvalidArgument, "build_table needs a signature");
  auto slots = slot_rules(*sig, std::move(rules));
  auto table = std::make_shared<const RuleTable>(std::move(kind), sig, std::move(slots));
  probe_or_throw(*table, 0, SIZE_MAX);
  return table;
}

TablePtr empty_table(BehaviorKind kind) {
  return std::make_shared<const RuleTable>(std::move(kind), Signature::make({}), std::vector<TableRule>{});
}

namespace {

template <typename R>
TablePtr extend(const TablePtr& table, const SignaturePtr& new_sig, std::vector<R> rules, bool srps) {
  if (!table || !new_sig) throw Error(ErrorCode::InvalidArgument, "extension needs a table and a signature");
  auto slots = slot_rules(*new_sig, std::move(rules));
  SignaturePtr combined = Signature::sum(*table->signature(), *new_sig);
  std::vector<TableRule> all(table->rules().begin(), table->rules().end());
  for (auto& s : slots) all.push_back(std::move(s));
  auto out = std::make_shared<const RuleTable>(table->kind(), combined, std::move(all));
  probe_or_throw(*out, table->signature()->size(), srps ? table->signature()->size() : SIZE_MAX);
  return out;
}

}  // namespace

TablePtr extend_with_rps(const TablePtr& table, const RpsDef& def) {
  return extend(table, def.new_sig, def.rules, false);
}

TablePtr register_srps(const TablePtr& table, const SrpsDef& def) {
  return extend(table, def.new_sig, def.rules, true);
}

TablePtr add_rule(const TablePtr& table, GsosRule rule) {
  if (!table) throw Error(ErrorCode::InvalidArgument, "add_rule needs a table");
  if (table->signature()->find(rule.op.name) || table->signature()->is_summand(rule.op.sig)) {
    throw Error(ErrorCode::DuplicateRule, "'" + rule.op.name + "' is already defined");
  }
  SignaturePtr home = Signature::by_id(rule.op.sig);
  if (!home) home = Signature::make({SymbolDecl{rule.op.name, rule.op.arity, rule.op.scalar_indexed}});
  return extend_with_rps(table, RpsDef{home, {std::move(rule)}});
}

GsosRule make_rule(SymbolDecl decl, Conclude conclude) {
  SignaturePtr sig = Signature::make({std::move(decl)});
  // The closure keeps the signature alive so add_rule can find it.
  return GsosRule{sig->at(0), [sig, conclude = std::move(conclude)](const RuleInput& in) { return conclude(in); }};
}

GsosRule make_recursive_rule(SymbolDecl decl, const std::function<Conclude(const OpSym&)>& make) {
  SignaturePtr sig = Signature::make({std::move(decl)});
  Conclude conclude = make(sig->at(0));
  return GsosRule{sig->at(0), [sig, conclude = std::move(conclude)](const RuleInput& in) { return conclude(in); }};
}

std::vector<Violation> validate_table(const RuleTable& table) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < table.signature()->size(); ++i) {
    if (auto problem = probe_rule(table, i, SIZE_MAX)) {
      out.push_back(Violation{table.signature()->at(i).name, problem->second});
    }
  }
  return out;
}

}  // namespace corec

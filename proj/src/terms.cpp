#include "corec/terms.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <unordered_set>

#include "corec/error.hpp"

namespace corec {

namespace {

const std::string* intern(std::string_view name) {
  static std::mutex mutex;
  static std::unordered_set<std::string> pool;
  std::lock_guard lock(mutex);
  return &*pool.emplace(name).first;
}

std::atomic<SigId> next_sig_id{1};

std::mutex registry_mutex;
std::unordered_map<SigId, std::weak_ptr<const Signature>>& registry() {
  static std::unordered_map<SigId, std::weak_ptr<const Signature>> map;
  return map;
}

void remember(const std::shared_ptr<const Signature>& sig) {
  std::lock_guard lock(registry_mutex);
  auto& map = registry();
  if (map.size() > 64 && map.size() % 64 == 0) {
    std::erase_if(map, [](const auto& entry) { return entry.second.expired(); });
  }
  map[sig->id()] = sig;
}

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

VarId::VarId() : name_(intern("")) {}
VarId::VarId(std::string_view name) : name_(intern(name)) {}

std::strong_ordering VarId::operator<=>(const VarId& other) const noexcept {
  if (name_ == other.name_) return std::strong_ordering::equal;
  return *name_ <=> *other.name_;
}

VarId FreshVarSupply::next() {
  return VarId(std::string(1, kReservedPrefix) + stem_ + std::to_string(counter_++));
}

// ---------------------------------------------------------------------------
// Signature

SignaturePtr Signature::make(std::vector<SymbolDecl> decls) {
  auto sig = std::shared_ptr<Signature>(new Signature());
  sig->id_ = next_sig_id++;
  std::vector<std::size_t> identity;
  for (auto& decl : decls) {
    if (sig->find(decl.name)) {
      throw Error(ErrorCode::DuplicateRule, "symbol '" + decl.name + "' declared twice");
    }
    identity.push_back(sig->symbols_.size());
    sig->symbols_.push_back(
        OpSym{decl.name, decl.arity, sig->id_, sig->symbols_.size(), decl.scalar_indexed});
  }
  sig->embeddings_.emplace(sig->id_, std::move(identity));
  remember(sig);
  return sig;
}

SignaturePtr Signature::by_id(SigId id) {
  std::lock_guard lock(registry_mutex);
  auto it = registry().find(id);
  return it == registry().end() ? nullptr : it->second.lock();
}

SignaturePtr Signature::sum(const Signature& left, const Signature& right) {
  auto sig = std::shared_ptr<Signature>(new Signature());
  sig->id_ = next_sig_id++;
  for (const auto& sym : left.symbols_) {
    sig->symbols_.push_back(OpSym{sym.name, sym.arity, sig->id_, sig->symbols_.size(),
                                  sym.scalar_indexed});
  }
  const std::size_t offset = left.symbols_.size();
  for (const auto& sym : right.symbols_) {
    std::string name = sym.name;
    while (sig->find(name)) name += '\'';
    sig->symbols_.push_back(OpSym{name, sym.arity, sig->id_, sig->symbols_.size(),
                                  sym.scalar_indexed});
  }
  std::vector<std::size_t> identity(sig->symbols_.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
  sig->embeddings_.emplace(sig->id_, std::move(identity));
  // Left summands win when both sides share one.
  for (const auto& [id, map] : left.embeddings_) sig->embeddings_.emplace(id, map);
  for (const auto& [id, map] : right.embeddings_) {
    std::vector<std::size_t> shifted(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) shifted[i] = map[i] + offset;
    sig->embeddings_.emplace(id, std::move(shifted));
  }
  remember(sig);
  return sig;
}

std::optional<OpSym> Signature::find(std::string_view name) const {
  for (const auto& sym : symbols_) {
    if (sym.name == name) return sym;
  }
  return std::nullopt;
}

const OpSym& Signature::lookup(std::string_view name) const {
  for (const auto& sym : symbols_) {
    if (sym.name == name) return sym;
  }
  throw Error(ErrorCode::UnknownSymbol, "no symbol '" + std::string(name) + "'");
}

bool Signature::is_summand(SigId other) const noexcept { return embeddings_.contains(other); }

std::optional<OpSym> Signature::embed(const OpSym& sym) const {
  auto it = embeddings_.find(sym.sig);
  if (it == embeddings_.end() || sym.index >= it->second.size()) return std::nullopt;
  return symbols_[it->second[sym.index]];
}

bool Signature::contains(const OpSym& sym) const noexcept {
  return sym.sig == id_ && sym.index < symbols_.size() && symbols_[sym.index] == sym;
}

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  Kind kind;
  VarId var;
  ParamRef param;
  OpSym op;
  std::optional<Rational> scalar;
  std::vector<Term> args;
  std::size_t hash = 0;
  std::size_t depth = 1;
  std::size_t size = 1;
};

Term::Term() {
  static const Term blank = Term::var(VarId());
  node_ = blank.node_;
}

Term Term::var(VarId v) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Var;
  node->var = v;
  node->hash = mix(1, std::hash<VarId>{}(v));
  return Term(std::move(node));
}

Term Term::param(ParamRef p) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Param;
  node->param = p;
  node->hash = mix(mix(2, p.engine), p.node);
  return Term(std::move(node));
}

Term Term::app(OpSym op, std::vector<Term> args, std::optional<Rational> scalar) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::App;
  std::size_t h = mix(mix(3, op.sig), op.index);
  if (scalar) h = mix(h, hash_value(*scalar));
  std::size_t depth = 0;
  std::size_t size = 1;
  for (const auto& a : args) {
    h = mix(h, a.hash());
    depth = std::max(depth, a.depth());
    size += a.size();
  }
  node->hash = h;
  node->depth = depth + 1;
  node->size = size;
  node->op = std::move(op);
  node->scalar = std::move(scalar);
  node->args = std::move(args);
  return Term(std::move(node));
}

Term::Kind Term::kind() const noexcept { return node_->kind; }

VarId Term::as_var() const {
  if (node_->kind != Kind::Var) throw Error(ErrorCode::InvalidArgument, "term is not a variable");
  return node_->var;
}

ParamRef Term::as_param() const {
  if (node_->kind != Kind::Param) throw Error(ErrorCode::InvalidArgument, "term is not a param");
  return node_->param;
}

const OpSym& Term::op() const {
  if (node_->kind != Kind::App) throw Error(ErrorCode::InvalidArgument, "term is not an application");
  return node_->op;
}

std::span<const Term> Term::args() const { return node_->args; }
const std::optional<Rational>& Term::scalar() const { return node_->scalar; }
std::size_t Term::hash() const noexcept { return node_->hash; }
std::size_t Term::depth() const noexcept { return node_->depth; }
std::size_t Term::size() const noexcept { return node_->size; }

bool Term::operator==(const Term& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.hash != b.hash || a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Var: return a.var == b.var;
    case Kind::Param: return a.param == b.param;
    case Kind::App:
      return a.op == b.op && a.scalar == b.scalar && a.args == b.args;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Operations

Term mk_var(VarId v) { return Term::var(v); }
Term mk_var(std::string_view name) { return Term::var(VarId(name)); }

namespace {

void check_within(const Term& t, const Signature& within) {
  if (!t.is_app()) return;
  if (!within.embed(t.op())) {
    throw Error(ErrorCode::ForeignSymbol,
                "symbol '" + t.op().name + "' is outside the target signature");
  }
  for (const auto& a : t.args()) check_within(a, within);
}

Term checked_app(const OpSym& op, std::optional<Rational> scalar, std::vector<Term> args,
                 const Signature* within) {
  if (args.size() != op.arity) {
    throw Error(ErrorCode::ArityMismatch, "'" + op.name + "' expects " + std::to_string(op.arity) +
                                              " arguments, got " + std::to_string(args.size()));
  }
  if (op.scalar_indexed != scalar.has_value()) {
    throw Error(ErrorCode::ArityMismatch,
                "'" + op.name + (op.scalar_indexed ? "' needs a scalar index" : "' takes no scalar index"));
  }
  Term t = Term::app(op, std::move(args), std::move(scalar));
  if (within) check_within(t, *within);
  return t;
}

}  // namespace

Term mk_app(const OpSym& op, std::vector<Term> args, const Signature* within) {
  return checked_app(op, std::nullopt, std::move(args), within);
}

Term mk_app(const OpSym& op, Rational scalar, std::vector<Term> args, const Signature* within) {
  return checked_app(op, std::move(scalar), std::move(args), within);
}

Term substitute(const Term& t, const Substitution& env) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = env.find(t.as_var());
      return it == env.end() ? t : it->second;
    }
    case Term::Kind::Param: return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(substitute(a, env));
        changed = changed || !args.back().same(a);
      }
      if (!changed) return t;
      return Term::app(t.op(), std::move(args), t.scalar());
    }
  }
  return t;
}

Term embed_signature(const Term& t, const Signature& into) {
  if (!t.is_app()) return t;
  auto image = into.embed(t.op());
  if (!image) {
    throw Error(ErrorCode::NotASummand,
                "signature of '" + t.op().name + "' is not a summand of the target");
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = !(*image == t.op());
  for (const auto& a : t.args()) {
    args.push_back(embed_signature(a, into));
    changed = changed || !args.back().same(a);
  }
  if (!changed) return t;
  return Term::app(*image, std::move(args), t.scalar());
}

namespace {

void collect_vars(const Term& t, std::set<VarId>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: out.insert(t.as_var()); break;
    case Term::Kind::Param: break;
    case Term::Kind::App:
      for (const auto& a : t.args()) collect_vars(a, out);
      break;
  }
}

}  // namespace

std::set<VarId> free_vars(const Term& t) {
  std::set<VarId> out;
  collect_vars(t, out);
  return out;
}

bool is_closed(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return false;
    case Term::Kind::Param: return true;
    case Term::Kind::App:
      return std::all_of(t.args().begin(), t.args().end(), [](const Term& a) { return is_closed(a); });
  }
  return true;
}

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return t.as_var().name();
    case Term::Kind::Param: return "@" + std::to_string(t.as_param().node);
    case Term::Kind::App: {
      std::string out = t.op().name;
      if (t.scalar()) out += "[" + to_string(*t.scalar()) + "]";
      if (!t.args().empty()) {
        out += "(";
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          if (i) out += ", ";
          out += to_string(t.args()[i]);
        }
        out += ")";
      }
      return out;
    }
  }
  return {};
}

}  // namespace corec

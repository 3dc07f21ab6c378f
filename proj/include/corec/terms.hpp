#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corec/rational.hpp"

namespace corec {

/// Interned variable name. Comparison by identity is O(1); ordering is by
/// spelling so ordered containers stay deterministic across runs.
class VarId {
 public:
  VarId();
  explicit VarId(std::string_view name);

  const std::string& name() const noexcept { return *name_; }

  bool operator==(const VarId& other) const noexcept { return name_ == other.name_; }
  std::strong_ordering operator<=>(const VarId& other) const noexcept;

 private:
  const std::string* name_;
};

/// Prefix reserved for engine-generated names; parsers never produce it.
inline constexpr char kReservedPrefix = '%';

/// Hands out `%<stem><n>` names, unique per supply.
class FreshVarSupply {
 public:
  explicit FreshVarSupply(std::string stem = "v") : stem_(std::move(stem)) {}
  VarId next();

 private:
  std::string stem_;
  std::uint64_t counter_ = 0;
};

using SigId = std::uint64_t;

struct OpSym {
  std::string name;
  std::size_t arity = 0;
  SigId sig = 0;
  std::size_t index = 0;
  // Families such as the stream constants r or the r-multiplier carry their
  // rational on the App node rather than minting one symbol per value.
  bool scalar_indexed = false;

  bool operator==(const OpSym&) const = default;
};

struct SymbolDecl {
  std::string name;
  std::size_t arity = 0;
  bool scalar_indexed = false;
};

class Signature;
using SignaturePtr = std::shared_ptr<const Signature>;

/// A finite ordered list of operation symbols. A sum of two signatures
/// records how each summand (and, transitively, each of their summands)
/// embeds into it, which is what embed_signature follows.
class Signature {
 public:
  /// Throws Error(DuplicateRule) on repeated names.
  static SignaturePtr make(std::vector<SymbolDecl> decls);
  /// Left symbols keep their names; right symbols are renamed with trailing
  /// primes on collision.
  static SignaturePtr sum(const Signature& left, const Signature& right);
  /// Live signature with this id, or null.
  static SignaturePtr by_id(SigId id);

  SigId id() const noexcept { return id_; }
  std::span<const OpSym> symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  const OpSym& at(std::size_t index) const { return symbols_.at(index); }

  std::optional<OpSym> find(std::string_view name) const;
  /// Throws Error(UnknownSymbol).
  const OpSym& lookup(std::string_view name) const;

  bool is_summand(SigId other) const noexcept;
  /// The image of `sym` in this signature, if sym's signature is a summand.
  std::optional<OpSym> embed(const OpSym& sym) const;
  bool contains(const OpSym& sym) const noexcept;

 private:
  Signature() = default;

  SigId id_ = 0;
  std::vector<OpSym> symbols_;
  std::unordered_map<SigId, std::vector<std::size_t>> embeddings_;
};

/// A reference to an already-solved state, i.e. a constant of the carrier.
struct ParamRef {
  std::uint64_t engine = 0;
  std::uint32_t node = 0;

  bool operator==(const ParamRef&) const = default;
  auto operator<=>(const ParamRef&) const = default;
};

/// Immutable, structurally compared tree over some signature. Copies share
/// the underlying nodes.
class Term {
 public:
  enum class Kind { Var, Param, App };

  /// The variable with the empty name; a placeholder value.
  Term();

  static Term var(VarId v);
  static Term param(ParamRef p);
  /// Unchecked construction; prefer mk_app.
  static Term app(OpSym op, std::vector<Term> args, std::optional<Rational> scalar = {});

  Kind kind() const noexcept;
  bool is_var() const noexcept { return kind() == Kind::Var; }
  bool is_param() const noexcept { return kind() == Kind::Param; }
  bool is_app() const noexcept { return kind() == Kind::App; }

  VarId as_var() const;
  ParamRef as_param() const;
  const OpSym& op() const;
  std::span<const Term> args() const;
  const std::optional<Rational>& scalar() const;

  std::size_t hash() const noexcept;
  std::size_t depth() const noexcept;
  std::size_t size() const noexcept;

  /// Same underlying node (cheaper than ==, implies it).
  bool same(const Term& other) const noexcept { return node_ == other.node_; }
  bool operator==(const Term& other) const;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

using Substitution = std::unordered_map<VarId, Term, std::hash<VarId>>;

Term mk_var(VarId v);
Term mk_var(std::string_view name);

/// Checks arity and scalar presence; with `within`, also that every symbol
/// in the result belongs to (a summand of) that signature.
Term mk_app(const OpSym& op, std::vector<Term> args, const Signature* within = nullptr);
Term mk_app(const OpSym& op, Rational scalar, std::vector<Term> args,
            const Signature* within = nullptr);

/// Simultaneous replacement; variables missing from env stay put.
Term substitute(const Term& t, const Substitution& env);

/// Renames every symbol into `into`. Throws Error(NotASummand).
Term embed_signature(const Term& t, const Signature& into);

std::set<VarId> free_vars(const Term& t);
bool is_closed(const Term& t);

/// `name[scalar](arg, ...)`; nullary symbols print without parentheses,
/// params as `@node`.
std::string to_string(const Term& t);

}  // namespace corec

template <>
struct std::hash<corec::VarId> {
  std::size_t operator()(const corec::VarId& v) const noexcept {
    return std::hash<const void*>{}(&v.name());
  }
};

template <>
struct std::hash<corec::Term> {
  std::size_t operator()(const corec::Term& t) const noexcept { return t.hash(); }
};

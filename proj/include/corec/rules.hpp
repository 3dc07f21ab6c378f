#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "corec/behavior.hpp"
#include "corec/terms.hpp"

namespace corec {

/// What a rule sees of one argument: its observed label, a placeholder for
/// each continuation and a placeholder for the argument itself.
struct Premise {
  Label label;
  Term self;
  std::vector<std::pair<Port, Term>> children;

  const Term& child(Port port) const;
  const Rational& number() const;  // stream/tree label
  bool bit() const;                // language label
};

struct RuleInput {
  std::span<const Premise> args;
  std::optional<Rational> scalar;
};

/// Reserved placeholder names used for premises.
VarId placeholder_self(std::size_t arg);
VarId placeholder_child(std::size_t arg, std::size_t position);

/// Conclusion continuations are terms over the placeholders (plus closed
/// terms and params); the conclusion is a single step, hence guarded.
using Conclude = std::function<Step<Term>(const RuleInput&)>;

struct GsosRule {
  OpSym op;
  Conclude conclude;
};

/// Guarded context: operations of the given signature over guards. A leaf
/// must be closed; a leaf with a free variable is an unguarded path.
class Context {
 public:
  enum class Kind { App, Guard, Leaf };

  static Context app(OpSym op, std::vector<Context> args, std::optional<Rational> scalar = {});
  static Context guard(Step<Term> step);
  static Context leaf(Term term);

  Kind kind() const noexcept;
  const OpSym& op() const;
  std::span<const Context> args() const;
  const std::optional<Rational>& scalar() const;
  const Step<Term>& guard_step() const;
  const Term& leaf_term() const;

  bool operator==(const Context& other) const;

  /// Describes the first path reaching a free variable outside a guard.
  std::optional<std::string> unguarded_path() const;
  std::set<VarId> free_vars() const;

 private:
  struct Node;
  explicit Context(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

using ContextBody = std::function<Context(const RuleInput&)>;

struct SrpsRule {
  OpSym op;
  ContextBody body;
};

/// Rational / boolean expressions over premise labels (the h_f of a
/// behavioral differential equation).
class LabelExpr {
 public:
  enum class Op { Const, Premise, Add, Sub, Mul, Neg, And, Or, Not };

  static LabelExpr constant(Label value);
  static LabelExpr premise(std::size_t arg);
  static LabelExpr binary(Op op, LabelExpr lhs, LabelExpr rhs);
  static LabelExpr unary(Op op, LabelExpr operand);

  Label eval(std::span<const Premise> args) const;
  /// Evaluates with explicit argument labels instead of premises.
  Label eval_labels(std::span<const Label> labels) const;
  std::size_t max_premise() const;  // premises needed: highest index + 1, 0 when none
  bool references_premises() const;
  std::string to_string(std::span<const std::string> names = {}) const;

 private:
  struct Node;
  explicit LabelExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// monostate marks a symbol without a rule (reported by validate_table).
using TableRule = std::variant<std::monostate, GsosRule, SrpsRule>;

/// An executable abstract GSOS rule: one rule per symbol of the signature,
/// some of which may be backed by a guarded context instead.
class RuleTable {
 public:
  RuleTable(BehaviorKind kind, SignaturePtr sig, std::vector<TableRule> rules);

  const BehaviorKind& kind() const noexcept { return kind_; }
  const SignaturePtr& signature() const noexcept { return sig_; }
  std::uint64_t id() const noexcept { return id_; }

  /// Symbol of this table's signature named `name`.
  const OpSym& symbol(std::string_view name) const { return sig_->lookup(name); }
  /// Maps a symbol of any summand into this table. Throws ForeignSymbol.
  OpSym resolve(const OpSym& op) const;

  const TableRule& rule(const OpSym& op) const;
  bool srps_backed(const OpSym& op) const;

  /// Applies the rule for `op` and embeds the conclusion into this table's
  /// signature.
  Step<Term> conclude(const OpSym& op, const RuleInput& input) const;
  /// Instantiates an srps context with its K-symbols embedded likewise.
  Context context(const OpSym& op, const RuleInput& input) const;

  std::span<const TableRule> rules() const noexcept { return rules_; }

 private:
  BehaviorKind kind_;
  SignaturePtr sig_;
  std::vector<TableRule> rules_;
  std::uint64_t id_;
};

using TablePtr = std::shared_ptr<const RuleTable>;

/// New symbols V and one rule per symbol whose conclusions range over the
/// given signature plus V.
struct RpsDef {
  SignaturePtr new_sig;
  std::vector<GsosRule> rules;
};

/// New symbols V and, per symbol, a guarded context over the given
/// signature whose guard continuations range over given plus V.
struct SrpsDef {
  SignaturePtr new_sig;
  std::vector<SrpsRule> rules;
};

/// Errors: MissingRule, DuplicateRule, KindMismatch, ArityMismatch.
TablePtr build_table(BehaviorKind kind, SignaturePtr sig, std::vector<GsosRule> rules);
TablePtr empty_table(BehaviorKind kind);

/// Combined rule n = [H ext inl . l, e] over t.sig + e.new_sig.
/// Errors: ForeignSymbol, ArityMismatch, MissingRule, DuplicateRule.
TablePtr extend_with_rps(const TablePtr& table, const RpsDef& def);

/// Errors: UnguardedPath, ForeignSymbol, MissingRule, DuplicateRule.
TablePtr register_srps(const TablePtr& table, const SrpsDef& def);

/// Adds one symbol with its rule. Errors: DuplicateRule, ForeignSymbol.
TablePtr add_rule(const TablePtr& table, GsosRule rule);

/// A rule for a fresh single-symbol signature.
GsosRule make_rule(SymbolDecl decl, Conclude conclude);
/// Same, for conclusions that mention the new symbol itself.
GsosRule make_recursive_rule(SymbolDecl decl, const std::function<Conclude(const OpSym&)>& make);

struct Violation {
  std::string symbol;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Totality, arity, port discipline and guardedness, probed on generic
/// premises. Empty report means the table is usable.
std::vector<Violation> validate_table(const RuleTable& table);

/// Sample premises used for probing rules: a handful of label combinations
/// (and, for processes, empty and non-empty transition sets).
std::vector<std::vector<Premise>> probe_premises(const BehaviorKind& kind, std::size_t arity);

}  // namespace corec

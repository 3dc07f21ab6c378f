#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "corec/behavior.hpp"
#include "corec/rules.hpp"
#include "corec/terms.hpp"

namespace corec {

/// A state of the solved coalgebra. Valid while its engine lives.
struct SolutionHandle {
  std::uint64_t engine = 0;
  std::uint32_t node = 0;

  bool operator==(const SolutionHandle&) const = default;
  auto operator<=>(const SolutionHandle&) const = default;
};

Term param_term(SolutionHandle h);

/// Right-hand side of one equation:
///  - Step<Term>: flat, X -> H M X
///  - Context: sandwiched, X -> M H M X
///  - SolutionHandle: the +C summand, a constant
///  - VarId: a variable of another (parameter) system; only meaningful as
///    the `e` argument of compose_systems.
using Rhs = std::variant<Step<Term>, Context, SolutionHandle, VarId>;

struct Equation {
  VarId var;
  Rhs rhs;
};

struct System {
  TablePtr table;
  std::vector<Equation> equations;

  const BehaviorKind& kind() const { return table->kind(); }
  const Equation* find(const VarId& var) const;
  std::vector<VarId> vars() const;
};

/// Solved variables in equation order.
class Solution {
 public:
  void add(VarId var, SolutionHandle h) { entries_.emplace_back(var, h); }
  SolutionHandle at(const VarId& var) const;
  SolutionHandle at(std::string_view name) const { return at(VarId(name)); }
  bool contains(const VarId& var) const;
  std::span<const std::pair<VarId, SolutionHandle>> entries() const noexcept { return entries_; }

 private:
  std::vector<std::pair<VarId, SolutionHandle>> entries_;
};

using Binding = std::unordered_map<VarId, SolutionHandle, std::hash<VarId>>;

/// Owns a lazily unfolded, memoized state graph. Single owner: no concurrent
/// use, but an engine may move between threads as a whole.
class Engine {
 public:
  Engine();
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  std::uint64_t id() const noexcept;

  /// Errors: ValidationFailed.
  Solution solve_system(const System& system);

  /// Errors: ArityMismatch, KindMismatch, InvalidHandle.
  SolutionHandle interpret_op(const TablePtr& table, const OpSym& op,
                              std::span<const SolutionHandle> args,
                              std::optional<Rational> scalar = {});
  /// A term over the table with params and variables bound by `binding`.
  SolutionHandle interpret(const TablePtr& table, const Term& term, const Binding& binding = {});
  /// c^{-1}: the state whose one observation is `step`.
  SolutionHandle given(const TablePtr& table, const Step<SolutionHandle>& step);

  /// Errors: InvalidHandle, RuleDiverged.
  Step<SolutionHandle> unfold(SolutionHandle h);
  ObservationTree observe(SolutionHandle h, std::size_t depth);
  const BehaviorKind& kind_of(SolutionHandle h) const;
  const TablePtr& table_of(SolutionHandle h) const;

  /// Replaces each guard by a fresh state and unfolds the surrounding
  /// context once. Errors: UnguardedPath.
  Step<SolutionHandle> elaborate_guards(const TablePtr& table, const Context& ctx,
                                        const Binding& binding);

  /// Recomputes one step from rules and right-hand sides, ignoring the
  /// engine memo; `cache` holds the recomputed steps for this pass.
  class Recompute;
  Recompute recompute();

  /// Human-readable term for a state (variables by name).
  std::string describe(SolutionHandle h) const;

  std::size_t node_count() const noexcept;
  void set_fuse(std::size_t rule_applications) noexcept;

  /// Test hook: overwrite the memoized step of a state.
  void overwrite_memo_for_testing(SolutionHandle h, const Step<SolutionHandle>& step);

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

class Engine::Recompute {
 public:
  Step<SolutionHandle> step(SolutionHandle h);
  ObservationTree observe(SolutionHandle h, std::size_t depth);
  /// Recomputes the step a right-hand side denotes, with system variables
  /// bound to `solution`.
  Step<SolutionHandle> rhs_step(const System& system, const Rhs& rhs, const Solution& solution);

 private:
  friend class Engine;
  explicit Recompute(Engine::Impl& impl) : impl_(&impl) {}
  Engine::Impl* impl_;
  std::unordered_map<std::uint32_t, Step<std::uint32_t>> cache_;
};

struct Composition {
  System combined;          // f (+) e
  System plugged;           // sol f . e
  bool law_holds = false;   // sol(f (+) e) = [sol(sol f . e), sol f] to depth
  std::vector<std::string> disagreements;
};

/// Builds f (+) e and sol f . e and compares both routes to `depth`.
/// Errors: VariableClash, ValidationFailed.
Composition compose_systems(Engine& engine, const System& f, const System& e, std::size_t depth);

}  // namespace corec

template <>
struct std::hash<corec::SolutionHandle> {
  std::size_t operator()(const corec::SolutionHandle& h) const noexcept {
    return std::hash<std::uint64_t>{}((h.engine << 32) ^ h.node);
  }
};

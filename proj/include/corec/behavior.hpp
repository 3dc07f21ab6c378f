#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "corec/error.hpp"
#include "corec/rational.hpp"

namespace corec {

enum class KindTag { Stream, Tree, Language, Process };

const char* to_string(KindTag tag) noexcept;

/// Finite action alphabet with an involutive complement and a distinguished
/// silent action that is its own complement.
class ActionSet {
 public:
  ActionSet() = default;

  /// For base names {a, b} builds a, 'a, b, 'b, tau.
  static ActionSet from_names(const std::vector<std::string>& base);
  /// Throws Error(BadActionStructure) unless complement is an involution
  /// fixing exactly `tau`.
  static ActionSet make(std::vector<std::string> names, std::vector<std::size_t> complement,
                        std::size_t tau);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t action) const { return names_.at(action); }
  std::size_t complement(std::size_t action) const { return complement_.at(action); }
  std::size_t tau() const noexcept { return tau_; }
  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const ActionSet&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> complement_;
  std::size_t tau_ = 0;
};

/// Streams and trees observe rationals, languages a bit, processes nothing.
using Label = std::variant<std::monostate, Rational, bool>;

/// Exact comparison. Throws Error(KindMismatch) when the labels come from
/// different kinds.
bool label_eq(const Label& a, const Label& b);
std::string to_string(const Label& label);

/// Stream: 0 = tail. Tree: 0 = L, 1 = R. Language: letter index.
/// Process: action index.
using Port = std::uint32_t;

/// The behavior functor: which labels and ports a one-step observation has.
class BehaviorKind {
 public:
  static BehaviorKind stream();
  static BehaviorKind tree();
  /// Throws Error(EmptyAlphabet).
  static BehaviorKind language(std::vector<std::string> alphabet);
  static BehaviorKind process(ActionSet actions);

  KindTag tag() const noexcept { return tag_; }
  bool deterministic() const noexcept { return tag_ != KindTag::Process; }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const ActionSet& actions() const noexcept { return actions_; }

  /// Fixed port count of deterministic kinds; 0 for processes.
  std::size_t port_count() const noexcept;
  std::string port_name(Port port) const;
  std::optional<Port> find_port(std::string_view name) const;

  /// The label every state of this kind must carry in shape.
  bool label_fits(const Label& label) const noexcept;
  Label zero_label() const;

  bool operator==(const BehaviorKind&) const = default;
  std::string describe() const;

 private:
  KindTag tag_ = KindTag::Stream;
  std::vector<std::string> alphabet_;
  ActionSet actions_;
};

/// One observation: a label plus port-indexed continuations.
template <typename X>
struct Step {
  Label label;
  std::vector<std::pair<Port, X>> children;

  bool operator==(const Step&) const = default;

  /// Continuation at a fixed port of a deterministic kind.
  const X& at(Port port) const {
    for (const auto& [p, x] : children) {
      if (p == port) return x;
    }
    throw Error(ErrorCode::InvalidArgument, "no continuation at port " + std::to_string(port));
  }
};

template <typename X, typename F>
auto step_map(const Step<X>& step, F&& f) -> Step<std::decay_t<decltype(f(std::declval<const X&>()))>> {
  Step<std::decay_t<decltype(f(std::declval<const X&>()))>> out;
  out.label = step.label;
  out.children.reserve(step.children.size());
  for (const auto& [port, x] : step.children) out.children.emplace_back(port, f(x));
  return out;
}

/// Process steps are sets: sort by (action, continuation) and drop exact
/// duplicates. Deterministic kinds are returned unchanged.
template <typename X>
Step<X> canonicalize_step(const BehaviorKind& kind, Step<X> step) {
  if (kind.deterministic()) return step;
  std::sort(step.children.begin(), step.children.end());
  step.children.erase(std::unique(step.children.begin(), step.children.end()),
                      step.children.end());
  return step;
}

/// Port discipline: deterministic kinds carry each fixed port exactly once
/// in order; process ports must be valid actions. Returns a description of
/// the first violation.
template <typename X>
std::optional<std::string> step_violation(const BehaviorKind& kind, const Step<X>& step) {
  if (!kind.label_fits(step.label)) return "label does not fit " + kind.describe();
  if (kind.deterministic()) {
    if (step.children.size() != kind.port_count()) return "wrong number of ports";
    for (std::size_t i = 0; i < step.children.size(); ++i) {
      if (step.children[i].first != i) return "ports out of order";
    }
    return std::nullopt;
  }
  for (const auto& child : step.children) {
    if (child.first >= kind.actions().size()) return "unknown action";
  }
  return std::nullopt;
}

/// Finite unfolding of a state; `cut` leaves carry no label.
struct ObservationTree {
  bool cut = true;
  Label label;
  std::vector<std::pair<Port, ObservationTree>> children;

  bool operator==(const ObservationTree&) const = default;

  bool is_prefix_of(const ObservationTree& other) const;
  std::size_t depth() const;
};

/// Sorts and deduplicates process children recursively so that equal sets
/// compare equal.
ObservationTree canonical_set_tree(ObservationTree tree);

/// Labels along the single path of a stream observation.
std::vector<Rational> stream_prefix(const ObservationTree& tree);

}  // namespace corec

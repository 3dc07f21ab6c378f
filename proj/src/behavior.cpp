#include "corec/behavior.hpp"

#include <map>

namespace corec {

const char* to_string(KindTag tag) noexcept {
  switch (tag) {
    case KindTag::Stream: return "stream";
    case KindTag::Tree: return "tree";
    case KindTag::Language: return "language";
    case KindTag::Process: return "process";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// ActionSet

ActionSet ActionSet::from_names(const std::vector<std::string>& base) {
  std::vector<std::string> names;
  std::vector<std::size_t> complement;
  for (const auto& name : base) {
    if (name.empty() || name == "tau" || name.front() == '\'') {
      throw Error(ErrorCode::BadActionStructure, "invalid base action '" + name + "'");
    }
    names.push_back(name);
    names.push_back("'" + name);
    complement.push_back(names.size() - 1);
    complement.push_back(names.size() - 2);
  }
  names.push_back("tau");
  complement.push_back(names.size() - 1);
  return make(std::move(names), std::move(complement), complement.size() - 1);
}

ActionSet ActionSet::make(std::vector<std::string> names, std::vector<std::size_t> complement,
                          std::size_t tau) {
  if (names.size() != complement.size() || tau >= names.size()) {
    throw Error(ErrorCode::BadActionStructure, "complement table does not match the actions");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (names[i] == names[j]) throw Error(ErrorCode::BadActionStructure, "duplicate action " + names[i]);
    }
    if (complement[i] >= names.size() || complement[complement[i]] != i) {
      throw Error(ErrorCode::BadActionStructure, "complement is not an involution at " + names[i]);
    }
    if ((complement[i] == i) != (i == tau)) {
      throw Error(ErrorCode::BadActionStructure,
                  i == tau ? "tau must be its own complement" : names[i] + " is its own complement");
    }
  }
  ActionSet set;
  set.names_ = std::move(names);
  set.complement_ = std::move(complement);
  set.tau_ = tau;
  return set;
}

std::optional<std::size_t> ActionSet::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Labels

bool label_eq(const Label& a, const Label& b) {
  if (a.index() != b.index()) {
    throw Error(ErrorCode::KindMismatch, "comparing labels of different kinds");
  }
  return a == b;
}

std::string to_string(const Label& label) {
  if (const auto* r = std::get_if<Rational>(&label)) return to_string(*r);
  if (const auto* b = std::get_if<bool>(&label)) return *b ? "1" : "0";
  return "*";
}

// ---------------------------------------------------------------------------
// BehaviorKind

BehaviorKind BehaviorKind::stream() {
  BehaviorKind k;
  k.tag_ = KindTag::Stream;
  return k;
}

BehaviorKind BehaviorKind::tree() {
  BehaviorKind k;
  k.tag_ = KindTag::Tree;
  return k;
}

BehaviorKind BehaviorKind::language(std::vector<std::string> alphabet) {
  if (alphabet.empty()) throw Error(ErrorCode::EmptyAlphabet, "a language kind needs letters");
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    for (std::size_t j = i + 1; j < alphabet.size(); ++j) {
      if (alphabet[i] == alphabet[j]) {
        throw Error(ErrorCode::InvalidArgument, "duplicate letter " + alphabet[i]);
      }
    }
  }
  BehaviorKind k;
  k.tag_ = KindTag::Language;
  k.alphabet_ = std::move(alphabet);
  return k;
}

BehaviorKind BehaviorKind::process(ActionSet actions) {
  BehaviorKind k;
  k.tag_ = KindTag::Process;
  k.actions_ = std::move(actions);
  return k;
}

std::size_t BehaviorKind::port_count() const noexcept {
  switch (tag_) {
    case KindTag::Stream: return 1;
    case KindTag::Tree: return 2;
    case KindTag::Language: return alphabet_.size();
    case KindTag::Process: return 0;
  }
  return 0;
}

std::string BehaviorKind::port_name(Port port) const {
  switch (tag_) {
    case KindTag::Stream: return "tail";
    case KindTag::Tree: return port == 0 ? "L" : "R";
    case KindTag::Language: return alphabet_.at(port);
    case KindTag::Process: return actions_.name(port);
  }
  return {};
}

std::optional<Port> BehaviorKind::find_port(std::string_view name) const {
  switch (tag_) {
    case KindTag::Stream:
      if (name == "tail") return 0;
      return std::nullopt;
    case KindTag::Tree:
      if (name == "L") return 0;
      if (name == "R") return 1;
      return std::nullopt;
    case KindTag::Language:
      for (std::size_t i = 0; i < alphabet_.size(); ++i) {
        if (alphabet_[i] == name) return static_cast<Port>(i);
      }
      return std::nullopt;
    case KindTag::Process:
      if (auto a = actions_.find(name)) return static_cast<Port>(*a);
      return std::nullopt;
  }
  return std::nullopt;
}

bool BehaviorKind::label_fits(const Label& label) const noexcept {
  switch (tag_) {
    case KindTag::Stream:
    case KindTag::Tree: return std::holds_alternative<Rational>(label);
    case KindTag::Language: return std::holds_alternative<bool>(label);
    case KindTag::Process: return std::holds_alternative<std::monostate>(label);
  }
  return false;
}

Label BehaviorKind::zero_label() const {
  switch (tag_) {
    case KindTag::Stream:
    case KindTag::Tree: return Rational(0);
    case KindTag::Language: return false;
    case KindTag::Process: return std::monostate{};
  }
  return std::monostate{};
}

std::string BehaviorKind::describe() const {
  std::string out = to_string(tag_);
  if (tag_ == KindTag::Language) {
    out += "(";
    for (std::size_t i = 0; i < alphabet_.size(); ++i) out += (i ? " " : "") + alphabet_[i];
    out += ")";
  } else if (tag_ == KindTag::Process) {
    out += "(";
    for (std::size_t i = 0; i < actions_.size(); ++i) out += (i ? " " : "") + actions_.name(i);
    out += ")";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Observation trees

bool ObservationTree::is_prefix_of(const ObservationTree& other) const {
  if (cut) return true;
  if (other.cut || label != other.label || children.size() != other.children.size()) return false;
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (children[i].first != other.children[i].first) return false;
    if (!children[i].second.is_prefix_of(other.children[i].second)) return false;
  }
  return true;
}

std::size_t ObservationTree::depth() const {
  if (cut) return 0;
  std::size_t d = 0;
  for (const auto& [port, child] : children) d = std::max(d, child.depth());
  return d + 1;
}

namespace {

// Total order on canonical trees, used to sort process children.
int compare(const ObservationTree& a, const ObservationTree& b) {
  if (a.cut != b.cut) return a.cut ? -1 : 1;
  if (a.cut) return 0;
  if (a.label.index() != b.label.index()) return a.label.index() < b.label.index() ? -1 : 1;
  if (const auto* ra = std::get_if<Rational>(&a.label)) {
    const auto& rb = std::get<Rational>(b.label);
    if (*ra != rb) return *ra < rb ? -1 : 1;
  } else if (const auto* ba = std::get_if<bool>(&a.label)) {
    if (*ba != std::get<bool>(b.label)) return *ba ? 1 : -1;
  }
  const std::size_t n = std::min(a.children.size(), b.children.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.children[i].first != b.children[i].first) return a.children[i].first < b.children[i].first ? -1 : 1;
    if (int c = compare(a.children[i].second, b.children[i].second)) return c;
  }
  if (a.children.size() != b.children.size()) return a.children.size() < b.children.size() ? -1 : 1;
  return 0;
}

}  // namespace

ObservationTree canonical_set_tree(ObservationTree tree) {
  if (tree.cut) return tree;
  for (auto& child : tree.children) child.second = canonical_set_tree(std::move(child.second));
  if (std::holds_alternative<std::monostate>(tree.label)) {
    auto less = [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first < y.first;
      return compare(x.second, y.second) < 0;
    };
    std::sort(tree.children.begin(), tree.children.end(), less);
    tree.children.erase(std::unique(tree.children.begin(), tree.children.end(),
                                    [](const auto& x, const auto& y) {
                                      return x.first == y.first && compare(x.second, y.second) == 0;
                                    }),
                        tree.children.end());
  }
  return tree;
}

std::vector<Rational> stream_prefix(const ObservationTree& tree) {
  std::vector<Rational> out;
  const ObservationTree* node = &tree;
  while (!node->cut) {
    out.push_back(std::get<Rational>(node->label));
    if (node->children.empty()) break;
    node = &node->children.front().second;
  }
  return out;
}

}  // namespace corec

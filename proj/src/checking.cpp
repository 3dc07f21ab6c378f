#include "corec/checking.hpp"

#include <deque>
#include <set>
#include <unordered_map>

#include "corec/error.hpp"

namespace corec {

namespace {

void require_same_kind(Engine& engine, SolutionHandle a, SolutionHandle b) {
  if (!(engine.kind_of(a) == engine.kind_of(b))) {
    throw Error(ErrorCode::KindMismatch, "comparing " + engine.kind_of(a).describe() + " with " +
                                             engine.kind_of(b).describe());
  }
}

struct PairKey {
  std::uint32_t a;
  std::uint32_t b;
  std::size_t depth;
  bool operator==(const PairKey&) const = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept {
    return (static_cast<std::size_t>(k.a) * 1000003u) ^ (static_cast<std::size_t>(k.b) << 20) ^ k.depth;
  }
};

// Depth-d mutual simulation with set semantics.
class ProcessBisim {
 public:
  explicit ProcessBisim(Engine& engine) : engine_(engine) {}

  bool equal(SolutionHandle p, SolutionHandle q, std::size_t d) {
    if (d == 0 || p == q) return true;
    PairKey key{std::min(p.node, q.node), std::max(p.node, q.node), d};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const Step<SolutionHandle> sp = engine_.unfold(p);
    const Step<SolutionHandle> sq = engine_.unfold(q);
    bool result = simulates(sp, sq, d) && simulates(sq, sp, d);
    memo_.emplace(key, result);
    return result;
  }

  // First transition of `sp` with no counterpart in `sq` at depth d.
  std::optional<std::pair<Port, SolutionHandle>> unmatched(const Step<SolutionHandle>& sp,
                                                          const Step<SolutionHandle>& sq, std::size_t d) {
    for (const auto& [a, p1] : sp.children) {
      bool found = false;
      for (const auto& [b, q1] : sq.children) {
        if (a == b && equal(p1, q1, d - 1)) {
          found = true;
          break;
        }
      }
      if (!found) return std::pair{a, p1};
    }
    return std::nullopt;
  }

 private:
  bool simulates(const Step<SolutionHandle>& sp, const Step<SolutionHandle>& sq, std::size_t d) {
    return !unmatched(sp, sq, d).has_value();
  }

  Engine& engine_;
  std::unordered_map<PairKey, bool, PairKeyHash> memo_;
};

std::optional<Witness> deterministic_witness(Engine& engine, SolutionHandle a, SolutionHandle b, std::size_t depth) {
  const BehaviorKind& kind = engine.kind_of(a);
  struct Item {
    SolutionHandle p, q;
    std::vector<std::string> path;
  };
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<Item> level{{a, b, {}}};
  seen.emplace(a.node, b.node);
  for (std::size_t k = 0; k < depth && !level.empty(); ++k) {
    std::vector<Item> next;
    for (const auto& item : level) {
      if (item.p == item.q) continue;
      Step<SolutionHandle> sp = engine.unfold(item.p);
      Step<SolutionHandle> sq = engine.unfold(item.q);
      if (!label_eq(sp.label, sq.label)) {
        return Witness{k, item.path, to_string(sp.label), to_string(sq.label)};
      }
      for (std::size_t i = 0; i < sp.children.size(); ++i) {
        auto pc = sp.children[i].second;
        auto qc = sq.children[i].second;
        if (seen.emplace(pc.node, qc.node).second) {
          auto path = item.path;
          path.push_back(kind.port_name(sp.children[i].first));
          next.push_back(Item{pc, qc, std::move(path)});
        }
      }
    }
    level = std::move(next);
  }
  return std::nullopt;
}

std::optional<Witness> process_witness(Engine& engine, SolutionHandle a, SolutionHandle b, std::size_t depth) {
  ProcessBisim bisim(engine);
  if (bisim.equal(a, b, depth)) return std::nullopt;
  const BehaviorKind& kind = engine.kind_of(a);
  std::size_t d = 1;
  while (bisim.equal(a, b, d)) ++d;
  // Walk down a distinguishing path while one exists at the remaining depth.
  Witness w;
  w.depth = d - 1;
  SolutionHandle p = a, q = b;
  std::size_t remaining = d;
  while (remaining > 0) {
    Step<SolutionHandle> sp = engine.unfold(p), sq = engine.unfold(q);
    auto miss = bisim.unmatched(sp, sq, remaining);
    bool left_moves = miss.has_value();
    if (!miss) miss = bisim.unmatched(sq, sp, remaining);
    if (!miss) break;
    const auto& [action, next] = *miss;
    w.path.push_back(kind.port_name(action));
    // Follow a same-action partner that fails only at the next level, if any.
    const auto& other = left_moves ? sq : sp;
    std::optional<SolutionHandle> partner;
    for (const auto& [b2, n2] : other.children) {
      if (b2 == action) {
        partner = n2;
        break;
      }
    }
    if (!partner || remaining == 1) {
      w.left = left_moves ? engine.describe(next) : "no " + kind.port_name(action) + "-step";
      w.right = left_moves ? "no matching " + kind.port_name(action) + "-step" : engine.describe(next);
      break;
    }
    p = left_moves ? next : *partner;
    q = left_moves ? *partner : next;
    --remaining;
    if (bisim.equal(p, q, remaining)) {
      w.left = left_moves ? engine.describe(next) : engine.describe(*partner);
      w.right = "no matching " + kind.port_name(action) + "-step";
      break;
    }
  }
  return w;
}

// Shallowest place where two finite observation trees differ.
std::optional<Witness> tree_difference(const ObservationTree& a, const ObservationTree& b, const BehaviorKind& kind) {
  struct Item {
    const ObservationTree* x;
    const ObservationTree* y;
    std::vector<std::string> path;
  };
  std::deque<std::pair<Item, std::size_t>> queue;
  queue.push_back({Item{&a, &b, {}}, 0});
  while (!queue.empty()) {
    auto [item, depth] = std::move(queue.front());
    queue.pop_front();
    const ObservationTree& x = *item.x;
    const ObservationTree& y = *item.y;
    if (x.cut || y.cut) {
      if (x.cut != y.cut) return Witness{depth, item.path, x.cut ? "cut" : to_string(x.label), y.cut ? "cut" : to_string(y.label)};
      continue;
    }
    if (!(x.label == y.label)) return Witness{depth, item.path, to_string(x.label), to_string(y.label)};
    if (x.children.size() != y.children.size()) {
      return Witness{depth, item.path, std::to_string(x.children.size()) + " successors",
                     std::to_string(y.children.size()) + " successors"};
    }
    for (std::size_t i = 0; i < x.children.size(); ++i) {
      if (x.children[i].first != y.children[i].first) {
        return Witness{depth, item.path, "step " + kind.port_name(x.children[i].first),
                       "step " + kind.port_name(y.children[i].first)};
      }
    }
    for (std::size_t i = 0; i < x.children.size(); ++i) {
      auto path = item.path;
      path.push_back(kind.port_name(x.children[i].first));
      queue.push_back({Item{&x.children[i].second, &y.children[i].second, std::move(path)}, depth + 1});
    }
  }
  return std::nullopt;
}

ObservationTree truncate(const ObservationTree& t, std::size_t depth) {
  if (depth == 0 || t.cut) return ObservationTree{};
  ObservationTree out;
  out.cut = false;
  out.label = t.label;
  for (const auto& [p, c] : t.children) out.children.emplace_back(p, truncate(c, depth - 1));
  return out;
}

}  // namespace

bool bounded_equal(Engine& engine, SolutionHandle a, SolutionHandle b, std::size_t depth) {
  require_same_kind(engine, a, b);
  if (engine.kind_of(a).deterministic()) return !deterministic_witness(engine, a, b, depth).has_value();
  ProcessBisim bisim(engine);
  return bisim.equal(a, b, depth);
}

CheckReport compare_report(Engine& engine, SolutionHandle a, SolutionHandle b, std::size_t depth, std::string name) {
  require_same_kind(engine, a, b);
  CheckReport report;
  report.name = std::move(name);
  report.witness = engine.kind_of(a).deterministic() ? deterministic_witness(engine, a, b, depth)
                                                     : process_witness(engine, a, b, depth);
  report.pass = !report.witness.has_value();
  report.detail = report.pass ? "equal to depth " + std::to_string(depth) : "behaviors differ";
  return report;
}

CheckReport diagram_check(Engine& engine, const System& system, const Solution& solution, std::size_t depth) {
  CheckReport report;
  report.name = "diagram";
  report.pass = true;
  const BehaviorKind& kind = system.kind();
  for (const auto& eq : system.equations) {
    const SolutionHandle h = solution.at(eq.var);
    ObservationTree memo_tree = engine.observe(h, depth);

    Engine::Recompute fresh = engine.recompute();
    ObservationTree fresh_tree;
    if (depth > 0) {
      Step<SolutionHandle> step = fresh.rhs_step(system, eq.rhs, solution);
      fresh_tree.cut = false;
      fresh_tree.label = step.label;
      for (const auto& [port, child] : step.children) {
        fresh_tree.children.emplace_back(port, fresh.observe(child, depth - 1));
      }
      if (!kind.deterministic()) fresh_tree = canonical_set_tree(std::move(fresh_tree));
    }
    if (memo_tree == fresh_tree) continue;

    // Smallest truncation depth at which the two sides already disagree.
    std::size_t d = 1;
    while (d < depth && truncate(memo_tree, d) == truncate(fresh_tree, d)) ++d;
    auto w = tree_difference(truncate(memo_tree, d), truncate(fresh_tree, d), kind);
    if (!w) w = Witness{d - 1, {}, "?", "?"};
    w->path.insert(w->path.begin(), eq.var.name());
    report.pass = false;
    report.detail = "solution of '" + eq.var.name() + "' does not match its right-hand side";
    report.witness = std::move(w);
    return report;
  }
  report.detail = "all " + std::to_string(system.equations.size()) + " equations hold to depth " + std::to_string(depth);
  return report;
}

std::string to_string(const Witness& w) {
  std::string path;
  for (const auto& p : w.path) path += (path.empty() ? "" : "/") + p;
  return "depth " + std::to_string(w.depth) + " at " + (path.empty() ? "root" : path) + ": " + w.left + " vs " +
         w.right;
}

std::string to_text(const CheckReport& report) {
  std::string out = (report.pass ? "PASS " : "FAIL ") + report.name;
  if (!report.detail.empty()) out += ": " + report.detail;
  if (report.witness) out += " (" + to_string(*report.witness) + ")";
  return out;
}

}  // namespace corec

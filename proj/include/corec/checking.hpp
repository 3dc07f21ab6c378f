#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corec/solver.hpp"

namespace corec {

/// Where two behaviors first part ways: the depth (0 = root labels) and the
/// ports taken to get there.
struct Witness {
  std::size_t depth = 0;
  std::vector<std::string> path;
  std::string left;
  std::string right;
};

struct CheckReport {
  std::string name;
  bool pass = false;
  std::string detail;
  std::optional<Witness> witness;
};

/// Depth-d equality: identical observation trees for deterministic kinds,
/// depth-d mutual simulation for processes. Errors: KindMismatch.
bool bounded_equal(Engine& engine, SolutionHandle a, SolutionHandle b, std::size_t depth);

/// Same, with a minimal-depth witness on failure.
CheckReport compare_report(Engine& engine, SolutionHandle a, SolutionHandle b, std::size_t depth,
                           std::string name = "bounded_equal");

/// Checks, per variable, that the memoized solution agrees to `depth` with
/// a recomputation of its right-hand side.
CheckReport diagram_check(Engine& engine, const System& system, const Solution& solution,
                          std::size_t depth);

/// Registered suites: modularity, language-laws, instances, invariants.
/// Errors: UnknownSuite.
std::vector<CheckReport> run_suite(std::string_view name);
std::vector<std::string> suite_names();

std::string to_text(const CheckReport& report);
std::string to_string(const Witness& witness);

}  // namespace corec

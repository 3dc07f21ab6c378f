#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corec/rules.hpp"
#include "corec/solver.hpp"

namespace corec::instances {

// Streams --------------------------------------------------------------------
// const[r]/0, plus/2, zip/2, mult[r]/1, register[r]/1, then shuffle/2 and
// conv/2 added by two rps extensions in that order.

TablePtr stream_base_table();
RpsDef shuffle_rps(const TablePtr& given);
RpsDef conv_rps(const TablePtr& given);
TablePtr stream_table();

/// The stream p0 p1 ... (q0 q1 ...)^omega; an empty period continues with
/// zeros.
SolutionHandle eventually_periodic(Engine& engine, const TablePtr& table, const std::vector<Rational>& prefix,
                                   const std::vector<Rational>& period);
std::vector<Rational> stream_take(Engine& engine, SolutionHandle h, std::size_t n);

// Trees ----------------------------------------------------------------------

inline Rational default_pi() { return Rational(355, 113); }
/// const[r]/0, plus/2, pi/0.
TablePtr tree_table(const Rational& pi = default_pi());

// Languages ------------------------------------------------------------------
// Stage 0: empty, eps, letter_<c>.  Stage 1: union, inter, compl.
// Stage 2: concat.  Stage 3: star.  Stage 4: prefix_<c>, cinv_0, cinv_1
// (the last two take one argument per letter and replay it as derivative).

std::vector<TablePtr> language_tower(const std::vector<std::string>& alphabet);
TablePtr language_table(const std::vector<std::string>& alphabet);

bool member(Engine& engine, SolutionHandle h, std::span<const Port> word);
/// Splits a word into letters: one character per letter when every letter
/// is a single character, otherwise whitespace-separated. Errors:
/// InvalidArgument on an unknown letter.
std::vector<Port> word_ports(const BehaviorKind& kind, std::string_view word);

// Processes ------------------------------------------------------------------
// prefix_<action>/1, sum_0 .. sum_6, par/2, seq/2, and alt/2 via a guarded
// (sandwiched) rps.

constexpr std::size_t kPreinstalledSums = 6;

TablePtr ccs_table(const ActionSet& actions);

/// Adds sum_n when missing.
std::pair<TablePtr, OpSym> with_sum(const TablePtr& table, std::size_t n);
/// mapping[a] is the image of action a; must fix tau and commute with
/// complement. Adds a fresh relabel_<k>.
std::pair<TablePtr, OpSym> with_relabel(const TablePtr& table, std::vector<std::size_t> mapping);
/// Adds a fresh restrict_<k> hiding the given actions and their complements.
std::pair<TablePtr, OpSym> with_restrict(const TablePtr& table, std::vector<std::size_t> hidden);

}  // namespace corec::instances

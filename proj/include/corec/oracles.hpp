#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corec/behavior.hpp"
#include "corec/frontends.hpp"
#include "corec/rational.hpp"

// Brute-force reference computations. None of them touches rule tables or
// the engine.
namespace corec::oracles {

/// First n entries of p0 p1 ... (q0 q1 ...)^omega, zeros for an empty period.
std::vector<Rational> expand(const StreamLiteral& stream, std::size_t n);

/// (s (x) t)_n = sum_k C(n,k) s_k t_{n-k}. Inputs need at least n entries.
std::vector<Rational> binomial_shuffle(std::span<const Rational> s, std::span<const Rational> t, std::size_t n);
/// (s x t)_n = sum_k s_k t_{n-k}.
std::vector<Rational> cauchy_convolution(std::span<const Rational> s, std::span<const Rational> t, std::size_t n);
/// Parity of the number of ones in the binary expansion of n.
int thue_morse(std::uint64_t n);
/// Index recurrences of the sandwiched pair u = zip(0.t, 1.u),
/// t = zip(1.u, 0.t); returns (u, t).
std::pair<std::vector<int>, std::vector<int>> sandwiched_zip_pair(std::size_t n);
/// Hand iteration of the flat pair t = 1.zip(u, t), u = 0.zip(t, u);
/// returns (t, u).
std::pair<std::vector<int>, std::vector<int>> flat_zip_pair(std::size_t n);
/// f_{2n} = sigma_n, f_{2n+1} = f_n. sigma needs ceil(n/2) entries.
std::vector<Rational> zip_fixpoint(std::span<const Rational> sigma, std::size_t n);

/// Language expressions over letters 0..k-1, read set-theoretically.
struct LangTerm {
  enum class Op { Empty, Eps, Letter, Union, Inter, Compl, Concat, Star, Prefix, Cinv };
  Op op = Op::Empty;
  std::size_t letter = 0;  // Letter, Prefix
  bool accept = false;     // Cinv: whether the empty word is in
  std::vector<std::shared_ptr<const LangTerm>> kids;
};
using LangPtr = std::shared_ptr<const LangTerm>;

LangPtr lang(LangTerm::Op op, std::vector<LangPtr> kids = {}, std::size_t letter = 0, bool accept = false);
bool lang_member(const LangTerm& term, std::span<const std::size_t> word);
/// All words over k letters of length at most n, shortest first.
std::vector<std::vector<std::size_t>> all_words(std::size_t letters, std::size_t max_length);

/// Whether the start symbol derives the word (terminal names).
bool gnf_derives(const GnfFile& grammar, std::span<const std::string> word);

struct SosTransition {
  std::string action;
  Agent next;
};

/// One-step transitions by the structural rules, agents unfolded through
/// their definitions.
std::vector<SosTransition> sos_step(const Agent& agent, const CcsFile& defs);
/// Canonical observation tree of depth `depth`.
ObservationTree sos_tree(const Agent& agent, const CcsFile& defs, const ActionSet& actions, std::size_t depth);

std::vector<std::string> oracle_names();
/// Text interface over the oracles above. Errors: UnknownOracle,
/// InvalidArgument.
std::string oracle_eval(std::string_view name, const std::vector<std::string>& inputs);

}  // namespace corec::oracles

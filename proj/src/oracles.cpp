#include "corec/oracles.hpp"

#include <map>
#include <sstream>
#include <tuple>

#include "corec/error.hpp"
#include "lex.hpp"

namespace corec::oracles {

std::vector<Rational> expand(const StreamLiteral& stream, std::size_t n) {
  std::vector<Rational> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < stream.prefix.size()) {
      out.push_back(stream.prefix[i]);
    } else if (stream.period.empty()) {
      out.emplace_back(0);
    } else {
      out.push_back(stream.period[(i - stream.prefix.size()) % stream.period.size()]);
    }
  }
  return out;
}

std::vector<Rational> binomial_shuffle(std::span<const Rational> s, std::span<const Rational> t, std::size_t n) {
  std::vector<Rational> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    mpz_class binom = 1;
    Rational acc = 0;
    for (std::size_t k = 0; k <= m; ++k) {
      acc += Rational(binom) * s[k] * t[m - k];
      binom = binom * (m - k) / (k + 1);
    }
    out[m] = acc;
  }
  return out;
}

std::vector<Rational> cauchy_convolution(std::span<const Rational> s, std::span<const Rational> t, std::size_t n) {
  std::vector<Rational> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    Rational acc = 0;
    for (std::size_t k = 0; k <= m; ++k) acc += s[k] * t[m - k];
    out[m] = acc;
  }
  return out;
}

int thue_morse(std::uint64_t n) {
  int parity = 0;
  for (; n != 0; n >>= 1) parity ^= static_cast<int>(n & 1u);
  return parity;
}

std::pair<std::vector<int>, std::vector<int>> sandwiched_zip_pair(std::size_t n) {
  // zip(a, b)_{2k} = a_k, zip(a, b)_{2k+1} = b_k, (r.x)_0 = r, (r.x)_{k+1} = x_k.
  std::vector<int> u(n), t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = i / 2;
    if (i % 2 == 0) {
      u[i] = k == 0 ? 0 : t[k - 1];
      t[i] = k == 0 ? 1 : u[k - 1];
    } else {
      u[i] = k == 0 ? 1 : u[k - 1];
      t[i] = k == 0 ? 0 : t[k - 1];
    }
  }
  return {u, t};
}

std::pair<std::vector<int>, std::vector<int>> flat_zip_pair(std::size_t n) {
  std::vector<int> t(n), u(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      t[0] = 1;
      u[0] = 0;
      continue;
    }
    const std::size_t k = (i - 1) / 2;
    t[i] = (i - 1) % 2 == 0 ? u[k] : t[k];
    u[i] = (i - 1) % 2 == 0 ? t[k] : u[k];
  }
  return {t, u};
}

std::vector<Rational> zip_fixpoint(std::span<const Rational> sigma, std::size_t n) {
  std::vector<Rational> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = i % 2 == 0 ? sigma[i / 2] : f[i / 2];
  return f;
}

LangPtr lang(LangTerm::Op op, std::vector<LangPtr> kids, std::size_t letter, bool accept) {
  auto t = std::make_shared<LangTerm>();
  t->op = op;
  t->kids = std::move(kids);
  t->letter = letter;
  t->accept = accept;
  return t;
}

bool lang_member(const LangTerm& t, std::span<const std::size_t> w) {
  using Op = LangTerm::Op;
  switch (t.op) {
    case Op::Empty: return false;
    case Op::Eps: return w.empty();
    case Op::Letter: return w.size() == 1 && w[0] == t.letter;
    case Op::Union: return lang_member(*t.kids[0], w) || lang_member(*t.kids[1], w);
    case Op::Inter: return lang_member(*t.kids[0], w) && lang_member(*t.kids[1], w);
    case Op::Compl: return !lang_member(*t.kids[0], w);
    case Op::Concat:
      for (std::size_t k = 0; k <= w.size(); ++k) {
        if (lang_member(*t.kids[0], w.first(k)) && lang_member(*t.kids[1], w.subspan(k))) return true;
      }
      return false;
    case Op::Star:
      if (w.empty()) return true;
      for (std::size_t k = 1; k <= w.size(); ++k) {
        if (lang_member(*t.kids[0], w.first(k)) && lang_member(t, w.subspan(k))) return true;
      }
      return false;
    case Op::Prefix: return !w.empty() && w[0] == t.letter && lang_member(*t.kids[0], w.subspan(1));
    case Op::Cinv: return w.empty() ? t.accept : lang_member(*t.kids[w[0]], w.subspan(1));
  }
  return false;
}

std::vector<std::vector<std::size_t>> all_words(std::size_t letters, std::size_t max_length) {
  std::vector<std::vector<std::size_t>> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_length; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t a = 0; a < letters; ++a) {
        auto w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    }
    begin = end;
  }
  return out;
}

namespace {

// Memoized derivation search: can the nonterminal sequence rest[k..] derive
// word[i..j)? Every nonterminal yields at least one letter in this form.
class Derivations {
 public:
  Derivations(const GnfFile& g, std::span<const std::string> w) : g_(g), w_(w) {}

  bool derives(const std::string& n, std::size_t i, std::size_t j) {
    auto key = std::make_tuple(n, i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    memo_[key] = false;
    bool ok = false;
    if (i < j) {
      for (const auto& p : g_.productions) {
        if (p.lhs != n || p.terminal != w_[i]) continue;
        if (sequence(p.rest, 0, i + 1, j)) {
          ok = true;
          break;
        }
      }
    }
    memo_[key] = ok;
    return ok;
  }

 private:
  bool sequence(const std::vector<std::string>& rest, std::size_t k, std::size_t i, std::size_t j) {
    if (k == rest.size()) return i == j;
    if (j - i < rest.size() - k) return false;
    for (std::size_t m = i + 1; m <= j; ++m) {
      if (derives(rest[k], i, m) && sequence(rest, k + 1, m, j)) return true;
    }
    return false;
  }

  const GnfFile& g_;
  std::span<const std::string> w_;
  std::map<std::tuple<std::string, std::size_t, std::size_t>, bool> memo_;
};

std::string complement_name(const std::string& a) {
  if (a == "tau") return a;
  return a.rfind('\'', 0) == 0 ? a.substr(1) : "'" + a;
}

std::vector<SosTransition> step_bounded(const Agent& a, const CcsFile& defs, std::size_t fuel);

std::vector<SosTransition> alt_step(const Agent& a, const CcsFile& defs, std::size_t fuel) {
  const Agent& p = a.kids[0];
  const Agent& q = a.kids[1];
  auto s1 = step_bounded(p, defs, fuel);
  auto s2 = step_bounded(q, defs, fuel);
  std::vector<SosTransition> out;
  if (!s2.empty()) {
    if (s1.empty()) {
      for (auto& t : s2) out.push_back({t.action, Agent::binary(Agent::Kind::Seq, std::move(t.next), a)});
      return out;
    }
    std::vector<Agent> prefixes;
    for (auto& t : s2) {
      prefixes.push_back(Agent::prefix(t.action, Agent::binary(Agent::Kind::Seq, std::move(t.next), a)));
    }
    Agent second = prefixes.size() == 1 ? std::move(prefixes[0]) : Agent::sum(std::move(prefixes));
    for (auto& t : s1) out.push_back({t.action, Agent::binary(Agent::Kind::Seq, std::move(t.next), second)});
    return out;
  }
  const Agent swapped = Agent::binary(Agent::Kind::Alt, q, p);
  for (auto& t : s1) out.push_back({t.action, Agent::binary(Agent::Kind::Seq, std::move(t.next), swapped)});
  return out;
}

std::vector<SosTransition> step_bounded(const Agent& a, const CcsFile& defs, std::size_t fuel) {
  if (fuel == 0) throw Error(ErrorCode::RuleDiverged, "unguarded recursion in agent definitions");
  std::vector<SosTransition> out;
  switch (a.kind) {
    case Agent::Kind::Nil:
      break;
    case Agent::Kind::Var: {
      const Agent* body = defs.find(a.name);
      if (!body) throw Error(ErrorCode::UnknownSymbol, "undefined agent '" + a.name + "'");
      return step_bounded(*body, defs, fuel - 1);
    }
    case Agent::Kind::Prefix:
      out.push_back({a.name, a.kids[0]});
      break;
    case Agent::Kind::Sum:
      for (const auto& k : a.kids) {
        auto ts = step_bounded(k, defs, fuel - 1);
        out.insert(out.end(), ts.begin(), ts.end());
      }
      break;
    case Agent::Kind::Par: {
      const Agent& p = a.kids[0];
      const Agent& q = a.kids[1];
      auto tp = step_bounded(p, defs, fuel - 1);
      auto tq = step_bounded(q, defs, fuel - 1);
      for (const auto& t : tp) out.push_back({t.action, Agent::binary(Agent::Kind::Par, t.next, q)});
      for (const auto& t : tq) out.push_back({t.action, Agent::binary(Agent::Kind::Par, p, t.next)});
      for (const auto& t : tp) {
        if (t.action == "tau") continue;
        for (const auto& u : tq) {
          if (u.action == complement_name(t.action)) {
            out.push_back({"tau", Agent::binary(Agent::Kind::Par, t.next, u.next)});
          }
        }
      }
      break;
    }
    case Agent::Kind::Seq: {
      auto tp = step_bounded(a.kids[0], defs, fuel - 1);
      if (tp.empty()) return step_bounded(a.kids[1], defs, fuel - 1);
      for (auto& t : tp) out.push_back({t.action, Agent::binary(Agent::Kind::Seq, std::move(t.next), a.kids[1])});
      break;
    }
    case Agent::Kind::Alt:
      return alt_step(a, defs, fuel - 1);
    case Agent::Kind::Relabel: {
      for (auto& t : step_bounded(a.kids[0], defs, fuel - 1)) {
        std::string action = t.action;
        for (const auto& [to, from] : a.relabel) {
          if (t.action == from) action = to;
          if (t.action == complement_name(from)) action = complement_name(to);
        }
        out.push_back({action, Agent::relabeled(std::move(t.next), a.relabel)});
      }
      break;
    }
    case Agent::Kind::Restrict: {
      for (auto& t : step_bounded(a.kids[0], defs, fuel - 1)) {
        bool hidden = false;
        for (const auto& h : a.hidden) hidden = hidden || t.action == h || t.action == complement_name(h);
        if (!hidden) out.push_back({t.action, Agent::restricted(std::move(t.next), a.hidden)});
      }
      break;
    }
  }
  return out;
}

ObservationTree tree_of(const Agent& a, const CcsFile& defs, const ActionSet& actions, std::size_t depth) {
  ObservationTree t;
  if (depth == 0) return t;
  t.cut = false;
  t.label = std::monostate{};
  for (const auto& s : sos_step(a, defs)) {
    auto port = actions.find(s.action);
    if (!port) throw Error(ErrorCode::UnknownSymbol, "unknown action '" + s.action + "'");
    t.children.emplace_back(static_cast<Port>(*port), tree_of(s.next, defs, actions, depth - 1));
  }
  return t;
}

std::vector<std::string> split_word(const std::vector<std::string>& terminals, const std::string& word) {
  bool single = true;
  for (const auto& t : terminals) single = single && t.size() == 1;
  std::vector<std::string> out;
  if (single) {
    for (char c : word) {
      if (!std::isspace(static_cast<unsigned char>(c))) out.emplace_back(1, c);
    }
  } else {
    std::istringstream in(word);
    for (std::string s; in >> s;) out.push_back(s);
  }
  return out;
}

std::string join(const std::vector<Rational>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : " ") + to_string(x);
  return out;
}

std::size_t count_arg(const std::string& text) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos == text.size()) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "expected a count, got '" + text + "'");
}

// name(args) over the language operation names of the engine's table.
LangPtr parse_lang(lex::Cursor& cur, const std::vector<std::string>& alphabet) {
  using Op = LangTerm::Op;
  const std::string name = cur.ident("language operation");
  std::vector<LangPtr> kids;
  if (cur.accept("(")) {
    do {
      kids.push_back(parse_lang(cur, alphabet));
    } while (cur.accept(","));
    cur.expect(")");
  }
  auto letter = [&](const std::string& stem) -> std::optional<std::size_t> {
    if (name.rfind(stem, 0) != 0) return std::nullopt;
    const std::string c = name.substr(stem.size());
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      if (alphabet[i] == c) return i;
    }
    return std::nullopt;
  };
  auto need = [&](std::size_t n) {
    if (kids.size() != n) cur.fail("'" + name + "' takes " + std::to_string(n) + " argument(s)");
  };
  if (name == "empty") return need(0), lang(Op::Empty);
  if (name == "eps") return need(0), lang(Op::Eps);
  if (auto c = letter("letter_")) return need(0), lang(Op::Letter, {}, *c);
  if (name == "union") return need(2), lang(Op::Union, kids);
  if (name == "inter") return need(2), lang(Op::Inter, kids);
  if (name == "compl") return need(1), lang(Op::Compl, kids);
  if (name == "concat") return need(2), lang(Op::Concat, kids);
  if (name == "star") return need(1), lang(Op::Star, kids);
  if (auto c = letter("prefix_")) return need(1), lang(Op::Prefix, kids, *c);
  if (name == "cinv_0" || name == "cinv_1") return need(alphabet.size()), lang(Op::Cinv, kids, 0, name == "cinv_1");
  throw Error(ErrorCode::UnknownSymbol, "unknown language operation '" + name + "'");
}

void arity(std::string_view name, const std::vector<std::string>& inputs, std::size_t n) {
  if (inputs.size() != n) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(name) + " takes " + std::to_string(n) + " input(s), got " + std::to_string(inputs.size()));
  }
}

}  // namespace

bool gnf_derives(const GnfFile& grammar, std::span<const std::string> word) {
  Derivations d(grammar, word);
  return d.derives(grammar.start, 0, word.size());
}

std::vector<SosTransition> sos_step(const Agent& agent, const CcsFile& defs) {
  return step_bounded(agent, defs, 10000);
}

ObservationTree sos_tree(const Agent& agent, const CcsFile& defs, const ActionSet& actions, std::size_t depth) {
  return canonical_set_tree(tree_of(agent, defs, actions, depth));
}

std::vector<std::string> oracle_names() {
  return {"binomial_shuffle", "cauchy_convolution", "thue_morse",      "sandwiched_zip_pair", "flat_zip_pair",
          "zip_fixpoint",     "word_membership",    "gnf_derivation", "ccs_sos"};
}

std::string oracle_eval(std::string_view name, const std::vector<std::string>& inputs) {
  if (name == "thue_morse") {
    arity(name, inputs, 1);
    std::string out;
    const std::size_t n = count_arg(inputs[0]);
    for (std::size_t i = 0; i < n; ++i) out += (i ? " " : "") + std::to_string(thue_morse(i));
    return out;
  }
  if (name == "sandwiched_zip_pair" || name == "flat_zip_pair") {
    arity(name, inputs, 1);
    const std::size_t n = count_arg(inputs[0]);
    auto [a, b] = name == "flat_zip_pair" ? flat_zip_pair(n) : sandwiched_zip_pair(n);
    std::string out;
    for (int x : a) out += std::to_string(x);
    out += " ";
    for (int x : b) out += std::to_string(x);
    return out;
  }
  if (name == "binomial_shuffle" || name == "cauchy_convolution") {
    arity(name, inputs, 3);
    const std::size_t n = count_arg(inputs[2]);
    auto s = expand(parse_stream_literal(inputs[0]), n);
    auto t = expand(parse_stream_literal(inputs[1]), n);
    return join(name == "binomial_shuffle" ? binomial_shuffle(s, t, n) : cauchy_convolution(s, t, n));
  }
  if (name == "zip_fixpoint") {
    arity(name, inputs, 2);
    const std::size_t n = count_arg(inputs[1]);
    return join(zip_fixpoint(expand(parse_stream_literal(inputs[0]), n / 2 + 1), n));
  }
  if (name == "word_membership") {
    // alphabet (space separated), term, word
    arity(name, inputs, 3);
    std::vector<std::string> alphabet;
    std::istringstream in(inputs[0]);
    for (std::string s; in >> s;) alphabet.push_back(s);
    lex::Cursor cur(lex::tokenize_line(inputs[1], 1), 1);
    LangPtr term = parse_lang(cur, alphabet);
    cur.expect_end();
    std::vector<std::size_t> word;
    for (const auto& letter : split_word(alphabet, inputs[2])) {
      auto it = std::find(alphabet.begin(), alphabet.end(), letter);
      if (it == alphabet.end()) throw Error(ErrorCode::InvalidArgument, "'" + letter + "' is not a letter");
      word.push_back(static_cast<std::size_t>(it - alphabet.begin()));
    }
    return lang_member(*term, word) ? "true" : "false";
  }
  if (name == "gnf_derivation") {
    arity(name, inputs, 2);
    GnfFile g = parse_gnf(inputs[0]);
    auto word = split_word(g.terminals, inputs[1]);
    return gnf_derives(g, word) ? "true" : "false";
  }
  if (name == "ccs_sos") {
    // file, agent, depth
    arity(name, inputs, 3);
    CcsFile file = parse_ccs(inputs[0]);
    Agent a = parse_agent(inputs[1], file);
    const ActionSet actions = ccs_actions(file);
    return print_process_tree(sos_tree(a, file, actions, count_arg(inputs[2])), actions);
  }
  throw Error(ErrorCode::UnknownOracle, "no oracle named '" + std::string(name) + "'");
}

}  // namespace corec::oracles

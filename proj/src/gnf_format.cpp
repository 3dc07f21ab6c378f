#include <set>

#include "corec/frontends.hpp"
#include "corec/instances.hpp"
#include "lex.hpp"

namespace corec {

namespace {

using lex::Cursor;
using lex::Token;

bool contains(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

std::vector<std::string> name_list(Cursor& cur, std::set<std::string>& seen) {
  std::vector<std::string> out;
  while (!cur.at_end()) {
    const Token t = cur.peek();
    std::string name = cur.ident("symbol name");
    if (!seen.insert(name).second) cur.fail_at(t, "'" + name + "' declared twice");
    out.push_back(std::move(name));
  }
  return out;
}

std::string production_text(const GnfProduction& p) {
  std::string out = p.lhs + " -> " + p.terminal;
  for (const auto& n : p.rest) out += " " + n;
  return out;
}

}  // namespace

GnfFile parse_gnf(std::string_view text) {
  GnfFile g;
  std::set<std::string> declared;
  bool have_terminals = false, have_nonterminals = false, have_start = false;
  for (const auto& [line_no, line] : lex::logical_lines(text)) {
    Cursor cur(lex::tokenize_line(line, line_no), line_no);
    const Token head = cur.peek();
    if (head.kind == Token::Kind::Ident && !cur.is("->", 1)) {
      const std::string word = cur.ident();
      if (word == "terminals") {
        if (have_terminals) cur.fail_at(head, "terminals declared twice");
        have_terminals = true;
        g.terminals = name_list(cur, declared);
        if (g.terminals.empty()) cur.fail("at least one terminal is needed");
      } else if (word == "nonterminals") {
        if (have_nonterminals) cur.fail_at(head, "nonterminals declared twice");
        have_nonterminals = true;
        g.nonterminals = name_list(cur, declared);
      } else if (word == "start") {
        if (have_start) cur.fail_at(head, "start declared twice");
        have_start = true;
        g.start = cur.ident("start symbol");
        cur.expect_end();
      } else {
        cur.fail_at(head, "expected terminals, nonterminals, start or a production");
      }
      continue;
    }
    if (!have_terminals || !have_nonterminals) cur.fail("declare terminals and nonterminals before productions");
    const Token lt = cur.peek();
    const std::string lhs = cur.ident("nonterminal");
    if (!contains(g.nonterminals, lhs)) {
      if (contains(g.terminals, lhs)) {
        throw Error(ErrorCode::NotGnf, std::to_string(line_no) + ": left-hand side '" + lhs + "' is a terminal");
      }
      throw Error(ErrorCode::UnknownSymbol, std::to_string(lt.line) + ":" + std::to_string(lt.col) +
                                                ": unknown nonterminal '" + lhs + "'");
    }
    cur.expect("->");
    do {
      std::vector<Token> symbols;
      while (!cur.at_end() && !cur.is("|")) {
        if (cur.peek().kind != Token::Kind::Ident) cur.fail("expected a grammar symbol");
        symbols.push_back(cur.next());
      }
      std::string shown = lhs + " ->";
      for (const auto& s : symbols) shown += " " + s.text;
      for (const auto& s : symbols) {
        if (!contains(g.terminals, s.text) && !contains(g.nonterminals, s.text)) {
          throw Error(ErrorCode::UnknownSymbol, std::to_string(s.line) + ":" + std::to_string(s.col) +
                                                    ": unknown symbol '" + s.text + "'");
        }
      }
      if (symbols.empty()) throw Error(ErrorCode::NotGnf, shown + ": empty right-hand side");
      if (!contains(g.terminals, symbols[0].text)) {
        throw Error(ErrorCode::NotGnf, shown + ": must start with a terminal");
      }
      GnfProduction p{lhs, symbols[0].text, {}};
      for (std::size_t i = 1; i < symbols.size(); ++i) {
        if (!contains(g.nonterminals, symbols[i].text)) {
          throw Error(ErrorCode::NotGnf, shown + ": only nonterminals may follow the terminal");
        }
        p.rest.push_back(symbols[i].text);
      }
      g.productions.push_back(std::move(p));
    } while (cur.accept("|"));
  }
  if (!have_terminals) throw SyntaxError(1, 1, "missing 'terminals' line");
  if (!have_nonterminals) throw SyntaxError(1, 1, "missing 'nonterminals' line");
  if (!have_start) {
    if (g.nonterminals.empty()) throw SyntaxError(1, 1, "missing 'start' line");
    g.start = g.nonterminals.front();
  }
  if (!contains(g.nonterminals, g.start)) throw Error(ErrorCode::UnknownSymbol, "start symbol '" + g.start + "' is not a nonterminal");
  return g;
}

std::string print_gnf(const GnfFile& g) {
  std::string out = "terminals";
  for (const auto& t : g.terminals) out += " " + t;
  out += "\nnonterminals";
  for (const auto& n : g.nonterminals) out += " " + n;
  out += "\nstart " + g.start + "\n";
  for (const auto& n : g.nonterminals) {
    std::string line;
    for (const auto& p : g.productions) {
      if (p.lhs != n) continue;
      std::string alt = production_text(p).substr(n.size() + 4);
      line += line.empty() ? n + " -> " + alt : " | " + alt;
    }
    if (!line.empty()) out += line + "\n";
  }
  return out;
}

System compile_gnf(const GnfFile& g) {
  for (const auto& p : g.productions) {
    if (!contains(g.nonterminals, p.lhs) || !contains(g.terminals, p.terminal)) {
      throw Error(ErrorCode::NotGnf, production_text(p) + ": not of the form n -> a w");
    }
    for (const auto& n : p.rest) {
      if (!contains(g.nonterminals, n)) throw Error(ErrorCode::NotGnf, production_text(p) + ": '" + n + "' is not a nonterminal");
    }
  }
  System sys;
  sys.table = instances::language_table(g.terminals);
  const BehaviorKind& kind = sys.table->kind();
  const OpSym empty = sys.table->symbol("empty");
  const OpSym eps = sys.table->symbol("eps");
  const OpSym concat = sys.table->symbol("concat");
  const OpSym uni = sys.table->symbol("union");

  // Start symbol first, then the others in declaration order.
  std::vector<std::string> order{g.start};
  for (const auto& n : g.nonterminals) {
    if (n != g.start) order.push_back(n);
  }
  for (const auto& n : order) {
    std::optional<Context> rhs;
    for (const auto& p : g.productions) {
      if (p.lhs != n) continue;
      // a . (n1 . n2 . ... . nk), or a . eps when w is empty.
      Term cont = mk_app(eps, {});
      if (!p.rest.empty()) {
        cont = mk_var(p.rest.back());
        for (std::size_t i = p.rest.size() - 1; i-- > 0;) cont = mk_app(concat, {mk_var(p.rest[i]), cont});
      }
      Step<Term> s;
      s.label = false;
      const Port a = *kind.find_port(p.terminal);
      for (Port q = 0; q < kind.port_count(); ++q) s.children.emplace_back(q, q == a ? cont : mk_app(empty, {}));
      Context guard = Context::guard(std::move(s));
      rhs = rhs ? Context::app(uni, {*rhs, guard}) : guard;
    }
    sys.equations.push_back(Equation{VarId(n), rhs ? *rhs : Context::leaf(mk_app(empty, {}))});
  }
  return sys;
}

}  // namespace corec

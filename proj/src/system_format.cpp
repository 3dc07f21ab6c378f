#include <map>
#include <memory>
#include <set>

#include "corec/frontends.hpp"
#include "corec/instances.hpp"
#include "lex.hpp"

namespace corec {

namespace {

using lex::Cursor;
using lex::Token;

struct PExpr {
  enum class Kind { Guard, App, Num, Ident };
  Kind kind = Kind::Num;
  Token where;
  std::string name;
  std::optional<Rational> scalar;  // App index or Num value
  Label label;                     // Guard
  std::vector<std::pair<Port, PExpr>> ports;
  std::vector<PExpr> args;
};

struct Header {
  BehaviorKind kind = BehaviorKind::stream();
  TablePtr table;
};

class ExprParser {
 public:
  ExprParser(Cursor& cur, const BehaviorKind& kind) : cur_(cur), kind_(kind) {}

  PExpr expr() {
    const Token& t = cur_.peek();
    // r . t   (stream)   |   a . t   (language)
    if (kind_.tag() == KindTag::Stream && (t.kind == Token::Kind::Number || cur_.is("-")) && dotted_number()) {
      PExpr g;
      g.kind = PExpr::Kind::Guard;
      g.where = t;
      g.label = cur_.rational();
      cur_.expect(".");
      g.ports.emplace_back(0, expr());
      return g;
    }
    if (kind_.tag() == KindTag::Language && t.kind == Token::Kind::Ident && cur_.is(".", 1)) {
      auto port = kind_.find_port(t.text);
      if (!port) cur_.fail_at(t, "'" + t.text + "' is not a letter");
      PExpr g;
      g.kind = PExpr::Kind::Guard;
      g.where = cur_.next();
      cur_.expect(".");
      g.label = false;
      g.ports.emplace_back(*port, expr());
      return g;
    }
    if (kind_.tag() == KindTag::Tree && t.kind == Token::Kind::Number && cur_.is(".", 1)) {
      cur_.fail_at(t, "tree guards need both ports: <r; L: t, R: u>");
    }
    if (cur_.is("<")) return generic_guard();
    return atom();
  }

 private:
  bool dotted_number() const {
    std::size_t k = cur_.is("-") ? 1 : 0;
    return cur_.peek(k).kind == Token::Kind::Number && cur_.is(".", k + 1);
  }

  PExpr generic_guard() {
    PExpr g;
    g.kind = PExpr::Kind::Guard;
    g.where = cur_.peek();
    cur_.expect("<");
    g.label = label_literal();
    std::set<Port> seen;
    if (cur_.accept(";")) {
      do {
        const Token pt = cur_.peek();
        const std::string pname = cur_.ident("port name");
        auto port = kind_.find_port(pname);
        if (!port) cur_.fail_at(pt, "unknown port '" + pname + "'");
        if (!seen.insert(*port).second) cur_.fail_at(pt, "port '" + pname + "' given twice");
        cur_.expect(":");
        g.ports.emplace_back(*port, expr());
      } while (cur_.accept(","));
    }
    cur_.expect(">");
    if (kind_.tag() != KindTag::Language && seen.size() != kind_.port_count()) {
      cur_.fail_at(g.where, "guard must give every port");
    }
    std::sort(g.ports.begin(), g.ports.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return g;
  }

  Label label_literal() {
    if (kind_.tag() == KindTag::Language) {
      const Token t = cur_.next();
      if (t.text == "1" || t.text == "true") return true;
      if (t.text == "0" || t.text == "false") return false;
      cur_.fail_at(t, "language labels are 0 or 1");
    }
    return cur_.rational();
  }

  PExpr atom() {
    const Token t = cur_.peek();
    if (cur_.accept("(")) {
      PExpr e = expr();
      cur_.expect(")");
      return e;
    }
    if (t.kind == Token::Kind::Number || cur_.is("-")) {
      PExpr n;
      n.kind = PExpr::Kind::Num;
      n.where = t;
      n.scalar = cur_.rational();
      return n;
    }
    if (t.kind != Token::Kind::Ident) cur_.fail("expected a term");
    PExpr e;
    e.where = t;
    e.name = cur_.next().text;
    e.kind = PExpr::Kind::Ident;
    if (cur_.accept("[")) {
      e.kind = PExpr::Kind::App;
      e.scalar = cur_.rational();
      cur_.expect("]");
    }
    if (cur_.accept("(")) {
      e.kind = PExpr::Kind::App;
      if (!cur_.is(")")) {
        do {
          e.args.push_back(expr());
        } while (cur_.accept(","));
      }
      cur_.expect(")");
    }
    return e;
  }

  Cursor& cur_;
  const BehaviorKind& kind_;
};

class Compiler {
 public:
  Compiler(const TablePtr& table, std::set<std::string> vars) : table_(table), vars_(std::move(vars)) {}

  // Term inside a guard continuation.
  Term term(const PExpr& e) {
    switch (e.kind) {
      case PExpr::Kind::Num:
        return constant(e);
      case PExpr::Kind::Ident:
        if (vars_.count(e.name)) return mk_var(e.name);
        return mk_app(symbol(e, 0, false), {});
      case PExpr::Kind::App: {
        std::vector<Term> args;
        for (const auto& a : e.args) args.push_back(term(a));
        const OpSym op = symbol(e, args.size(), e.scalar.has_value());
        return e.scalar ? mk_app(op, *e.scalar, std::move(args)) : mk_app(op, std::move(args));
      }
      case PExpr::Kind::Guard:
        return nested_guard(e);
    }
    return {};
  }

  Context context(const PExpr& e) {
    switch (e.kind) {
      case PExpr::Kind::Guard:
        return Context::guard(step(e));
      case PExpr::Kind::App: {
        std::vector<Context> args;
        for (const auto& a : e.args) args.push_back(context(a));
        const OpSym op = symbol(e, args.size(), e.scalar.has_value());
        return Context::app(op, std::move(args), e.scalar);
      }
      default:
        return Context::leaf(term(e));
    }
  }

  Step<Term> step(const PExpr& g) {
    const BehaviorKind& kind = table_->kind();
    Step<Term> s;
    s.label = g.label;
    if (kind.tag() == KindTag::Language) {
      const OpSym empty = table_->symbol("empty");
      for (Port p = 0; p < kind.port_count(); ++p) s.children.emplace_back(p, mk_app(empty, {}));
      for (const auto& [p, sub] : g.ports) s.children[p].second = term(sub);
    } else {
      for (const auto& [p, sub] : g.ports) s.children.emplace_back(p, term(sub));
    }
    return s;
  }

 private:
  Term constant(const PExpr& e) {
    const OpSym cst = symbol_named(e, "const", 0, true);
    return mk_app(cst, *e.scalar, {});
  }

  Term nested_guard(const PExpr& g) {
    const BehaviorKind& kind = table_->kind();
    if (kind.tag() == KindTag::Stream) {
      return mk_app(table_->symbol("register"), std::get<Rational>(g.label), {term(g.ports.at(0).second)});
    }
    if (kind.tag() == KindTag::Language) {
      const bool accept = std::get<bool>(g.label);
      if (!accept && g.ports.size() == 1) {
        return mk_app(table_->symbol("prefix_" + kind.port_name(g.ports[0].first)), {term(g.ports[0].second)});
      }
      Step<Term> s = step(g);
      std::vector<Term> args;
      for (auto& [p, t] : s.children) args.push_back(std::move(t));
      return mk_app(table_->symbol(accept ? "cinv_1" : "cinv_0"), std::move(args));
    }
    throw SyntaxError(g.where.line, g.where.col, "a tree guard may only appear outside other guards");
  }

  OpSym symbol(const PExpr& e, std::size_t arity, bool scalar) { return symbol_named(e, e.name, arity, scalar); }

  OpSym symbol_named(const PExpr& e, const std::string& name, std::size_t arity, bool scalar) {
    auto op = table_->signature()->find(name);
    if (!op) throw Error(ErrorCode::UnknownSymbol, at(e) + "unknown symbol or variable '" + name + "'");
    if (op->arity != arity) {
      throw Error(ErrorCode::ArityMismatch, at(e) + "'" + name + "' takes " + std::to_string(op->arity) +
                                                " argument(s), got " + std::to_string(arity));
    }
    if (op->scalar_indexed != scalar) {
      throw Error(ErrorCode::ArityMismatch,
                  at(e) + "'" + name + (op->scalar_indexed ? "' needs an index [r]" : "' takes no index"));
    }
    return *op;
  }

  static std::string at(const PExpr& e) {
    return std::to_string(e.where.line) + ":" + std::to_string(e.where.col) + ": ";
  }

  TablePtr table_;
  std::set<std::string> vars_;
};

Header parse_header(const std::pair<std::size_t, std::string>& line) {
  Cursor cur(lex::tokenize_line(line.second, line.first), line.first);
  cur.ident("'kind'");
  const Token kt = cur.peek();
  const std::string kind = cur.ident("a kind");
  Header h;
  if (kind == "stream") {
    h.kind = BehaviorKind::stream();
    h.table = instances::stream_table();
  } else if (kind == "tree") {
    h.kind = BehaviorKind::tree();
    h.table = instances::tree_table();
  } else if (kind == "language") {
    std::vector<std::string> alphabet;
    while (!cur.at_end()) alphabet.push_back(cur.ident("letter"));
    if (alphabet.empty()) cur.fail("a language needs at least one letter");
    h.table = instances::language_table(alphabet);
    h.kind = h.table->kind();
  } else {
    cur.fail_at(kt, "kind must be stream, tree or language");
  }
  cur.expect_end();
  return h;
}

bool is_header(const std::string& line) {
  auto toks = lex::tokenize_line(line, 0);
  return toks.size() > 1 && toks[0].text == "kind" && !(toks[1].kind == Token::Kind::Punct && toks[1].text == "=");
}

}  // namespace

System parse_system(std::string_view text) {
  auto lines = lex::logical_lines(text);
  std::size_t first = 0;
  Header header;
  header.table = instances::stream_table();
  if (!lines.empty() && is_header(lines[0].second)) {
    header = parse_header(lines[0]);
    first = 1;
  }

  struct Parsed {
    Token where;
    std::string var;
    PExpr rhs;
  };
  std::vector<Parsed> parsed;
  std::set<std::string> vars;
  for (std::size_t i = first; i < lines.size(); ++i) {
    Cursor cur(lex::tokenize_line(lines[i].second, lines[i].first), lines[i].first);
    Parsed p;
    p.where = cur.peek();
    p.var = cur.ident("variable");
    if (!vars.insert(p.var).second) cur.fail_at(p.where, "variable '" + p.var + "' defined twice");
    cur.expect("=");
    ExprParser ep(cur, header.kind);
    p.rhs = ep.expr();
    cur.expect_end();
    parsed.push_back(std::move(p));
  }
  if (parsed.empty()) throw SyntaxError(lines.empty() ? 1 : lines.back().first, 1, "no equations");

  Compiler comp(header.table, vars);
  System sys;
  sys.table = header.table;
  for (const auto& p : parsed) {
    Equation eq{VarId(p.var), Rhs{}};
    if (p.rhs.kind == PExpr::Kind::Guard) {
      eq.rhs = comp.step(p.rhs);
    } else {
      Context ctx = comp.context(p.rhs);
      if (auto path = ctx.unguarded_path()) {
        throw Error(ErrorCode::Unguarded, p.var + ": " + *path + " is not under a guard");
      }
      eq.rhs = std::move(ctx);
    }
    sys.equations.push_back(std::move(eq));
  }
  return sys;
}

namespace {

std::string print_term_text(const Term& t) {
  if (t.is_app() && t.op().name == "const" && t.scalar() && t.args().empty()) {
    const Rational& r = *t.scalar();
    return r < 0 ? "const[" + to_string(r) + "]" : to_string(r);
  }
  if (!t.is_app()) return to_string(t);
  std::string out = t.op().name;
  if (t.scalar()) out += "[" + to_string(*t.scalar()) + "]";
  if (!t.args().empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.args().size(); ++i) out += (i ? ", " : "") + print_term_text(t.args()[i]);
    out += ")";
  }
  return out;
}

std::string print_step_text(const BehaviorKind& kind, const Step<Term>& s) {
  if (kind.tag() == KindTag::Stream) {
    const std::string cont = print_term_text(s.children.at(0).second);
    return to_string(s.label) + " . " + cont;
  }
  std::string out = "<" + to_string(s.label);
  bool first = true;
  for (const auto& [p, t] : s.children) {
    if (kind.tag() == KindTag::Language && t.is_app() && t.op().name == "empty") continue;
    out += (first ? "; " : ", ") + kind.port_name(p) + ": " + print_term_text(t);
    first = false;
  }
  return out + ">";
}

std::string print_context_text(const BehaviorKind& kind, const Context& c) {
  switch (c.kind()) {
    case Context::Kind::Guard:
      return "(" + print_step_text(kind, c.guard_step()) + ")";
    case Context::Kind::Leaf:
      return print_term_text(c.leaf_term());
    case Context::Kind::App: {
      std::string out = c.op().name;
      if (c.scalar()) out += "[" + to_string(*c.scalar()) + "]";
      if (!c.args().empty()) {
        out += "(";
        for (std::size_t i = 0; i < c.args().size(); ++i) {
          out += (i ? ", " : "") + print_context_text(kind, c.args()[i]);
        }
        out += ")";
      }
      return out;
    }
  }
  return {};
}

}  // namespace

std::string print_system(const System& system) {
  const BehaviorKind& kind = system.kind();
  std::string out = "kind ";
  out += to_string(kind.tag());
  if (kind.tag() == KindTag::Language) {
    for (const auto& a : kind.alphabet()) out += " " + a;
  } else if (kind.tag() == KindTag::Process) {
    throw Error(ErrorCode::InvalidArgument, "process systems print as CCS agents");
  }
  out += "\n";
  for (const auto& eq : system.equations) {
    out += eq.var.name() + " = ";
    if (const auto* s = std::get_if<Step<Term>>(&eq.rhs)) {
      out += print_step_text(kind, *s);
    } else if (const auto* c = std::get_if<Context>(&eq.rhs)) {
      out += print_context_text(kind, *c);
    } else {
      throw Error(ErrorCode::InvalidArgument, "only step and context right-hand sides print");
    }
    out += "\n";
  }
  return out;
}

}  // namespace corec

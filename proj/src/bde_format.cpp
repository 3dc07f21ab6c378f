#include <map>
#include <set>

#include "corec/frontends.hpp"
#include "corec/instances.hpp"
#include "lex.hpp"

namespace corec {

namespace {

using lex::Cursor;
using lex::Token;

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words{"head", "label", "tail", "L", "R", "const", "kind"};
  return words;
}

TablePtr given_table(KindTag kind) {
  return kind == KindTag::Tree ? instances::tree_table() : instances::stream_table();
}

class DeclParser {
 public:
  DeclParser(Cursor& cur, KindTag kind, const std::vector<std::string>& params)
      : cur_(cur), kind_(kind), params_(params) {}

  LabelExpr lexpr() {
    LabelExpr acc = product();
    while (cur_.is("+") || cur_.is("-")) {
      const bool add = cur_.next().text == "+";
      acc = LabelExpr::binary(add ? LabelExpr::Op::Add : LabelExpr::Op::Sub, acc, product());
    }
    return acc;
  }

  BdeTerm term() {
    const Token t = cur_.peek();
    if (t.kind == Token::Kind::Number || cur_.is("-")) {
      BdeTerm c;
      c.kind = BdeTerm::Kind::Const;
      c.scalar = LabelExpr::constant(cur_.rational());
      return c;
    }
    if (t.kind != Token::Kind::Ident) cur_.fail("expected a term");
    if (is_label_accessor()) {
      BdeTerm c;
      c.kind = BdeTerm::Kind::Const;
      c.scalar = label_accessor();
      return c;
    }
    const std::string name = t.text;
    if (name == "tail" || name == "L" || name == "R") {
      if (name == "tail" && kind_ != KindTag::Stream) cur_.fail("'tail' is for streams; use L(x) or R(x)");
      if (name != "tail" && kind_ != KindTag::Tree) cur_.fail("'" + name + "' is for trees; use tail(x)");
      cur_.next();
      cur_.expect("(");
      BdeTerm c;
      c.kind = BdeTerm::Kind::Child;
      c.arg = param();
      c.port = name == "R" ? 1 : 0;
      cur_.expect(")");
      return c;
    }
    if (name == "const" && cur_.is("(", 1)) {
      cur_.next();
      cur_.expect("(");
      BdeTerm c;
      c.kind = BdeTerm::Kind::Const;
      c.scalar = lexpr();
      cur_.expect(")");
      return c;
    }
    if (auto i = param_index(name)) {
      cur_.next();
      BdeTerm s;
      s.arg = *i;
      if (cur_.accept("'")) {
        if (kind_ != KindTag::Stream) cur_.fail("x' is for streams; use L(x) or R(x)");
        s.kind = BdeTerm::Kind::Child;
        s.port = 0;
      } else {
        s.kind = BdeTerm::Kind::Self;
      }
      return s;
    }
    BdeTerm app;
    app.kind = BdeTerm::Kind::App;
    app.name = cur_.next().text;
    if (cur_.accept("[")) {
      app.scalar = lexpr();
      cur_.expect("]");
    }
    if (cur_.accept("(")) {
      if (!cur_.is(")")) {
        do {
          app.args.push_back(term());
        } while (cur_.accept(","));
      }
      cur_.expect(")");
    }
    return app;
  }

 private:
  LabelExpr product() {
    LabelExpr acc = unary();
    while (cur_.accept("*")) acc = LabelExpr::binary(LabelExpr::Op::Mul, acc, unary());
    return acc;
  }

  LabelExpr unary() {
    if (cur_.accept("-")) return LabelExpr::unary(LabelExpr::Op::Neg, unary());
    if (cur_.accept("(")) {
      LabelExpr e = lexpr();
      cur_.expect(")");
      return e;
    }
    if (cur_.peek().kind == Token::Kind::Number) return LabelExpr::constant(lex::parse_number(cur_.next()));
    if (is_label_accessor()) return label_accessor();
    cur_.fail("expected a label expression");
  }

  // head(x), label(x) or x(0)
  bool is_label_accessor() const {
    const Token& t = cur_.peek();
    if (t.kind != Token::Kind::Ident) return false;
    if ((t.text == "head" || t.text == "label") && cur_.is("(", 1)) return true;
    return param_index(t.text) && cur_.is("(", 1) && cur_.peek(2).text == "0" && cur_.is(")", 3);
  }

  LabelExpr label_accessor() {
    const Token t = cur_.next();
    cur_.expect("(");
    std::size_t i = 0;
    if (t.text == "head" || t.text == "label") {
      i = param();
    } else {
      i = *param_index(t.text);
      cur_.next();
    }
    cur_.expect(")");
    return LabelExpr::premise(i);
  }

  std::size_t param() {
    const Token t = cur_.peek();
    const std::string name = cur_.ident("parameter");
    auto i = param_index(name);
    if (!i) cur_.fail_at(t, "'" + name + "' is not a parameter");
    return *i;
  }

  std::optional<std::size_t> param_index(const std::string& name) const {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (params_[i] == name) return i;
    }
    return std::nullopt;
  }

  Cursor& cur_;
  KindTag kind_;
  const std::vector<std::string>& params_;
};

struct Arity {
  std::size_t args;
  bool scalar;
};

void check_term(const BdeTerm& t, const std::map<std::string, Arity>& symbols, const std::string& where) {
  if (t.kind != BdeTerm::Kind::App) return;
  auto it = symbols.find(t.name);
  if (it == symbols.end()) throw Error(ErrorCode::UnknownSymbol, where + ": unknown symbol '" + t.name + "'");
  if (it->second.args != t.args.size()) {
    throw Error(ErrorCode::ArityMismatch, where + ": '" + t.name + "' takes " + std::to_string(it->second.args) +
                                              " argument(s), got " + std::to_string(t.args.size()));
  }
  if (it->second.scalar != t.scalar.has_value()) {
    throw Error(ErrorCode::ArityMismatch,
                where + ": '" + t.name + (it->second.scalar ? "' needs an index [r]" : "' takes no index"));
  }
  for (const auto& a : t.args) check_term(a, symbols, where);
}

std::map<std::string, Arity> visible_symbols(const BdeFile& file) {
  std::map<std::string, Arity> symbols;
  const TablePtr table = given_table(file.kind);
  const auto sig = table->signature();
  for (const auto& op : sig->symbols()) symbols[op.name] = {op.arity, op.scalar_indexed};
  for (const auto& d : file.decls) symbols[d.name] = {d.params.size(), false};
  return symbols;
}

void check_file(const BdeFile& file) {
  const auto symbols = visible_symbols(file);
  for (const auto& d : file.decls) {
    for (const auto& t : d.derivatives) check_term(t, symbols, d.name);
  }
}

std::vector<std::string> premise_names(const BdeDecl& d) {
  std::vector<std::string> names;
  for (const auto& p : d.params) names.push_back("head(" + p + ")");
  return names;
}

std::string print_term(const BdeTerm& t, const BdeDecl& d, KindTag kind) {
  switch (t.kind) {
    case BdeTerm::Kind::Self:
      return d.params.at(t.arg);
    case BdeTerm::Kind::Child:
      if (kind == KindTag::Stream) return d.params.at(t.arg) + "'";
      return std::string(t.port == 0 ? "L(" : "R(") + d.params.at(t.arg) + ")";
    case BdeTerm::Kind::Const: {
      const std::string e = t.scalar->to_string(premise_names(d));
      const bool bare = e.find_first_of(" ()-") == std::string::npos || (e.rfind("head(", 0) == 0 && e.find(' ') == std::string::npos);
      return bare ? e : "const(" + e + ")";
    }
    case BdeTerm::Kind::App: {
      std::string out = t.name;
      if (t.scalar) out += "[" + t.scalar->to_string(premise_names(d)) + "]";
      if (!t.args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < t.args.size(); ++i) out += (i ? ", " : "") + print_term(t.args[i], d, kind);
        out += ")";
      }
      return out;
    }
  }
  return {};
}

// Compiled derivative term, with symbols resolved once.
struct Builder {
  enum class Kind { Self, Child, Const, App };
  Kind kind = Kind::Self;
  std::size_t arg = 0;
  Port port = 0;
  OpSym op;
  std::optional<LabelExpr> scalar;
  std::vector<Builder> args;

  Term build(const RuleInput& in) const {
    switch (kind) {
      case Kind::Self:
        return in.args[arg].self;
      case Kind::Child:
        return in.args[arg].child(port);
      case Kind::Const:
        return mk_app(op, std::get<Rational>(scalar->eval(in.args)), {});
      case Kind::App: {
        std::vector<Term> xs;
        xs.reserve(args.size());
        for (const auto& a : args) xs.push_back(a.build(in));
        if (scalar) return mk_app(op, std::get<Rational>(scalar->eval(in.args)), std::move(xs));
        return mk_app(op, std::move(xs));
      }
    }
    return {};
  }
};

Builder compile_term(const BdeTerm& t, const Signature& fresh, const TablePtr& given) {
  Builder b;
  b.arg = t.arg;
  b.port = t.port;
  b.scalar = t.scalar;
  switch (t.kind) {
    case BdeTerm::Kind::Self:
      b.kind = Builder::Kind::Self;
      break;
    case BdeTerm::Kind::Child:
      b.kind = Builder::Kind::Child;
      break;
    case BdeTerm::Kind::Const:
      b.kind = Builder::Kind::Const;
      b.op = given->symbol("const");
      break;
    case BdeTerm::Kind::App: {
      b.kind = Builder::Kind::App;
      auto op = fresh.find(t.name);
      b.op = op ? *op : given->symbol(t.name);
      for (const auto& a : t.args) b.args.push_back(compile_term(a, fresh, given));
      break;
    }
  }
  return b;
}

}  // namespace

BdeFile parse_bde(std::string_view text) {
  auto lines = lex::logical_lines(text);
  BdeFile file;
  std::size_t first = 0;
  if (!lines.empty()) {
    auto toks = lex::tokenize_line(lines[0].second, lines[0].first);
    if (toks[0].text == "kind") {
      Cursor cur(std::move(toks), lines[0].first);
      cur.next();
      const Token kt = cur.peek();
      const std::string k = cur.ident("a kind");
      if (k == "stream") {
        file.kind = KindTag::Stream;
      } else if (k == "tree") {
        file.kind = KindTag::Tree;
      } else {
        cur.fail_at(kt, "behavioral differential equations are for stream or tree");
      }
      cur.expect_end();
      first = 1;
    }
  }
  std::set<std::string> names;
  for (std::size_t i = first; i < lines.size(); ++i) {
    Cursor cur(lex::tokenize_line(lines[i].second, lines[i].first), lines[i].first);
    BdeDecl d;
    const Token nt = cur.peek();
    d.name = cur.ident("operation name");
    if (reserved_words().count(d.name)) cur.fail_at(nt, "'" + d.name + "' is reserved");
    if (!names.insert(d.name).second) {
      throw Error(ErrorCode::DuplicateRule, std::to_string(nt.line) + ":" + std::to_string(nt.col) + ": '" + d.name +
                                                "' declared twice");
    }
    cur.expect("(");
    if (!cur.is(")")) {
      do {
        const Token pt = cur.peek();
        std::string p = cur.ident("parameter");
        if (reserved_words().count(p)) cur.fail_at(pt, "'" + p + "' is reserved");
        for (const auto& q : d.params) {
          if (q == p) cur.fail_at(pt, "parameter '" + p + "' repeated");
        }
        d.params.push_back(std::move(p));
      } while (cur.accept(","));
    }
    cur.expect(")");
    cur.expect(":");
    DeclParser dp(cur, file.kind, d.params);
    const std::size_t ports = file.kind == KindTag::Tree ? 2 : 1;
    std::optional<LabelExpr> head;
    std::vector<std::optional<BdeTerm>> derivs(ports);
    do {
      const Token ct = cur.peek();
      const std::string clause = cur.ident("clause name");
      cur.expect("=");
      std::optional<std::size_t> port;
      if (clause == "head" || clause == "label") {
        if (head) cur.fail_at(ct, "initial value given twice");
        head = dp.lexpr();
        continue;
      }
      if (file.kind == KindTag::Stream && clause == "tail") port = 0;
      if (file.kind == KindTag::Tree && clause == "L") port = 0;
      if (file.kind == KindTag::Tree && clause == "R") port = 1;
      if (!port) cur.fail_at(ct, "unknown clause '" + clause + "'");
      if (derivs[*port]) cur.fail_at(ct, "clause '" + clause + "' given twice");
      derivs[*port] = dp.term();
    } while (cur.accept(";"));
    cur.expect_end();
    if (!head) cur.fail(file.kind == KindTag::Tree ? "missing 'label =' clause" : "missing 'head =' clause");
    for (std::size_t p = 0; p < ports; ++p) {
      if (!derivs[p]) {
        const char* which = file.kind == KindTag::Stream ? "tail" : (p == 0 ? "L" : "R");
        cur.fail(std::string("missing '") + which + " =' clause");
      }
      d.derivatives.push_back(std::move(*derivs[p]));
    }
    d.head = *head;
    file.decls.push_back(std::move(d));
  }
  if (file.decls.empty()) throw SyntaxError(lines.empty() ? 1 : lines.back().first, 1, "no declarations");
  check_file(file);
  return file;
}

std::string print_bde(const BdeFile& file) {
  std::string out = std::string("kind ") + to_string(file.kind) + "\n";
  for (const auto& d : file.decls) {
    out += d.name + "(";
    for (std::size_t i = 0; i < d.params.size(); ++i) out += (i ? ", " : "") + d.params[i];
    out += "): ";
    out += (file.kind == KindTag::Tree ? "label = " : "head = ") + d.head.to_string(premise_names(d));
    if (file.kind == KindTag::Stream) {
      out += "; tail = " + print_term(d.derivatives.at(0), d, file.kind);
    } else {
      out += "; L = " + print_term(d.derivatives.at(0), d, file.kind);
      out += "; R = " + print_term(d.derivatives.at(1), d, file.kind);
    }
    out += "\n";
  }
  return out;
}

CompiledRps compile_bde(const BdeFile& file) {
  check_file(file);
  CompiledRps out;
  out.given = given_table(file.kind);
  std::vector<SymbolDecl> decls;
  for (const auto& d : file.decls) decls.push_back({d.name, d.params.size(), false});
  out.def.new_sig = Signature::make(std::move(decls));
  const SignaturePtr fresh = out.def.new_sig;
  for (std::size_t k = 0; k < file.decls.size(); ++k) {
    const BdeDecl& d = file.decls[k];
    std::vector<Builder> derivs;
    for (const auto& t : d.derivatives) derivs.push_back(compile_term(t, *fresh, out.given));
    LabelExpr head = d.head;
    Conclude conclude = [fresh, head, derivs](const RuleInput& in) {
      Step<Term> s;
      s.label = head.eval(in.args);
      for (std::size_t p = 0; p < derivs.size(); ++p) s.children.emplace_back(static_cast<Port>(p), derivs[p].build(in));
      return s;
    };
    out.def.rules.push_back(GsosRule{fresh->at(k), std::move(conclude)});
  }
  out.table = extend_with_rps(out.given, out.def);
  return out;
}

OpSym rps_symbol(const CompiledRps& rps, std::string_view name) {
  if (auto op = rps.def.new_sig->find(name)) return rps.table->resolve(*op);
  return rps.table->resolve(rps.given->symbol(name));
}

}  // namespace corec

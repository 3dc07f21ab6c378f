#include <map>
#include <set>

#include "corec/frontends.hpp"
#include "corec/instances.hpp"
#include "lex.hpp"

namespace corec {

Agent Agent::nil() { return Agent{}; }

Agent Agent::var(std::string name) {
  Agent a;
  a.kind = Kind::Var;
  a.name = std::move(name);
  return a;
}

Agent Agent::prefix(std::string action, Agent next) {
  Agent a;
  a.kind = Kind::Prefix;
  a.name = std::move(action);
  a.kids.push_back(std::move(next));
  return a;
}

Agent Agent::sum(std::vector<Agent> kids) {
  Agent a;
  a.kind = Kind::Sum;
  a.kids = std::move(kids);
  return a;
}

Agent Agent::binary(Kind kind, Agent left, Agent right) {
  Agent a;
  a.kind = kind;
  a.kids.push_back(std::move(left));
  a.kids.push_back(std::move(right));
  return a;
}

Agent Agent::relabeled(Agent inner, std::vector<std::pair<std::string, std::string>> pairs) {
  Agent a;
  a.kind = Kind::Relabel;
  a.kids.push_back(std::move(inner));
  a.relabel = std::move(pairs);
  return a;
}

Agent Agent::restricted(Agent inner, std::vector<std::string> hidden) {
  Agent a;
  a.kind = Kind::Restrict;
  a.kids.push_back(std::move(inner));
  a.hidden = std::move(hidden);
  return a;
}

const Agent* CcsFile::find(std::string_view name) const {
  for (const auto& [n, a] : defs) {
    if (n == name) return &a;
  }
  return nullptr;
}

namespace {

using lex::Cursor;
using lex::Token;

std::string base_name(const std::string& action) { return action.rfind('\'', 0) == 0 ? action.substr(1) : action; }

class AgentParser {
 public:
  explicit AgentParser(Cursor& cur) : cur_(cur) {}

  Agent sum() {
    std::vector<Agent> kids{par()};
    while (cur_.accept("+")) kids.push_back(par());
    return kids.size() == 1 ? std::move(kids[0]) : Agent::sum(std::move(kids));
  }

  std::vector<std::string> actions;  // base names in order of appearance

 private:
  Agent par() {
    Agent acc = seq();
    while (cur_.accept("|")) acc = Agent::binary(Agent::Kind::Par, std::move(acc), seq());
    return acc;
  }

  Agent seq() {
    Agent acc = pre();
    while (cur_.accept(";")) acc = Agent::binary(Agent::Kind::Seq, std::move(acc), pre());
    return acc;
  }

  Agent pre() {
    if (cur_.is("'") && cur_.peek(1).kind == Token::Kind::Ident && cur_.is(".", 2)) {
      cur_.next();
      std::string a = "'" + cur_.next().text;
      note(a);
      cur_.expect(".");
      return Agent::prefix(std::move(a), pre());
    }
    if (cur_.peek().kind == Token::Kind::Ident && cur_.is(".", 1)) {
      std::string a = cur_.next().text;
      note(a);
      cur_.expect(".");
      return Agent::prefix(std::move(a), pre());
    }
    return post();
  }

  Agent post() {
    Agent acc = atom();
    for (;;) {
      if (cur_.accept("[")) {
        std::vector<std::pair<std::string, std::string>> pairs;
        do {
          std::string to = action_name();
          cur_.expect("/");
          std::string from = action_name();
          pairs.emplace_back(std::move(to), std::move(from));
        } while (cur_.accept(","));
        cur_.expect("]");
        acc = Agent::relabeled(std::move(acc), std::move(pairs));
      } else if (cur_.accept("\\")) {
        cur_.expect("{");
        std::vector<std::string> hidden;
        if (!cur_.is("}")) {
          do {
            hidden.push_back(action_name());
          } while (cur_.accept(","));
        }
        cur_.expect("}");
        acc = Agent::restricted(std::move(acc), std::move(hidden));
      } else {
        return acc;
      }
    }
  }

  Agent atom() {
    const Token t = cur_.peek();
    if (cur_.accept("(")) {
      Agent a = sum();
      cur_.expect(")");
      return a;
    }
    if (t.kind == Token::Kind::Number) {
      if (t.text != "0") cur_.fail("only 0 is an agent constant");
      cur_.next();
      return Agent::nil();
    }
    if (t.kind != Token::Kind::Ident) cur_.fail("expected an agent");
    cur_.next();
    if (t.text == "alt" && cur_.accept("(")) {
      Agent l = sum();
      cur_.expect(",");
      Agent r = sum();
      cur_.expect(")");
      return Agent::binary(Agent::Kind::Alt, std::move(l), std::move(r));
    }
    return Agent::var(t.text);
  }

  std::string action_name() {
    if (cur_.accept("'")) {
      std::string a = "'" + cur_.ident("action");
      note(a);
      return a;
    }
    std::string a = cur_.ident("action");
    note(a);
    return a;
  }

  void note(const std::string& action) {
    const std::string b = base_name(action);
    if (b == "tau") return;
    if (std::find(actions.begin(), actions.end(), b) == actions.end()) actions.push_back(b);
  }

  Cursor& cur_;
};

int level(const Agent& a) {
  switch (a.kind) {
    case Agent::Kind::Sum: return 0;
    case Agent::Kind::Par: return 1;
    case Agent::Kind::Seq: return 2;
    case Agent::Kind::Prefix: return 3;
    case Agent::Kind::Relabel:
    case Agent::Kind::Restrict: return 4;
    default: return 5;
  }
}

std::string print_at(const Agent& a, int need) {
  std::string out;
  switch (a.kind) {
    case Agent::Kind::Nil: out = "0"; break;
    case Agent::Kind::Var: out = a.name; break;
    case Agent::Kind::Prefix: out = a.name + "." + print_at(a.kids[0], 3); break;
    case Agent::Kind::Sum:
      if (a.kids.empty()) return "0";
      for (std::size_t i = 0; i < a.kids.size(); ++i) out += (i ? " + " : "") + print_at(a.kids[i], 1);
      break;
    case Agent::Kind::Par: out = print_at(a.kids[0], 1) + " | " + print_at(a.kids[1], 2); break;
    case Agent::Kind::Seq: out = print_at(a.kids[0], 2) + " ; " + print_at(a.kids[1], 3); break;
    case Agent::Kind::Alt: out = "alt(" + print_at(a.kids[0], 0) + ", " + print_at(a.kids[1], 0) + ")"; break;
    case Agent::Kind::Relabel:
      out = print_at(a.kids[0], 4) + "[";
      for (std::size_t i = 0; i < a.relabel.size(); ++i) {
        out += (i ? ", " : "") + a.relabel[i].first + "/" + a.relabel[i].second;
      }
      out += "]";
      break;
    case Agent::Kind::Restrict:
      out = print_at(a.kids[0], 4) + "\\{";
      for (std::size_t i = 0; i < a.hidden.size(); ++i) out += (i ? ", " : "") + a.hidden[i];
      out += "}";
      break;
  }
  return level(a) < need ? "(" + out + ")" : out;
}

void check_names(const Agent& a, const CcsFile& file, const ActionSet& actions) {
  auto action = [&](const std::string& name) {
    if (!actions.find(name)) throw Error(ErrorCode::UnknownSymbol, "unknown action '" + name + "'");
  };
  switch (a.kind) {
    case Agent::Kind::Var:
      if (!file.find(a.name)) throw Error(ErrorCode::UnknownSymbol, "undefined agent '" + a.name + "'");
      break;
    case Agent::Kind::Prefix:
      action(a.name);
      break;
    case Agent::Kind::Relabel:
      for (const auto& [to, from] : a.relabel) {
        action(to);
        action(from);
      }
      break;
    case Agent::Kind::Restrict:
      for (const auto& h : a.hidden) action(h);
      break;
    default:
      break;
  }
  for (const auto& k : a.kids) check_names(k, file, actions);
}

class CcsCompiler {
 public:
  explicit CcsCompiler(const ActionSet& actions) : table_(instances::ccs_table(actions)), actions_(actions) {}
  CcsCompiler(TablePtr table, const ActionSet& actions) : table_(std::move(table)), actions_(actions) {}

  TablePtr table() const { return table_; }

  Context context(const Agent& a) {
    switch (a.kind) {
      case Agent::Kind::Prefix: {
        Step<Term> s;
        s.children.emplace_back(static_cast<Port>(*actions_.find(a.name)), term(a.kids[0]));
        return Context::guard(std::move(s));
      }
      case Agent::Kind::Var:
        return Context::leaf(mk_var(a.name));
      default: {
        std::vector<Context> args;
        for (const auto& k : a.kids) args.push_back(context(k));
        return Context::app(op_for(a), std::move(args));
      }
    }
  }

  Term term(const Agent& a) {
    switch (a.kind) {
      case Agent::Kind::Prefix:
        return mk_app(table_->symbol("prefix_" + a.name), {term(a.kids[0])});
      case Agent::Kind::Var:
        return mk_var(a.name);
      default: {
        std::vector<Term> args;
        for (const auto& k : a.kids) args.push_back(term(k));
        return mk_app(op_for(a), std::move(args));
      }
    }
  }

 private:
  OpSym op_for(const Agent& a) {
    switch (a.kind) {
      case Agent::Kind::Nil:
        return table_->symbol("sum_0");
      case Agent::Kind::Sum: {
        auto [t, op] = instances::with_sum(table_, a.kids.size());
        table_ = t;
        return op;
      }
      case Agent::Kind::Par:
        return table_->symbol("par");
      case Agent::Kind::Seq:
        return table_->symbol("seq");
      case Agent::Kind::Alt:
        return table_->symbol("alt");
      case Agent::Kind::Relabel: {
        std::vector<std::size_t> mapping(actions_.size());
        for (std::size_t i = 0; i < mapping.size(); ++i) mapping[i] = i;
        for (const auto& [to, from] : a.relabel) {
          const std::size_t f = *actions_.find(from), t = *actions_.find(to);
          mapping[f] = t;
          mapping[actions_.complement(f)] = actions_.complement(t);
        }
        auto it = relabels_.find(mapping);
        if (it != relabels_.end()) return it->second;
        auto [t, op] = instances::with_relabel(table_, mapping);
        table_ = t;
        relabels_.emplace(mapping, op);
        return op;
      }
      case Agent::Kind::Restrict: {
        std::set<std::size_t> ids;
        for (const auto& h : a.hidden) ids.insert(*actions_.find(h));
        std::vector<std::size_t> hidden(ids.begin(), ids.end());
        auto it = restricts_.find(hidden);
        if (it != restricts_.end()) return it->second;
        auto [t, op] = instances::with_restrict(table_, hidden);
        table_ = t;
        restricts_.emplace(hidden, op);
        return op;
      }
      default:
        throw Error(ErrorCode::InvalidArgument, "not an operation");
    }
  }

  TablePtr table_;
  ActionSet actions_;
  std::map<std::vector<std::size_t>, OpSym> relabels_;
  std::map<std::vector<std::size_t>, OpSym> restricts_;
};

}  // namespace

CcsFile parse_ccs(std::string_view text) {
  CcsFile file;
  std::vector<std::string> seen_actions;
  bool declared = false;  // an explicit header closes the alphabet
  std::set<std::string> names;
  auto lines = lex::logical_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& [line_no, line] = lines[i];
    Cursor cur(lex::tokenize_line(line, line_no), line_no);
    if (i == 0 && cur.peek().text == "actions" && !cur.is("=", 1)) {
      cur.next();
      declared = true;
      while (!cur.at_end()) {
        const Token t = cur.peek();
        std::string a = cur.ident("action");
        if (a == "tau") cur.fail_at(t, "tau is always present");
        if (std::find(seen_actions.begin(), seen_actions.end(), a) == seen_actions.end()) seen_actions.push_back(a);
      }
      continue;
    }
    const Token nt = cur.peek();
    std::string name = cur.ident("agent name");
    if (name == "alt" || name == "tau") cur.fail_at(nt, "'" + name + "' is reserved");
    if (!names.insert(name).second) cur.fail_at(nt, "agent '" + name + "' defined twice");
    cur.expect("=");
    AgentParser p(cur);
    Agent body = p.sum();
    cur.expect_end();
    for (const auto& a : p.actions) {
      if (!declared && std::find(seen_actions.begin(), seen_actions.end(), a) == seen_actions.end()) seen_actions.push_back(a);
    }
    file.defs.emplace_back(std::move(name), std::move(body));
  }
  if (file.defs.empty()) throw SyntaxError(lines.empty() ? 1 : lines.back().first, 1, "no agent definitions");
  file.actions = std::move(seen_actions);
  const ActionSet actions = ccs_actions(file);
  for (const auto& [n, a] : file.defs) check_names(a, file, actions);
  return file;
}

Agent parse_agent(std::string_view text, const CcsFile& file) {
  Cursor cur(lex::tokenize_line(text, 1), 1);
  AgentParser p(cur);
  Agent a = p.sum();
  cur.expect_end();
  check_names(a, file, ccs_actions(file));
  return a;
}

std::string print_agent(const Agent& agent) { return print_at(agent, 0); }

std::string print_ccs(const CcsFile& file) {
  std::string out = "actions";
  for (const auto& a : file.actions) out += " " + a;
  out += "\n";
  for (const auto& [n, a] : file.defs) out += n + " = " + print_agent(a) + "\n";
  return out;
}

ActionSet ccs_actions(const CcsFile& file) { return ActionSet::from_names(file.actions); }

CompiledCcs compile_ccs(const CcsFile& file) {
  CompiledCcs out;
  out.actions = ccs_actions(file);
  CcsCompiler comp(out.actions);
  std::vector<Equation> eqs;
  for (const auto& [name, agent] : file.defs) {
    check_names(agent, file, out.actions);
    if (agent.kind == Agent::Kind::Prefix) {
      Step<Term> s;
      s.children.emplace_back(static_cast<Port>(*out.actions.find(agent.name)), comp.term(agent.kids[0]));
      eqs.push_back(Equation{VarId(name), std::move(s)});
      continue;
    }
    Context ctx = comp.context(agent);
    if (auto path = ctx.unguarded_path()) {
      throw Error(ErrorCode::Unguarded, name + ": " + *path + " is not under a prefix");
    }
    eqs.push_back(Equation{VarId(name), std::move(ctx)});
  }
  out.system.table = comp.table();
  out.system.equations = std::move(eqs);
  return out;
}

Term agent_term(CompiledCcs& compiled, const Agent& agent) {
  CcsCompiler comp(compiled.system.table, compiled.actions);
  Term t = comp.term(agent);
  compiled.system.table = comp.table();
  return t;
}

namespace {

std::string print_tree(const ObservationTree& t, const ActionSet& actions, bool nested) {
  if (t.cut) return "*";
  if (t.children.empty()) return "0";
  std::string out;
  for (const auto& [a, c] : t.children) {
    out += (out.empty() ? "" : " + ") + actions.name(a) + "." + print_tree(c, actions, true);
  }
  return nested && t.children.size() > 1 ? "(" + out + ")" : out;
}

}  // namespace

std::string print_process_tree(const ObservationTree& tree, const ActionSet& actions) {
  return print_tree(tree, actions, false);
}

StreamLiteral parse_stream_literal(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  StreamLiteral lit;
  if (text == "ones") {
    lit.period = {Rational(1)};
    return lit;
  }
  if (text == "zeros") return lit;
  auto list = [&](std::string_view part, std::vector<Rational>& out) {
    part = trim(part);
    if (part.empty()) return;
    std::size_t start = 0;
    while (start <= part.size()) {
      std::size_t end = part.find(',', start);
      if (end == std::string_view::npos) end = part.size();
      std::string_view item = trim(part.substr(start, end - start));
      if (item.empty()) throw Error(ErrorCode::InvalidArgument, "empty entry in stream literal '" + std::string(text) + "'");
      out.push_back(parse_rational(item));
      start = end + 1;
    }
  };
  const std::size_t bar = text.find('|');
  if (bar == std::string_view::npos) {
    list(text, lit.prefix);
  } else {
    list(text.substr(0, bar), lit.prefix);
    list(text.substr(bar + 1), lit.period);
    if (lit.period.empty()) throw Error(ErrorCode::InvalidArgument, "empty period in stream literal");
  }
  if (lit.prefix.empty() && lit.period.empty()) throw Error(ErrorCode::InvalidArgument, "empty stream literal");
  return lit;
}

}  // namespace corec

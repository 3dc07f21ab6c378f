#include "lex.hpp"

#include <cctype>

namespace corec::lex {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize_line(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token tok;
    tok.line = line_no;
    tok.col = i + 1;
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < line.size() && ident_char(line[i])) ++i;
      tok.kind = Token::Kind::Ident;
    } else if (digit(c)) {
      while (i < line.size() && digit(line[i])) ++i;
      if (i + 1 < line.size() && (line[i] == '/' || line[i] == '.') && digit(line[i + 1])) {
        ++i;
        while (i < line.size() && digit(line[i])) ++i;
      }
      tok.kind = Token::Kind::Number;
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      i += 2;
      tok.kind = Token::Kind::Punct;
    } else {
      ++i;
      tok.kind = Token::Kind::Punct;
    }
    tok.text = std::string(line.substr(start, i - start));
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line_no;
  end.col = line.size() + 1;
  out.push_back(end);
  return out;
}

std::vector<std::pair<std::size_t, std::string>> logical_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::size_t line_no = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t k = 0;
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    if (k < line.size() && line[k] != '#') out.emplace_back(line_no, std::string(line));
    ++line_no;
    start = end + 1;
  }
  return out;
}

Cursor::Cursor(std::vector<Token> tokens, std::size_t line) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != Token::Kind::End) {
    Token end;
    end.line = line;
    tokens_.push_back(end);
  }
}

const Token& Cursor::peek(std::size_t ahead) const {
  return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

Token Cursor::next() {
  Token t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool Cursor::is(std::string_view punct, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Token::Kind::Punct && t.text == punct;
}

bool Cursor::accept(std::string_view punct) {
  if (!is(punct)) return false;
  next();
  return true;
}

void Cursor::expect(std::string_view punct) {
  if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
}

std::string Cursor::ident(std::string_view what) {
  if (peek().kind != Token::Kind::Ident) fail("expected " + std::string(what));
  return next().text;
}

Rational Cursor::rational() {
  const bool negative = accept("-");
  if (peek().kind != Token::Kind::Number) fail("expected a number");
  Rational r = parse_number(next());
  return negative ? Rational(-r) : r;
}

void Cursor::expect_end() {
  if (!at_end()) fail("unexpected '" + peek().text + "'");
}

void Cursor::fail(const std::string& message) const { fail_at(peek(), message); }

void Cursor::fail_at(const Token& token, const std::string& message) const {
  std::string where = token.kind == Token::Kind::End ? " at end of line" : "";
  throw SyntaxError(token.line, token.col, message + where);
}

Rational parse_number(const Token& token) {
  try {
    return parse_rational(token.text);
  } catch (const Error&) {
    throw SyntaxError(token.line, token.col, "bad number '" + token.text + "'");
  }
}

}  // namespace corec::lex

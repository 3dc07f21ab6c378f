#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "corec/error.hpp"
#include "corec/rational.hpp"

namespace corec::lex {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

/// Splits one source line into identifiers, unsigned numbers (`12`, `3/4`,
/// `0.25`) and single-character punctuation, `->` included. `#` starts a
/// comment.
std::vector<Token> tokenize_line(std::string_view line, std::size_t line_no);

/// Source split into lines with their 1-based numbers, blank and
/// comment-only lines dropped.
std::vector<std::pair<std::size_t, std::string>> logical_lines(std::string_view text);

class Cursor {
 public:
  Cursor(std::vector<Token> tokens, std::size_t line);

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool is(std::string_view punct, std::size_t ahead = 0) const;
  bool accept(std::string_view punct);
  void expect(std::string_view punct);
  std::string ident(std::string_view what = "identifier");
  /// Optional leading '-' then a number.
  Rational rational();
  void expect_end();

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& token, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

Rational parse_number(const Token& token);

}  // namespace corec::lex

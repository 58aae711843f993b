#pragma once

#include <memory>
#include <string>

namespace symmorse {

/// A compiled scalar expression in t.
///
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := ('-' | '+') factor | base ('^' ['-'] integer)?
///   base   := number | 't' | func '(' expr ')' | '(' expr ')'
///   func   := tanh | sech | exp | sin | cos | abs
class Expression {
 public:
  struct Node;

  /// Throws ParseError; line and column locate the offending character, with
  /// `line` and `column` giving the position of text[0] in the enclosing file.
  static Expression parse(const std::string& text, int line = 1, int column = 1);

  double operator()(double t) const;
  const std::string& source() const noexcept { return source_; }
  /// Fully parenthesized rendering of the syntax tree.
  std::string canonical() const;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace symmorse

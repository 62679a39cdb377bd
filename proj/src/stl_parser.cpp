#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "stlplan/errors.hpp"
#include "stlplan/stl.hpp"

namespace stlplan::stl {

namespace {

enum class Tok { Ident, Number, LParen, RParen, LBracket, RBracket, Comma, Amp, Pipe, Bang, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) bump();
    tok_.line = line_;
    tok_.column = col_;
    tok_.text.clear();
    if (pos_ >= s_.size()) {
      tok_.kind = Tok::End;
      return;
    }
    const char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        tok_.text += s_[pos_];
        bump();
      }
      tok_.kind = Tok::Ident;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
        tok_.text += s_[pos_];
        bump();
      }
      tok_.kind = Tok::Number;
      return;
    }
    tok_.text = std::string(1, c);
    bump();
    switch (c) {
      case '(': tok_.kind = Tok::LParen; return;
      case ')': tok_.kind = Tok::RParen; return;
      case '[': tok_.kind = Tok::LBracket; return;
      case ']': tok_.kind = Tok::RBracket; return;
      case ',': tok_.kind = Tok::Comma; return;
      case '&': tok_.kind = Tok::Amp; return;
      case '|': tok_.kind = Tok::Pipe; return;
      case '!': tok_.kind = Tok::Bang; return;
      default:
        throw syntax_error("unexpected character '" + tok_.text + "'", line_, col_ - 1);
    }
  }

  void bump() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_{Tok::End, "", 1, 1};
};

class Parser {
public:
  explicit Parser(const std::string& text) : lex_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End)
      throw syntax_error("unexpected trailing input '" + t.text + "'", t.line, t.column);
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = lex_.peek();
    throw syntax_error(msg, t.line, t.column);
  }

  Token expect(Tok kind, const char* what) {
    if (lex_.peek().kind != kind) fail(std::string("expected ") + what);
    return lex_.take();
  }

  // An identifier is a temporal operator only when immediately followed by '['.
  bool at_operator(const char* name) {
    return lex_.peek().kind == Tok::Ident && lex_.peek().text == name;
  }

  TimeInterval parse_interval() {
    expect(Tok::LBracket, "'['");
    const Token a = expect(Tok::Number, "number");
    expect(Tok::Comma, "','");
    const Token b = expect(Tok::Number, "number");
    expect(Tok::RBracket, "']'");
    TimeInterval iv{std::strtod(a.text.c_str(), nullptr), std::strtod(b.text.c_str(), nullptr)};
    if (!(iv.a >= 0.0) || !(iv.a < iv.b))
      throw syntax_error("interval requires 0 <= a < b", a.line, a.column);
    return iv;
  }

  FormulaPtr parse_or() {
    std::vector<FormulaPtr> parts{parse_and()};
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.take();
      parts.push_back(parse_and());
    }
    return make_or(std::move(parts));
  }

  FormulaPtr parse_and() {
    std::vector<FormulaPtr> parts{parse_until()};
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      parts.push_back(parse_until());
    }
    return make_and(std::move(parts));
  }

  FormulaPtr parse_until() {
    FormulaPtr lhs = parse_unary();
    if (at_operator("U")) {
      const Token op = lex_.take();
      if (lex_.peek().kind != Tok::LBracket)
        throw syntax_error("Until operator needs an interval", op.line, op.column);
      TimeInterval iv = parse_interval();
      FormulaPtr rhs = parse_until();  // right-associative
      return make_until(iv, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Bang) {
      lex_.take();
      return make_not(parse_unary());
    }
    if (t.kind == Tok::Ident && (t.text == "G" || t.text == "F")) {
      // Only an operator when an interval follows; otherwise a region name.
      const Token op = lex_.take();
      if (lex_.peek().kind == Tok::LBracket) {
        TimeInterval iv = parse_interval();
        return op.text == "G" ? make_always(iv, parse_unary())
                              : make_eventually(iv, parse_unary());
      }
      return make_pred(op.text);
    }
    return parse_atom();
  }

  FormulaPtr parse_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.take();
      FormulaPtr f = parse_or();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Ident) {
      Token id = lex_.take();
      if (id.text == "True") return make_true();
      if (id.text == "U")
        throw syntax_error("'U' is reserved for the Until operator", id.line, id.column);
      return make_pred(id.text);
    }
    fail("expected a region name, 'True', '!', 'G', 'F' or '('");
  }

  Lexer lex_;
};

}  // namespace

FormulaPtr parse(const std::string& text) { return Parser(text).parse(); }

}  // namespace stlplan::stl

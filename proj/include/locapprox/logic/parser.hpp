#pragma once

// Text syntax:
//   formula := ("sup" | "inf") VAR ":" "S"k "." formula
//            | ("min" | "max" | "plus" | "minus") "(" formula "," formula ")"
//            | "neg" "(" formula ")"
//            | "d"k "(" term "," term ")" | "zero"k "(" term ")"
//            | CONST                          (integer or p/q in [0, 1])
//   term    := product (("+" | "-") product)*
//   product := factor ("*" factor)*
//   factor  := VAR | INT | p/q | "-" factor | "(" term ")"
// A leading "-" on a numeric literal makes a negative literal; on anything
// else it means (0 - factor). '#' starts a comment that runs to the end of
// the line. Variables must be bound by an enclosing quantifier and may not
// be rebound inside its scope.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <string>
#include <vector>

#include "locapprox/logic/formula.hpp"

namespace locapprox::logic {

class FormulaParseError : public Error {
 public:
  FormulaParseError(ErrorKind kind, int line, int column, const std::string& msg, std::vector<std::string> expected)
      : Error(kind, render(line, column, msg, expected)), line_(line), column_(column), expected_(std::move(expected)) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string render(int line, int column, const std::string& msg, const std::vector<std::string>& expected) {
    std::string s = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
    if (!expected.empty()) {
      s += "; expected one of:";
      for (std::size_t i = 0; i < expected.size(); ++i) s += (i ? ", " : " ") + expected[i];
    }
    return s;
  }

  int line_, column_;
  std::vector<std::string> expected_;
};

namespace detail {

enum class Tok { Ident, Int, Rat, LParen, RParen, Comma, Colon, Dot, Plus, Minus, Star, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

inline std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t{Tok::End, {}, line, col};
    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      if (j + 1 < src.size() && src[j] == '/' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        t.kind = Tok::Rat;
      }
    } else {
      ++j;
      switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case ',': t.kind = Tok::Comma; break;
        case ':': t.kind = Tok::Colon; break;
        case '.': t.kind = Tok::Dot; break;
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        default:
          throw FormulaParseError(ErrorKind::ParseError, line, col, std::string("unexpected character '") + c + "'", {});
      }
    }
    t.text = src.substr(i, j - i);
    advance(j - i);
    out.push_back(std::move(t));
  }
  out.push_back({Tok::End, {}, line, col});
  return out;
}

const std::vector<std::string> formula_start = {"sup", "inf", "min", "max", "neg", "plus", "minus", "d<k>", "zero<k>",
                                                "constant in [0,1]"};
const std::vector<std::string> term_start = {"variable", "integer", "rational", "'-'", "'('"};

// Matches prefix<digits> and returns the digits, or "" when it does not.
inline std::string level_suffix(const std::string& id, const std::string& prefix) {
  if (id.size() <= prefix.size() || id.compare(0, prefix.size(), prefix) != 0) return {};
  std::string rest = id.substr(prefix.size());
  return std::all_of(rest.begin(), rest.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })
             ? rest
             : std::string{};
}

inline bool is_reserved(const std::string& id) {
  static const char* words[] = {"sup", "inf", "min", "max", "neg", "plus", "minus"};
  for (const char* w : words)
    if (id == w) return true;
  return !level_suffix(id, "d").empty() || !level_suffix(id, "zero").empty() || !level_suffix(id, "S").empty();
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  FormulaPtr parse_top() {
    FormulaPtr f = formula();
    if (peek().kind != Tok::End) error(peek(), "unexpected " + describe(peek()) + " after formula", {"end of input"});
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void error(const Token& t, const std::string& msg, std::vector<std::string> expected,
                          ErrorKind kind = ErrorKind::ParseError) {
    throw FormulaParseError(kind, t.line, t.col, msg, std::move(expected));
  }

  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) error(peek(), "unexpected " + describe(peek()), {std::string("'") + what + "'"});
    return take();
  }

  std::uint64_t level_of(const Token& t, const std::string& digits) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || p != digits.data() + digits.size()) error(t, "level out of range in " + describe(t), {});
    if (v == 0) error(t, "levels start at 1, got " + describe(t), {"level >= 1"});
    return v;
  }

  FormulaPtr formula() {
    const Token& t = peek();
    if (t.kind == Tok::Int || t.kind == Tok::Rat) {
      take();
      Rational c = parse_literal(t);
      if (c < 0 || c > 1) error(t, "truth constant " + t.text + " outside [0,1]", {"constant in [0,1]"});
      return Formula::constant(c);
    }
    if (t.kind != Tok::Ident) error(t, "unexpected " + describe(t), formula_start);
    const std::string id = t.text;
    if (id == "sup" || id == "inf") return quantifier();
    take();
    if (id == "neg") {
      expect(Tok::LParen, "(");
      FormulaPtr a = formula();
      expect(Tok::RParen, ")");
      return Formula::neg(a);
    }
    if (id == "min" || id == "max" || id == "plus" || id == "minus") {
      FormulaKind k = id == "min" ? FormulaKind::Min
                      : id == "max" ? FormulaKind::Max
                      : id == "plus" ? FormulaKind::Plus
                                     : FormulaKind::Minus;
      expect(Tok::LParen, "(");
      FormulaPtr a = formula();
      expect(Tok::Comma, ",");
      FormulaPtr b = formula();
      expect(Tok::RParen, ")");
      return Formula::binary(k, a, b);
    }
    if (auto digits = level_suffix(id, "zero"); !digits.empty()) {
      std::uint64_t lv = level_of(t, digits);
      expect(Tok::LParen, "(");
      TermPtr a = term();
      expect(Tok::RParen, ")");
      return Formula::zero(lv, a);
    }
    if (auto digits = level_suffix(id, "d"); !digits.empty()) {
      std::uint64_t lv = level_of(t, digits);
      expect(Tok::LParen, "(");
      TermPtr a = term();
      expect(Tok::Comma, ",");
      TermPtr b = term();
      expect(Tok::RParen, ")");
      return Formula::dist(lv, a, b);
    }
    error(t, "unexpected " + describe(t), formula_start);
  }

  FormulaPtr quantifier() {
    const Token& q = take();
    const Token& v = peek();
    if (v.kind != Tok::Ident || is_reserved(v.text)) error(v, "unexpected " + describe(v), {"variable name"});
    take();
    if (std::find(bound_.begin(), bound_.end(), v.text) != bound_.end())
      error(v, "variable '" + v.text + "' is already bound in this scope", {"fresh variable name"});
    expect(Tok::Colon, ":");
    const Token& s = peek();
    std::string digits = s.kind == Tok::Ident ? level_suffix(s.text, "S") : std::string{};
    if (digits.empty()) error(s, "unexpected " + describe(s), {"S<k>"});
    take();
    std::uint64_t lv = level_of(s, digits);
    expect(Tok::Dot, ".");
    bound_.push_back(v.text);
    FormulaPtr body = formula();
    bound_.pop_back();
    return Formula::quant(q.text == "sup" ? FormulaKind::Sup : FormulaKind::Inf, v.text, lv, body);
  }

  TermPtr term() {
    TermPtr t = product();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      TermKind k = take().kind == Tok::Plus ? TermKind::Add : TermKind::Sub;
      t = Term::binary(k, t, product());
    }
    return t;
  }

  TermPtr product() {
    TermPtr t = factor();
    while (peek().kind == Tok::Star) {
      take();
      t = Term::binary(TermKind::Mul, t, factor());
    }
    return t;
  }

  TermPtr factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        take();
        if (std::find(bound_.begin(), bound_.end(), t.text) != bound_.end()) return Term::var(t.text);
        if (is_reserved(t.text)) error(t, "unexpected " + describe(t), term_start);
        error(t, "variable '" + t.text + "' is not bound by any quantifier", {}, ErrorKind::UnboundVariable);
      case Tok::Int:
      case Tok::Rat: take(); return literal(t, false);
      case Tok::Minus: {
        take();
        const Token& n = peek();
        if (n.kind == Tok::Int || n.kind == Tok::Rat) {
          take();
          return literal(n, true);
        }
        return Term::binary(TermKind::Sub, Term::integer(0), factor());
      }
      case Tok::LParen: {
        take();
        TermPtr inner = term();
        expect(Tok::RParen, ")");
        return inner;
      }
      default: error(t, "unexpected " + describe(t), term_start);
    }
  }

  Rational parse_literal(const Token& t) {
    auto slash = t.text.find('/');
    Integer num(t.text.substr(0, slash));
    Integer den = slash == std::string::npos ? Integer(1) : Integer(t.text.substr(slash + 1));
    if (den == 0) error(t, "zero denominator in " + describe(t), {});
    return make_rational(num, den);
  }

  TermPtr literal(const Token& t, bool negative) {
    Rational r = parse_literal(t);
    if (negative) r = -r;
    constexpr auto hi = std::numeric_limits<std::int64_t>::max();
    if (boost::multiprecision::abs(boost::multiprecision::numerator(r)) > hi ||
        boost::multiprecision::denominator(r) > hi)
      error(t, "literal " + t.text + " does not fit 64 bits", {});
    if (t.kind == Tok::Int) return Term::integer(boost::multiprecision::numerator(r).convert_to<std::int64_t>());
    return Term::rational(BoundedRational::from(r));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
};

}  // namespace detail

inline FormulaPtr parse_formula(const std::string& text) { return detail::Parser(detail::lex(text)).parse_top(); }

}  // namespace locapprox::logic

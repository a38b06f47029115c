#pragma once

// Multivariate polynomials with integer coefficients and the PolySystem
// text format:
//
//   vars: x y
//   x^2 + y^2 - 1
//
// One polynomial per line; `#` starts a comment.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "locapprox/error.hpp"
#include "locapprox/rational.hpp"
#include "locapprox/residue.hpp"

namespace locapprox {

class Polynomial {
 public:
  using Exponents = std::vector<unsigned>;

  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static Polynomial constant(std::vector<std::string> vars, std::int64_t c) {
    Polynomial p(std::move(vars));
    if (c != 0) p.terms_[Exponents(p.vars_.size(), 0)] = c;
    return p;
  }

  static Polynomial variable(std::vector<std::string> vars, std::size_t index) {
    Polynomial p(std::move(vars));
    Exponents e(p.vars_.size(), 0);
    e.at(index) = 1;
    p.terms_[e] = 1;
    return p;
  }

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t arity() const { return vars_.size(); }
  const std::map<Exponents, std::int64_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total(e));
    return d;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial out = a;
    for (const auto& [e, c] : b.terms_) out.accumulate(e, c);
    return out;
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial out = a;
    for (const auto& [e, c] : b.terms_) {
      if (c == INT64_MIN) fail(ErrorKind::Overflow, "polynomial coefficient overflow");
      out.accumulate(e, -c);
    }
    return out;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out(a.vars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        std::int64_t c;
        if (__builtin_mul_overflow(ca, cb, &c)) fail(ErrorKind::Overflow, "polynomial coefficient overflow");
        out.accumulate(e, c);
      }
    }
    return out;
  }

  Polynomial pow(unsigned k) const {
    Polynomial out = constant(vars_, 1);
    for (unsigned i = 0; i < k; ++i) out = out * *this;
    return out;
  }

  /// Exact value at a rational point.
  Rational eval(const std::vector<Rational>& x) const {
    check_arity(x.size());
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
      acc += t;
    }
    return acc;
  }

  /// Value in F_q or Z_n; coefficients are embedded by k -> k mod n.
  Residue eval(const std::vector<Residue>& x, const Modulus& mod) const {
    check_arity(x.size());
    Residue acc = Residue::zero(mod);
    for (const auto& [e, c] : terms_) {
      Residue t = Residue::embed(c, mod);
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) t *= x[i].pow(e[i]);
      acc += t;
    }
    return acc;
  }

  /// Constant K with |p(x) - p(y)| <= K * max_i |x_i - y_i| on the box
  /// [-radius, radius]^n.
  Rational lipschitz_bound(const Rational& radius) const {
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
      unsigned d = total(e);
      if (d == 0) continue;
      Rational t = Rational(c < 0 ? -Integer(c) : Integer(c)) * d;
      for (unsigned k = 1; k < d; ++k) t *= radius;
      acc += t;
    }
    return acc;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest total degree first, then reverse-lexicographic exponents.
    std::vector<std::pair<Exponents, std::int64_t>> ordered(terms_.begin(), terms_.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      unsigned da = total(a.first), db = total(b.first);
      if (da != db) return da > db;
      return a.first > b.first;
    });
    for (const auto& [e, c] : ordered) {
      std::int64_t mag = c < 0 ? -c : c;
      if (first)
        os << (c < 0 ? "-" : "");
      else
        os << (c < 0 ? " - " : " + ");
      first = false;
      bool has_var = total(e) > 0;
      if (mag != 1 || !has_var) os << mag;
      bool need_star = mag != 1 && has_var;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        if (need_star) os << '*';
        os << vars_[i];
        if (e[i] > 1) os << '^' << e[i];
        need_star = true;
      }
    }
    return os.str();
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  static unsigned total(const Exponents& e) {
    unsigned d = 0;
    for (unsigned x : e) d += x;
    return d;
  }

  void accumulate(const Exponents& e, std::int64_t c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (c != 0) terms_.emplace(e, c);
      return;
    }
    if (__builtin_add_overflow(it->second, c, &it->second)) fail(ErrorKind::Overflow, "polynomial coefficient overflow");
    if (it->second == 0) terms_.erase(it);
  }

  void check_arity(std::size_t n) const {
    if (n != vars_.size())
      fail(ErrorKind::DimensionMismatch,
           "polynomial in " + std::to_string(vars_.size()) + " variables evaluated at " + std::to_string(n) + " values");
  }

  std::vector<std::string> vars_;
  std::map<Exponents, std::int64_t> terms_;
};

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string text, const std::vector<std::string>& vars, int line)
      : s_(std::move(text)), vars_(vars), line_(line) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      skip();
      if (eat('+'))
        acc = acc + term();
      else if (eat('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    for (;;) {
      skip();
      if (eat('*'))
        acc = acc * unary();
      else
        return acc;
    }
  }

  Polynomial unary() {
    skip();
    if (eat('-')) return Polynomial::constant(vars_, 0) - unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    skip();
    if (eat('^')) {
      skip();
      std::uint64_t e = integer();
      if (e > 64) error("exponent too large");
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Polynomial atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of polynomial");
    char c = s_[pos_];
    if (eat('(')) {
      Polynomial p = expr();
      skip();
      if (!eat(')')) error("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::uint64_t v = integer();
      if (v > std::uint64_t(INT64_MAX)) error("coefficient too large");
      return Polynomial::constant(vars_, static_cast<std::int64_t>(v));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) {
        pos_ = start;
        error("undeclared variable '" + name + "'");
      }
      return Polynomial::variable(vars_, static_cast<std::size_t>(it - vars_.begin()));
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::uint64_t integer() {
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("expected integer");
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      if (__builtin_mul_overflow(v, 10u, &v) || __builtin_add_overflow(v, std::uint64_t(s_[pos_] - '0'), &v))
        error("integer too large");
      ++pos_;
    }
    return v;
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::ParseError, "line " + std::to_string(line_) + ", column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  std::string s_;
  const std::vector<std::string>& vars_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars, int line = 1) {
  return detail::PolyParser(text, vars, line).parse();
}

/// Affine variety over Z given by a list of polynomials in shared variables.
struct PolySystem {
  std::vector<std::string> vars;
  std::vector<Polynomial> polys;

  std::string to_string() const {
    std::string out = "vars:";
    for (const auto& v : vars) out += " " + v;
    out += "\n";
    for (const auto& p : polys) out += p.to_string() + "\n";
    return out;
  }
};

inline PolySystem parse_poly_system(std::istream& in) {
  PolySystem sys;
  bool have_header = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = raw.substr(0, raw.find('#'));
    auto first = body.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::string text = body.substr(first);
    if (!have_header) {
      if (text.rfind("vars:", 0) != 0)
        fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": expected header 'vars: ...'");
      std::istringstream names(text.substr(5));
      std::string v;
      while (names >> v) {
        if (!(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_') ||
            !std::all_of(v.begin(), v.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }))
          fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad variable name '" + v + "'");
        if (std::find(sys.vars.begin(), sys.vars.end(), v) != sys.vars.end())
          fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": duplicate variable '" + v + "'");
        sys.vars.push_back(v);
      }
      if (sys.vars.empty()) fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": no variables declared");
      have_header = true;
      continue;
    }
    sys.polys.push_back(parse_polynomial(body, sys.vars, line));
  }
  if (!have_header) fail(ErrorKind::ParseError, "missing 'vars:' header");
  if (sys.polys.empty()) fail(ErrorKind::ParseError, "no polynomials given");
  return sys;
}

inline PolySystem parse_poly_system(const std::string& text) {
  std::istringstream in(text);
  return parse_poly_system(in);
}

/// Zero-set predicates used by the metric audit's openness check.
inline std::vector<Polynomial> standard_predicates() {
  std::vector<std::string> x{"x"};
  std::vector<std::string> xy{"x", "y"};
  return {
      parse_polynomial("x", x),
      parse_polynomial("4*x^2 - 1", x),
      parse_polynomial("x^2 + y^2 - 1", xy),
  };
}

}  // namespace locapprox

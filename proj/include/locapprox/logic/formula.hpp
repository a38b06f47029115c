#pragma once

// Continuous-logic formulas over the sorts S_k: terms, atomic distance and
// zero predicates, truncated connectives and sup/inf quantifiers.
//
// Nodes are immutable and shared; equality is structural.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "locapprox/error.hpp"
#include "locapprox/rational.hpp"

namespace locapprox::logic {

using locapprox::to_string;

enum class TermKind { Var, Int, Rat, Add, Sub, Mul };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind = TermKind::Int;
  std::string name;           // Var
  std::int64_t value = 0;     // Int
  BoundedRational rat{0, 1};  // Rat, reduced
  TermPtr lhs, rhs;           // Add, Sub, Mul

  static TermPtr var(std::string n) {
    Term t;
    t.kind = TermKind::Var;
    t.name = std::move(n);
    return std::make_shared<const Term>(std::move(t));
  }
  static TermPtr integer(std::int64_t v) {
    Term t;
    t.value = v;
    return std::make_shared<const Term>(std::move(t));
  }
  static TermPtr rational(BoundedRational r) {
    Term t;
    t.kind = TermKind::Rat;
    t.rat = r;
    return std::make_shared<const Term>(std::move(t));
  }
  static TermPtr binary(TermKind k, TermPtr a, TermPtr b) {
    if (k != TermKind::Add && k != TermKind::Sub && k != TermKind::Mul)
      fail(ErrorKind::InvalidArgument, "not a binary term kind");
    Term t;
    t.kind = k;
    t.lhs = std::move(a);
    t.rhs = std::move(b);
    return std::make_shared<const Term>(std::move(t));
  }
};

inline bool same_term(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::Var: return a.name == b.name;
    case TermKind::Int: return a.value == b.value;
    case TermKind::Rat: return a.rat == b.rat;
    default: return same_term(*a.lhs, *b.lhs) && same_term(*a.rhs, *b.rhs);
  }
}

enum class FormulaKind { Const, Dist, Zero, Neg, Min, Max, Plus, Minus, Sup, Inf };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaKind kind = FormulaKind::Const;
  Rational value;           // Const, in [0, 1]
  std::uint64_t level = 0;  // Dist, Zero, Sup, Inf
  TermPtr t1, t2;           // Dist uses both, Zero only t1
  FormulaPtr f, g;          // Neg and quantifiers use f
  std::string var;          // quantifiers

  static FormulaPtr constant(Rational c) {
    if (c < 0 || c > 1) fail(ErrorKind::InvalidArgument, "truth value " + to_string(c) + " outside [0,1]");
    Formula x;
    x.kind = FormulaKind::Const;
    x.value = std::move(c);
    return std::make_shared<const Formula>(std::move(x));
  }
  static FormulaPtr dist(std::uint64_t level, TermPtr a, TermPtr b) {
    check_level(level);
    Formula x;
    x.kind = FormulaKind::Dist;
    x.level = level;
    x.t1 = std::move(a);
    x.t2 = std::move(b);
    return std::make_shared<const Formula>(std::move(x));
  }
  static FormulaPtr zero(std::uint64_t level, TermPtr a) {
    check_level(level);
    Formula x;
    x.kind = FormulaKind::Zero;
    x.level = level;
    x.t1 = std::move(a);
    return std::make_shared<const Formula>(std::move(x));
  }
  static FormulaPtr neg(FormulaPtr a) {
    Formula x;
    x.kind = FormulaKind::Neg;
    x.f = std::move(a);
    return std::make_shared<const Formula>(std::move(x));
  }
  static FormulaPtr binary(FormulaKind k, FormulaPtr a, FormulaPtr b) {
    if (k != FormulaKind::Min && k != FormulaKind::Max && k != FormulaKind::Plus && k != FormulaKind::Minus)
      fail(ErrorKind::InvalidArgument, "not a binary connective");
    Formula x;
    x.kind = k;
    x.f = std::move(a);
    x.g = std::move(b);
    return std::make_shared<const Formula>(std::move(x));
  }
  static FormulaPtr quant(FormulaKind k, std::string v, std::uint64_t level, FormulaPtr body) {
    if (k != FormulaKind::Sup && k != FormulaKind::Inf) fail(ErrorKind::InvalidArgument, "not a quantifier");
    check_level(level);
    Formula x;
    x.kind = k;
    x.var = std::move(v);
    x.level = level;
    x.f = std::move(body);
    return std::make_shared<const Formula>(std::move(x));
  }

 private:
  static void check_level(std::uint64_t level) {
    if (level == 0) fail(ErrorKind::InvalidArgument, "levels start at 1");
  }
};

inline bool same_formula(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FormulaKind::Const: return a.value == b.value;
    case FormulaKind::Dist: return a.level == b.level && same_term(*a.t1, *b.t1) && same_term(*a.t2, *b.t2);
    case FormulaKind::Zero: return a.level == b.level && same_term(*a.t1, *b.t1);
    case FormulaKind::Neg: return same_formula(*a.f, *b.f);
    case FormulaKind::Sup:
    case FormulaKind::Inf: return a.var == b.var && a.level == b.level && same_formula(*a.f, *b.f);
    default: return same_formula(*a.f, *b.f) && same_formula(*a.g, *b.g);
  }
}

inline bool operator==(const Term& a, const Term& b) { return same_term(a, b); }
inline bool operator==(const Formula& a, const Formula& b) { return same_formula(a, b); }

inline bool is_quantifier_free(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Sup:
    case FormulaKind::Inf: return false;
    case FormulaKind::Neg: return is_quantifier_free(*f.f);
    case FormulaKind::Min:
    case FormulaKind::Max:
    case FormulaKind::Plus:
    case FormulaKind::Minus: return is_quantifier_free(*f.f) && is_quantifier_free(*f.g);
    default: return true;
  }
}

inline std::uint64_t max_quantifier_level(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Sup:
    case FormulaKind::Inf: return std::max(f.level, max_quantifier_level(*f.f));
    case FormulaKind::Neg: return max_quantifier_level(*f.f);
    case FormulaKind::Min:
    case FormulaKind::Max:
    case FormulaKind::Plus:
    case FormulaKind::Minus: return std::max(max_quantifier_level(*f.f), max_quantifier_level(*f.g));
    default: return 0;
  }
}

// ---- printing ----

inline std::string to_string(const Term& t) {
  switch (t.kind) {
    case TermKind::Var: return t.name;
    case TermKind::Int: return std::to_string(t.value);
    case TermKind::Rat: return std::to_string(t.rat.num) + "/" + std::to_string(t.rat.den);
    case TermKind::Add: return "(" + to_string(*t.lhs) + " + " + to_string(*t.rhs) + ")";
    case TermKind::Sub: return "(" + to_string(*t.lhs) + " - " + to_string(*t.rhs) + ")";
    case TermKind::Mul: return "(" + to_string(*t.lhs) + " * " + to_string(*t.rhs) + ")";
  }
  return {};
}

inline std::string to_string(const Formula& f) {
  auto lv = [&] { return std::to_string(f.level); };
  auto bin = [&](const char* op) { return std::string(op) + "(" + to_string(*f.f) + ", " + to_string(*f.g) + ")"; };
  switch (f.kind) {
    case FormulaKind::Const:
      if (f.value == 0) return "0";
      if (f.value == 1) return "1";
      return to_string(f.value);
    case FormulaKind::Dist: return "d" + lv() + "(" + to_string(*f.t1) + ", " + to_string(*f.t2) + ")";
    case FormulaKind::Zero: return "zero" + lv() + "(" + to_string(*f.t1) + ")";
    case FormulaKind::Neg: return "neg(" + to_string(*f.f) + ")";
    case FormulaKind::Min: return bin("min");
    case FormulaKind::Max: return bin("max");
    case FormulaKind::Plus: return bin("plus");
    case FormulaKind::Minus: return bin("minus");
    case FormulaKind::Sup: return "sup " + f.var + ":S" + lv() + " . " + to_string(*f.f);
    case FormulaKind::Inf: return "inf " + f.var + ":S" + lv() + " . " + to_string(*f.f);
  }
  return {};
}

}  // namespace locapprox::logic

#pragma once

// Evaluation of closed formulas.
//
// eval_finite works in F_q at unit l. A variable bound by a quantifier
// over S_k sits at level k; a constant sits at the least level whose
// height and ratio bounds hold it; sums, differences and products move to
// the level given by sort_level_for. An atomic formula decodes its term at
// the tracked level, so every decode is exact inside the window 2L^2 < q.
//
// eval_limit is the rational-side reference: quantifiers range over exact
// rationals of height <= H with |x| <= level, terms are exact.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "locapprox/local_metric.hpp"
#include "locapprox/logic/formula.hpp"
#include "locapprox/sampling.hpp"

namespace locapprox::logic {

/// Least k >= 1 with height(c) <= l^k and |c| <= k.
inline std::uint64_t constant_level(const BoundedRational& c, std::uint64_t l) {
  if (l < 2) fail(ErrorKind::ValueTooSmall, "feasible unit l must be >= 2");
  std::uint64_t mag = c.num < 0 ? std::uint64_t(-c.num) : std::uint64_t(c.num);
  std::uint64_t ratio = mag / std::uint64_t(c.den) + (mag % std::uint64_t(c.den) != 0);
  u128 pow = l;
  for (std::uint64_t k = 1;; ++k) {
    if (pow >= c.height() && k >= ratio) return k;
    pow *= l;
    if (pow > std::numeric_limits<std::uint64_t>::max())
      fail(ErrorKind::OverflowAtRequestedLevel, "constant " + to_string(c) + " has no sort level at l=" +
                                                    std::to_string(l));
  }
}

inline BoundedRational term_constant(const Term& t) {
  return t.kind == TermKind::Int ? BoundedRational::make(t.value, 1) : t.rat;
}

inline std::uint64_t op_level(TermKind k, std::uint64_t l, std::uint64_t a, std::uint64_t b) {
  return sort_level_for(k == TermKind::Mul ? SortOp::mul : SortOp::add, l, std::max(a, b)).level;
}

namespace detail {

struct LevelEnv {
  std::vector<std::pair<std::string, std::uint64_t>> vars;

  std::uint64_t at(const std::string& name) const {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      if (it->first == name) return it->second;
    fail(ErrorKind::UnboundVariable, "variable '" + name + "' is not bound");
  }
};

inline std::uint64_t term_level(const Term& t, std::uint64_t l, const LevelEnv& env) {
  switch (t.kind) {
    case TermKind::Var: return env.at(t.name);
    case TermKind::Int:
    case TermKind::Rat: return constant_level(term_constant(t), l);
    default: return op_level(t.kind, l, term_level(*t.lhs, l, env), term_level(*t.rhs, l, env));
  }
}

inline void collect_levels(const Formula& f, std::uint64_t l, LevelEnv& env, std::uint64_t& top) {
  switch (f.kind) {
    case FormulaKind::Const: return;
    case FormulaKind::Dist:
      top = std::max(top, op_level(TermKind::Sub, l, term_level(*f.t1, l, env), term_level(*f.t2, l, env)));
      return;
    case FormulaKind::Zero: top = std::max(top, term_level(*f.t1, l, env)); return;
    case FormulaKind::Neg: collect_levels(*f.f, l, env, top); return;
    case FormulaKind::Sup:
    case FormulaKind::Inf:
      top = std::max(top, f.level);
      env.vars.emplace_back(f.var, f.level);
      collect_levels(*f.f, l, env, top);
      env.vars.pop_back();
      return;
    default:
      collect_levels(*f.f, l, env, top);
      collect_levels(*f.g, l, env, top);
  }
}

}  // namespace detail

/// Highest sort level touched by eval_finite at unit l.
inline std::uint64_t max_tracked_level(const Formula& f, std::uint64_t l) {
  detail::LevelEnv env;
  std::uint64_t top = 1;
  detail::collect_levels(f, l, env, top);
  return top;
}

/// Smallest modulus with 2 L^2 < q for every scale eval_finite uses at unit l.
inline Integer required_modulus(const Formula& f, std::uint64_t l) {
  Integer L = boost::multiprecision::pow(Integer(l), static_cast<unsigned>(max_tracked_level(f, l)));
  return 2 * L * L + 1;
}

namespace detail {

class FiniteEvaluator {
 public:
  FiniteEvaluator(Modulus q, std::uint64_t l, SampleMode mode, std::size_t budget)
      : q_(std::move(q)), l_(l), mode_(mode), budget_(budget) {
    if (!q_.is_field()) fail(ErrorKind::InvalidArgument, "formula evaluation needs a field modulus");
    if (const auto* rs = std::get_if<RandomSample>(&mode_)) {
      if (rs->n == 0) fail(ErrorKind::InvalidArgument, "sample size must be positive");
      gen_.seed(rs->seed);
    }
  }

  Rational eval(const Formula& f) {
    switch (f.kind) {
      case FormulaKind::Const: return f.value;
      case FormulaKind::Dist: {
        auto [a, la] = term(*f.t1);
        auto [b, lb] = term(*f.t2);
        auto r = decode_at(a - b, op_level(TermKind::Sub, l_, la, lb));
        if (!r)
          fail(ErrorKind::TermEscapesSorts, "difference in " + to_string(f) + " is not local at l=" +
                                                std::to_string(l_) + ", q=" + std::to_string(q_.value()));
        return scaled(r->value(), f.level);
      }
      case FormulaKind::Zero: {
        auto [a, la] = term(*f.t1);
        auto r = decode_at(a, la);
        return r ? scaled(r->value(), f.level) : Rational(1);
      }
      case FormulaKind::Neg: return 1 - eval(*f.f);
      case FormulaKind::Min: return std::min(eval(*f.f), eval(*f.g));
      case FormulaKind::Max: return std::max(eval(*f.f), eval(*f.g));
      case FormulaKind::Plus: return std::min(Rational(1), eval(*f.f) + eval(*f.g));
      case FormulaKind::Minus: return std::max(Rational(0), eval(*f.f) - eval(*f.g));
      case FormulaKind::Sup:
      case FormulaKind::Inf: return quantify(f);
    }
    return 0;
  }

 private:
  struct Binding {
    std::string name;
    Residue value;
    std::uint64_t level;
  };

  static Rational scaled(const Rational& r, std::uint64_t level) {
    return std::min(Rational(1), abs(r) / Rational(level));
  }

  DecodeOutcome decode_at(const Residue& z, std::uint64_t level) {
    LocalityScale s(l_, level);
    check_window(s, q_);
    return decode(z, s);
  }

  std::pair<Residue, std::uint64_t> term(const Term& t) {
    switch (t.kind) {
      case TermKind::Var:
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
          if (it->name == t.name) return {it->value, it->level};
        fail(ErrorKind::UnboundVariable, "variable '" + t.name + "' is not bound");
      case TermKind::Int:
      case TermKind::Rat: {
        BoundedRational c = term_constant(t);
        return {encode(c, q_), constant_level(c, l_)};
      }
      default: {
        auto [a, la] = term(*t.lhs);
        auto [b, lb] = term(*t.rhs);
        Residue v = t.kind == TermKind::Add ? a + b : t.kind == TermKind::Sub ? a - b : a * b;
        return {v, op_level(t.kind, l_, la, lb)};
      }
    }
  }

  const std::vector<Residue>& domain(std::uint64_t level) {
    auto it = domains_.find(level);
    if (it == domains_.end()) it = domains_.emplace(level, enumerate_sort(LocalityScale(l_, level), q_, budget_)).first;
    return it->second;
  }

  Rational quantify(const Formula& f) {
    const bool sup = f.kind == FormulaKind::Sup;
    const Rational stop = sup ? Rational(1) : Rational(0);
    const std::vector<Residue>& dom = domain(f.level);
    Rational best = sup ? Rational(0) : Rational(1);
    env_.push_back({f.var, Residue::zero(q_), f.level});
    auto visit = [&](const Residue& x) {
      env_.back().value = x;
      Rational v = eval(*f.f);
      if (sup ? v > best : v < best) best = v;
      return best == stop;
    };
    if (const auto* rs = std::get_if<RandomSample>(&mode_)) {
      std::uniform_int_distribution<std::size_t> pick(0, dom.size() - 1);
      for (std::size_t k = 0; k < rs->n; ++k)
        if (visit(dom[pick(gen_)])) break;
    } else {
      for (const auto& x : dom)
        if (visit(x)) break;
    }
    env_.pop_back();
    return best;
  }

  Modulus q_;
  std::uint64_t l_;
  SampleMode mode_;
  std::size_t budget_;
  std::mt19937_64 gen_;
  std::map<std::uint64_t, std::vector<Residue>> domains_;
  std::vector<Binding> env_;
};

class LimitEvaluator {
 public:
  LimitEvaluator(std::uint64_t height, std::size_t budget) : height_(height), budget_(budget) {
    if (height == 0) fail(ErrorKind::ValueTooSmall, "height bound must be >= 1");
  }

  Rational eval(const Formula& f) {
    switch (f.kind) {
      case FormulaKind::Const: return f.value;
      case FormulaKind::Dist: return scaled(term(*f.t1) - term(*f.t2), f.level);
      case FormulaKind::Zero: return scaled(term(*f.t1), f.level);
      case FormulaKind::Neg: return 1 - eval(*f.f);
      case FormulaKind::Min: return std::min(eval(*f.f), eval(*f.g));
      case FormulaKind::Max: return std::max(eval(*f.f), eval(*f.g));
      case FormulaKind::Plus: return std::min(Rational(1), eval(*f.f) + eval(*f.g));
      case FormulaKind::Minus: return std::max(Rational(0), eval(*f.f) - eval(*f.g));
      case FormulaKind::Sup:
      case FormulaKind::Inf: {
        const bool sup = f.kind == FormulaKind::Sup;
        Rational best = sup ? Rational(0) : Rational(1);
        env_.emplace_back(f.var, Rational(0));
        for (const auto& x : domain(f.level)) {
          env_.back().second = x;
          Rational v = eval(*f.f);
          if (sup ? v > best : v < best) best = v;
          if (best == (sup ? 1 : 0)) break;
        }
        env_.pop_back();
        return best;
      }
    }
    return 0;
  }

 private:
  static Rational scaled(const Rational& r, std::uint64_t level) {
    return std::min(Rational(1), abs(r) / Rational(level));
  }

  Rational term(const Term& t) {
    switch (t.kind) {
      case TermKind::Var:
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
          if (it->first == t.name) return it->second;
        fail(ErrorKind::UnboundVariable, "variable '" + t.name + "' is not bound");
      case TermKind::Int: return Rational(t.value);
      case TermKind::Rat: return t.rat.value();
      case TermKind::Add: return term(*t.lhs) + term(*t.rhs);
      case TermKind::Sub: return term(*t.lhs) - term(*t.rhs);
      case TermKind::Mul: return term(*t.lhs) * term(*t.rhs);
    }
    return 0;
  }

  const std::vector<Rational>& domain(std::uint64_t level) {
    auto it = domains_.find(level);
    if (it == domains_.end()) {
      std::vector<Rational> d;
      for (const auto& r : enumerate_bounded_rationals(height_, level, budget_)) d.push_back(r.value());
      it = domains_.emplace(level, std::move(d)).first;
    }
    return it->second;
  }

  std::uint64_t height_;
  std::size_t budget_;
  std::map<std::uint64_t, std::vector<Rational>> domains_;
  std::vector<std::pair<std::string, Rational>> env_;
};

}  // namespace detail

inline Rational eval_finite(const Formula& f, const Modulus& q, std::uint64_t l, const SampleMode& mode = Exhaustive{},
                            std::size_t budget = default_enumeration_budget) {
  return detail::FiniteEvaluator(q, l, mode, budget).eval(f);
}

inline Rational eval_limit(const Formula& f, std::uint64_t height_bound,
                           std::size_t budget = default_enumeration_budget) {
  return detail::LimitEvaluator(height_bound, budget).eval(f);
}

}  // namespace locapprox::logic

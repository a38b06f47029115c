#pragma once

// Runnable audit of the emerging-metric axioms on a finite sort S_m(F_q).
//
// Distances are computed in the field: the residue x - y is reconstructed
// with the numerator/denominator box that exact bookkeeping assigns to a
// difference of two S_m elements (denominator <= L(L-1), value <= 2m).
// Function values x+y and x*y are reconstructed the same way. Axioms whose
// right-hand side involves distances between function values use the
// decoded values, which the coherence line certifies.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "locapprox/error.hpp"
#include "locapprox/local_metric.hpp"
#include "locapprox/polynomial.hpp"
#include "locapprox/rational.hpp"
#include "locapprox/report.hpp"
#include "locapprox/residue.hpp"
#include "locapprox/sampling.hpp"

namespace locapprox {

struct AxiomResult {
  std::string axiom;
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  std::string worst_witness;
};

struct AuditReport {
  std::vector<AxiomResult> axioms;
  std::size_t sort_size = 0;

  bool passed() const {
    for (const auto& a : axioms)
      if (a.failed) return false;
    return true;
  }

  std::uint64_t violations() const {
    std::uint64_t n = 0;
    for (const auto& a : axioms) n += a.failed;
    return n;
  }

  const AxiomResult& at(const std::string& name) const {
    for (const auto& a : axioms)
      if (a.axiom == name) return a;
    fail(ErrorKind::InvalidArgument, "no axiom named " + name);
  }

  Json to_json() const {
    Json out = Json::object();
    for (const auto& a : axioms)
      out[a.axiom] = {{"checked", a.checked}, {"failed", a.failed}, {"worst_witness", a.worst_witness}};
    return out;
  }

  Table to_table() const {
    Table t{{"axiom", "checked", "failed"}, {}};
    for (const auto& a : axioms) t.add({a.axiom, std::to_string(a.checked), std::to_string(a.failed)});
    return t;
  }

  std::string to_csv() const { return to_table().to_csv(); }
};

namespace detail {

// Tracks one axiom. `margin` is rhs - lhs for inequality axioms; the
// witness with the smallest margin is kept, failures first.
class AxiomTracker {
 public:
  explicit AxiomTracker(std::string name) { result_.axiom = std::move(name); }

  void observe(bool ok, const Rational& margin, const std::function<std::string()>& witness) {
    ++result_.checked;
    if (!ok) ++result_.failed;
    bool better = !have_ || (!ok && worst_ok_) || (ok == worst_ok_ && margin < worst_margin_);
    if (better) {
      have_ = true;
      worst_ok_ = ok;
      worst_margin_ = margin;
      result_.worst_witness = witness();
    }
  }

  void observe(bool ok, const std::function<std::string()>& witness) { observe(ok, Rational(ok ? 1 : -1), witness); }

  AxiomResult result() const { return result_; }

 private:
  AxiomResult result_;
  bool have_ = false;
  bool worst_ok_ = true;
  Rational worst_margin_;
};

inline std::string show(const BoundedRational& r) { return to_string(r); }

// Calls visit(indices) for every k-tuple over [0, n), or for `count`
// uniformly sampled tuples.
inline void for_tuples(std::size_t n, std::size_t k, const SampleMode& mode, std::mt19937_64& gen,
                       const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> idx(k, 0);
  if (std::holds_alternative<RandomSample>(mode)) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t s = 0; s < std::get<RandomSample>(mode).n; ++s) {
      for (auto& i : idx) i = pick(gen);
      visit(idx);
    }
    return;
  }
  if (n == 0) return;
  for (;;) {
    visit(idx);
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < n) break;
      idx[pos] = 0;
      if (pos == 0) return;
    }
    if (k == 0) return;
  }
}

}  // namespace detail

/// Audits axioms on the given points of S_m(F_q). Points must lie in S_m.
inline AuditReport audit_points(const std::vector<BoundedRational>& points, const LocalityScale& s, const Modulus& q,
                                const SampleMode& mode, const std::vector<Polynomial>& predicates) {
  if (!q.is_field()) fail(ErrorKind::InvalidArgument, "metric audit runs over a field modulus");
  check_window(s, q);
  if (const auto* rs = std::get_if<RandomSample>(&mode); rs && rs->n == 0)
    fail(ErrorKind::InvalidArgument, "random sample size must be positive");
  for (const auto& p : points)
    if (p.height() > s.L() || !ratio_within(p, s.m()))
      fail(ErrorKind::InvalidArgument, "point " + to_string(p) + " is not in S_m");

  const std::size_t n = points.size();
  const std::uint64_t L = s.L();
  const std::uint64_t m = s.m();
  const u128 lcm_bound = L >= 2 ? u128(L) * (L - 1) : u128(1);
  auto make_box = [&](u128 num, u128 den) {
    if (num > UINT64_MAX || den > UINT64_MAX) fail(ErrorKind::ScaleTooLargeForModulus, "audit box exceeds 64 bits");
    HeightBox b{static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den)};
    if (!b.fits(q.value()))
      fail(ErrorKind::ScaleTooLargeForModulus, "reconstruction box (" + std::to_string(b.num_bound) + ", " +
                                                   std::to_string(b.den_bound) + ") does not fit q=" +
                                                   std::to_string(q.value()));
    return b;
  };
  const HeightBox diff_box = make_box(2 * u128(m) * lcm_bound, lcm_bound);
  const HeightBox sum_box = diff_box;
  const HeightBox prod_box = make_box(u128(m) * m * L * L, u128(L) * L);

  std::vector<Residue> res;
  res.reserve(n);
  for (const auto& p : points) res.push_back(encode(p, q));

  std::mt19937_64 gen(std::holds_alternative<RandomSample>(mode) ? std::get<RandomSample>(mode).seed : 0);
  AuditReport report;
  report.sort_size = n;

  // Field distance table and its coherence with |r_i - r_j|.
  detail::AxiomTracker coherence("metric_coherence");
  std::vector<Rational> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      DecodeOutcome dec = reconstruct((res[i] - res[j]).value(), q.value(), diff_box);
      Rational exact = abs(points[i].value() - points[j].value());
      bool ok = dec && abs(dec->value()) == exact;
      d[i * n + j] = dec ? abs(dec->value()) : exact;
      coherence.observe(ok, [&] {
        return "x=" + detail::show(points[i]) + " y=" + detail::show(points[j]) +
               " field=" + (dec ? detail::show(*dec) : std::string("NotLocal")) + " exact=" + to_string(exact);
      });
    }
  }
  auto dist_at = [&](std::size_t i, std::size_t j) -> const Rational& { return d[i * n + j]; };

  detail::AxiomTracker symmetry("symmetry");
  detail::AxiomTracker identity("identity_of_indiscernibles");
  detail::AxiomTracker diameter("diameter_bound");
  detail::for_tuples(n, 2, mode, gen, [&](const std::vector<std::size_t>& t) {
    std::size_t i = t[0], j = t[1];
    const Rational& dij = dist_at(i, j);
    auto w = [&] {
      return "x=" + detail::show(points[i]) + " y=" + detail::show(points[j]) + " d=" + to_string(dij);
    };
    symmetry.observe(dij == dist_at(j, i), w);
    identity.observe(dij != 0 || res[i] == res[j], w);
    diameter.observe(dij <= Rational(m), Rational(m) - dij, w);
  });

  detail::AxiomTracker triangle("triangle_inequality");
  detail::for_tuples(n, 3, mode, gen, [&](const std::vector<std::size_t>& t) {
    const Rational& lhs = dist_at(t[0], t[2]);
    Rational rhs = dist_at(t[0], t[1]) + dist_at(t[1], t[2]);
    triangle.observe(lhs <= rhs, rhs - lhs, [&] {
      return "x1=" + detail::show(points[t[0]]) + " x2=" + detail::show(points[t[1]]) +
             " x3=" + detail::show(points[t[2]]) + " d13=" + to_string(lhs) + " d12+d23=" + to_string(rhs);
    });
  });

  // Function tables for + and *, decoded from the field.
  detail::AxiomTracker homomorphism("partial_homomorphism");
  detail::AxiomTracker closure("sort_closure");
  struct OpTable {
    SortOp op;
    const char* name;
    std::vector<Rational> value;
  };
  std::vector<OpTable> ops{{SortOp::add, "+", {}}, {SortOp::mul, "*", {}}};
  for (auto& op : ops) {
    LevelBound lb = sort_level_for(op.op, s.l(), m);
    op.value.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        bool is_add = op.op == SortOp::add;
        Residue f = is_add ? res[i] + res[j] : res[i] * res[j];
        Rational exact = is_add ? points[i].value() + points[j].value() : points[i].value() * points[j].value();
        DecodeOutcome dec = reconstruct(f.value(), q.value(), is_add ? sum_box : prod_box);
        bool ok = dec && dec->value() == exact;
        op.value[i * n + j] = exact;
        homomorphism.observe(ok, [&] {
          return "x=" + detail::show(points[i]) + " " + op.name + " y=" + detail::show(points[j]) +
                 " decoded=" + (dec ? detail::show(*dec) : std::string("NotLocal")) + " exact=" + to_string(exact);
        });
        bool in_level = height(exact) <= Integer(lb.height_bound) && abs(exact) <= Rational(lb.level);
        closure.observe(in_level, [&] {
          return std::string(op.name) + " of " + detail::show(points[i]) + ", " + detail::show(points[j]) +
                 " = " + to_string(exact) + " outside S_" + std::to_string(lb.level);
        });
      }
    }
  }

  // Uniform continuity with delta = eps/2 for + and eps/(2m+1) for *.
  detail::AxiomTracker continuity("uniform_continuity");
  const std::vector<Rational> epsilons{Rational(1), Rational(1, 2), Rational(1, 4)};
  for (const auto& op : ops) {
    for (const auto& eps : epsilons) {
      Rational delta = op.op == SortOp::add ? eps / 2 : eps / (2 * m + 1);
      detail::for_tuples(n, 4, mode, gen, [&](const std::vector<std::size_t>& t) {
        std::size_t x1 = t[0], x2 = t[1], y1 = t[2], y2 = t[3];
        if (!(dist_at(x1, y1) < delta && dist_at(x2, y2) < delta)) return;
        Rational df = abs(op.value[x1 * n + x2] - op.value[y1 * n + y2]);
        continuity.observe(df < eps, eps - df, [&] {
          return std::string("f=") + op.name + " eps=" + to_string(eps) + " x=(" + detail::show(points[x1]) + "," +
                 detail::show(points[x2]) + ") y=(" + detail::show(points[y1]) + "," + detail::show(points[y2]) +
                 ") d(f)=" + to_string(df);
        });
      });
    }
  }

  // Openness of {p != 0}: around x0 with p(x0) != 0 in F_q, every x within
  // delta = |p(x0)| / Lip(p) also has p(x) != 0.
  detail::AxiomTracker openness("predicate_openness");
  for (const auto& p : predicates) {
    const std::size_t k = p.arity();
    Rational lip = p.lipschitz_bound(Rational(m));
    detail::for_tuples(n, 2 * k, mode, gen, [&](const std::vector<std::size_t>& t) {
      std::vector<Residue> x0, x;
      std::vector<Rational> r0;
      for (std::size_t i = 0; i < k; ++i) {
        x0.push_back(res[t[i]]);
        r0.push_back(points[t[i]].value());
        x.push_back(res[t[k + i]]);
      }
      if (p.eval(x0, q).is_zero()) return;
      Rational v0 = abs(p.eval(r0));
      Rational far = 0;
      for (std::size_t i = 0; i < k; ++i) far = std::max(far, dist_at(t[i], t[k + i]));
      if (lip != 0 && !(far * lip < v0)) return;
      bool ok = !p.eval(x, q).is_zero();
      openness.observe(ok, [&] {
        std::string w = "p=" + p.to_string() + " x0=(";
        for (std::size_t i = 0; i < k; ++i) w += (i ? "," : "") + detail::show(points[t[i]]);
        w += ") x=(";
        for (std::size_t i = 0; i < k; ++i) w += (i ? "," : "") + detail::show(points[t[k + i]]);
        return w + ")";
      });
    });
  }

  for (auto* tr : {&coherence, &symmetry, &identity, &triangle, &diameter, &homomorphism, &closure, &continuity,
                   &openness})
    report.axioms.push_back(tr->result());
  return report;
}

/// Audits the emerging-metric axioms on S_m(F_q) at scale s.
inline AuditReport audit_metric(const LocalityScale& s, const Modulus& q, const SampleMode& mode,
                                const std::vector<Polynomial>& predicates = standard_predicates(),
                                std::size_t budget = default_enumeration_budget) {
  check_window(s, q);
  return audit_points(enumerate_sort_rationals(s, budget), s, q, mode, predicates);
}

}  // namespace locapprox

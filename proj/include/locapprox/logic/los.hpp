#pragma once

// Ladder scans: evaluate one formula at growing units l_k over primes q_k
// chosen inside the window, and compare each value with the rational-side
// value at a fixed height.

#include <cstdint>
#include <string>
#include <vector>

#include "locapprox/logic/eval.hpp"
#include "locapprox/report.hpp"

namespace locapprox::logic {

struct LadderRung {
  Modulus q;
  LocalityScale s;
};

/// Rungs with strictly increasing primes, each inside its window.
class PrimeLadder {
 public:
  PrimeLadder() = default;

  static PrimeLadder make(std::vector<LadderRung> rungs) {
    if (rungs.empty()) fail(ErrorKind::InvalidArgument, "ladder needs at least one rung");
    for (std::size_t k = 0; k < rungs.size(); ++k) {
      if (!rungs[k].q.is_field()) fail(ErrorKind::InvalidArgument, "ladder moduli must be prime fields");
      check_window(rungs[k].s, rungs[k].q);
      if (k && rungs[k].q.value() <= rungs[k - 1].q.value())
        fail(ErrorKind::InvalidArgument, "ladder primes must increase strictly");
    }
    PrimeLadder p;
    p.rungs_ = std::move(rungs);
    return p;
  }

  /// One rung per unit: the least prime above both the formula's window
  /// and the previous rung. m is the formula's top quantifier level.
  static PrimeLadder for_formula(const Formula& f, const std::vector<std::uint64_t>& units) {
    std::uint64_t m = std::max<std::uint64_t>(1, max_quantifier_level(f));
    std::vector<LadderRung> rungs;
    std::uint64_t prev = 0;
    for (std::uint64_t l : units) {
      LocalityScale s(l, m);
      Integer need = std::max(required_modulus(f, l), Integer(min_modulus_for(s)));
      need = std::max(need, Integer(prev) + 1);
      if (need > Integer(std::numeric_limits<std::uint64_t>::max()))
        fail(ErrorKind::RangeExhausted, "window for l=" + std::to_string(l) + " needs q > " + need.str() +
                                            ", beyond 64 bits");
      prev = next_prime(need.convert_to<std::uint64_t>());
      rungs.push_back({field_modulus(prev), s});
    }
    return make(std::move(rungs));
  }

  const std::vector<LadderRung>& rungs() const { return rungs_; }

 private:
  std::vector<LadderRung> rungs_;
};

/// start, start*growth, ... (count terms).
inline std::vector<std::uint64_t> geometric_units(std::uint64_t start, std::uint64_t growth, std::size_t count) {
  if (start < 2 || growth < 2 || count == 0)
    fail(ErrorKind::InvalidArgument, "ladder needs start >= 2, growth >= 2, count >= 1");
  std::vector<std::uint64_t> out{start};
  while (out.size() < count) {
    if (out.back() > std::numeric_limits<std::uint64_t>::max() / growth)
      fail(ErrorKind::Overflow, "ladder unit exceeds 64 bits");
    out.push_back(out.back() * growth);
  }
  return out;
}

struct LosRow {
  std::uint64_t q, l, m;
  Rational value;
  Rational gap;  // |value - limit|
};

struct LosReport {
  std::string formula;
  std::uint64_t limit_height = 0;
  Rational limit;
  std::vector<LosRow> rows;
  std::vector<Rational> differences;  // value_{k+1} - value_k
  bool non_convergent = false;

  Table to_table() const {
    Table t{{"q", "l", "m", "value_num", "value_den", "gap_num", "gap_den"}, {}};
    for (const auto& r : rows)
      t.add({std::to_string(r.q), std::to_string(r.l), std::to_string(r.m),
             boost::multiprecision::numerator(r.value).str(), boost::multiprecision::denominator(r.value).str(),
             boost::multiprecision::numerator(r.gap).str(), boost::multiprecision::denominator(r.gap).str()});
    return t;
  }

  Json summary() const {
    Json diffs = Json::array();
    for (const auto& d : differences) diffs.push_back(to_string(d));
    return {{"formula", formula},
            {"limit_height", limit_height},
            {"limit", to_string(limit)},
            {"differences", diffs},
            {"non_convergent", non_convergent}};
  }
};

/// Gaps converge when the last one is zero, or when they never grow and the
/// last is below the first.
inline bool gaps_converge(const std::vector<LosRow>& rows) {
  if (rows.empty()) return true;
  if (rows.back().gap == 0) return true;
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (rows[k].gap > rows[k - 1].gap) return false;
  return rows.back().gap < rows.front().gap;
}

inline LosReport los_scan(const Formula& f, const PrimeLadder& ladder, std::uint64_t limit_height,
                          const SampleMode& mode = Exhaustive{}, std::size_t budget = default_enumeration_budget) {
  LosReport rep;
  rep.formula = to_string(f);
  rep.limit_height = limit_height;
  rep.limit = eval_limit(f, limit_height, budget);
  for (const auto& r : ladder.rungs()) {
    Rational v = eval_finite(f, r.q, r.s.l(), mode, budget);
    if (!rep.rows.empty()) rep.differences.push_back(v - rep.rows.back().value);
    rep.rows.push_back({r.q.value(), r.s.l(), r.s.m(), v, abs(v - rep.limit)});
  }
  rep.non_convergent = !gaps_converge(rep.rows);
  return rep;
}

}  // namespace locapprox::logic

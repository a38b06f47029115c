#pragma once

// Rational points of an affine variety seen through S_m(F_q): tuples of
// sort elements that vanish mod q are decoded and kept when they vanish
// over Q as well. The rest are reported as spurious.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "locapprox/error.hpp"
#include "locapprox/local_metric.hpp"
#include "locapprox/polynomial.hpp"
#include "locapprox/rational.hpp"
#include "locapprox/report.hpp"

namespace locapprox {

using RationalPoint = std::vector<BoundedRational>;

struct VarietyReport {
  std::vector<std::string> vars;
  std::vector<RationalPoint> points;  // ascending lexicographic order
  std::uint64_t scanned = 0;
  std::uint64_t zero_mod_q = 0;
  std::uint64_t spurious = 0;
  bool sampled = false;
  Integer value_height;  // max height of the polynomial values over the scanned tuples
  bool height_window_ok = false;  // 2 * value_height^2 < q

  bool contains(const RationalPoint& p) const { return std::binary_search(points.begin(), points.end(), p); }

  Table to_table() const {
    Table t{vars, {}};
    for (const auto& p : points) {
      std::vector<std::string> row;
      for (const auto& c : p) row.push_back(to_string(c));
      t.add(std::move(row));
    }
    return t;
  }

  Json summary() const {
    return {{"scanned", scanned},
            {"zero_mod_q", zero_mod_q},
            {"points", points.size()},
            {"spurious", spurious},
            {"sampled", sampled},
            {"value_height", value_height.str()},
            {"height_window_ok", height_window_ok}};
  }
};

/// Scans S_m^k exhaustively when it has at most `budget` tuples; otherwise
/// draws `budget` uniform tuples if a seed is given, else fails.
inline VarietyReport variety_points(const PolySystem& v, const Modulus& q, const LocalityScale& s,
                                    std::size_t budget = default_enumeration_budget,
                                    std::optional<std::uint64_t> seed = std::nullopt) {
  if (!q.is_field()) fail(ErrorKind::InvalidArgument, "variety scan runs over a field modulus");
  if (v.vars.empty() || v.polys.empty()) fail(ErrorKind::InvalidArgument, "empty polynomial system");
  check_window(s, q);
  const std::vector<BoundedRational> sort = enumerate_sort_rationals(s, budget);
  std::vector<Residue> enc;
  for (const auto& r : sort) enc.push_back(encode(r, q));

  const std::size_t k = v.vars.size();
  const std::size_t n = sort.size();
  long double total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= static_cast<long double>(n);
  VarietyReport rep;
  rep.vars = v.vars;
  rep.sampled = total > static_cast<long double>(budget);
  if (rep.sampled && !seed)
    fail(ErrorKind::EnumerationBudgetExceeded, "S_m^" + std::to_string(k) + " has about " +
                                                   std::to_string(static_cast<double>(total)) +
                                                   " tuples; raise the budget or pass a seed to sample");

  std::set<RationalPoint> found;
  std::vector<std::size_t> idx(k, 0);
  std::vector<Residue> x(k, Residue::zero(q));
  std::vector<Rational> xr(k);
  auto visit = [&] {
    ++rep.scanned;
    for (std::size_t i = 0; i < k; ++i) {
      x[i] = enc[idx[i]];
      xr[i] = sort[idx[i]].value();
    }
    bool mod_zero = true, exact_zero = true;
    for (const auto& p : v.polys) {
      Rational val = p.eval(xr);
      Integer h = height(val);
      if (h > rep.value_height) rep.value_height = h;
      if (val != 0) exact_zero = false;
      if (mod_zero && !p.eval(x, q).is_zero()) mod_zero = false;
    }
    if (!mod_zero) return;
    ++rep.zero_mod_q;
    if (!exact_zero) {
      ++rep.spurious;
      return;
    }
    RationalPoint pt;
    for (std::size_t i = 0; i < k; ++i) pt.push_back(sort[idx[i]]);
    found.insert(std::move(pt));
  };

  if (rep.sampled) {
    std::mt19937_64 gen(*seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t t = 0; t < budget; ++t) {
      for (auto& i : idx) i = pick(gen);
      visit();
    }
  } else {
    for (;;) {
      visit();
      std::size_t pos = k;
      while (pos > 0 && ++idx[pos - 1] == n) idx[--pos] = 0;
      if (pos == 0) break;
    }
  }
  rep.points.assign(found.begin(), found.end());
  rep.height_window_ok = 2 * rep.value_height * rep.value_height < Integer(q.value());
  return rep;
}

}  // namespace locapprox

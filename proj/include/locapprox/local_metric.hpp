#pragma once

// The emerging metric on F_q. A residue is "local" at scale (l, m) when it
// equals k1 * k2^-1 for a pair with |k1| <= L, 1 <= k2 <= L, L = l^m. The
// pair is recovered by rational reconstruction, which is unique as long as
// 2 L^2 < q. Norm and distance are read off the recovered pair, so they are
// exact rationals.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "locapprox/error.hpp"
#include "locapprox/rational.hpp"
#include "locapprox/residue.hpp"

namespace locapprox {

/// Feasible unit l and sort level m, with L = l^m computed exactly.
class LocalityScale {
 public:
  LocalityScale(std::uint64_t l, std::uint64_t m) : l_(l), m_(m) {
    if (l < 2) fail(ErrorKind::ValueTooSmall, "feasible unit l must be >= 2");
    if (m < 1) fail(ErrorKind::ValueTooSmall, "sort level m must be >= 1");
    u128 acc = 1;
    for (std::uint64_t i = 0; i < m; ++i) {
      acc *= l;
      if (acc > std::numeric_limits<std::uint64_t>::max())
        fail(ErrorKind::Overflow, std::to_string(l) + "^" + std::to_string(m) + " exceeds 64 bits");
    }
    bound_ = static_cast<std::uint64_t>(acc);
  }

  std::uint64_t l() const { return l_; }
  std::uint64_t m() const { return m_; }
  /// Height bound L = l^m.
  std::uint64_t L() const { return bound_; }

  friend bool operator==(const LocalityScale&, const LocalityScale&) = default;

 private:
  std::uint64_t l_;
  std::uint64_t m_;
  std::uint64_t bound_;
};

/// Numerator and denominator bounds for reconstruction; unique when
/// 2 * num * den < q.
struct HeightBox {
  std::uint64_t num_bound;
  std::uint64_t den_bound;

  bool fits(std::uint64_t q) const { return u128(num_bound) * den_bound <= u128((q - 1) / 2); }
};

inline HeightBox box_of(const LocalityScale& s) { return {s.L(), s.L()}; }

inline bool window_ok(const LocalityScale& s, const Modulus& q) { return box_of(s).fits(q.value()); }

inline void check_window(const LocalityScale& s, const Modulus& q) {
  if (!window_ok(s, q))
    fail(ErrorKind::ScaleTooLargeForModulus,
         "2*L^2 >= q for L=" + std::to_string(s.L()) + ", q=" + std::to_string(q.value()));
}

/// Smallest modulus value admitting scale s: 2 L^2 + 1.
inline u128 min_modulus_for(const LocalityScale& s) { return 2 * u128(s.L()) * s.L() + 1; }

using DecodeOutcome = std::optional<BoundedRational>;

/// k1 * k2^-1 mod q. Works for ring moduli whenever k2 is a unit.
inline Residue encode(const BoundedRational& r, const Modulus& q) {
  Residue den = Residue::embed(r.den, q);
  if (!den.is_unit())
    fail(ErrorKind::DenominatorNotUnit,
         "denominator " + std::to_string(r.den) + " is not a unit mod " + std::to_string(q.value()));
  return Residue::embed(r.num, q) * den.inv();
}

/// encode for arbitrary-size rationals.
inline Residue encode_exact(const Rational& r, const Modulus& q) {
  auto reduce = [&](const Integer& k) {
    Integer m = k % q.value();
    if (m < 0) m += q.value();
    return Residue(q, m.convert_to<std::uint64_t>());
  };
  Residue den = reduce(boost::multiprecision::denominator(r));
  if (!den.is_unit())
    fail(ErrorKind::DenominatorNotUnit, "denominator of " + to_string(r) + " is not a unit mod " + std::to_string(q.value()));
  return reduce(boost::multiprecision::numerator(r)) * den.inv();
}

/// Rational reconstruction: runs the extended Euclidean remainder sequence
/// on (q, z) and stops at the first remainder <= box.num_bound. The cofactor
/// of that step gives the denominator; it must be within box.den_bound and
/// coprime to the remainder. The caller guarantees the box fits q.
inline DecodeOutcome reconstruct(std::uint64_t z, std::uint64_t q, const HeightBox& box) {
  i128 r0 = q, r1 = z % q;
  i128 t0 = 0, t1 = 1;
  const i128 nb = box.num_bound;
  while (r1 > nb) {
    i128 quo = r0 / r1;
    i128 r2 = r0 - quo * r1;
    r0 = r1;
    r1 = r2;
    i128 t2 = t0 - quo * t1;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0) return std::nullopt;
  i128 den = t1 < 0 ? -t1 : t1;
  if (den > i128(box.den_bound)) return std::nullopt;
  i128 num = t1 < 0 ? -r1 : r1;
  if (std::gcd(static_cast<std::uint64_t>(r1), static_cast<std::uint64_t>(den)) != 1) return std::nullopt;
  return BoundedRational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

inline void require_field(const Residue& z) {
  if (!z.modulus().is_field())
    fail(ErrorKind::InvalidArgument, "decode works in F_q; project ring elements first (decode_ring)");
}

inline DecodeOutcome decode(const Residue& z, const LocalityScale& s) {
  require_field(z);
  check_window(s, z.modulus());
  return reconstruct(z.value(), z.n(), box_of(s));
}

/// Exact test |k1| <= ratio * k2.
inline bool ratio_within(const BoundedRational& r, std::uint64_t ratio) {
  u128 n = r.num < 0 ? u128(-i128(r.num)) : u128(r.num);
  return n <= u128(ratio) * u128(r.den);
}

/// z in S_m(F_q): local at height L and |k1|/k2 <= m.
inline bool in_sort(const Residue& z, const LocalityScale& s) {
  DecodeOutcome d = decode(z, s);
  return d && ratio_within(*d, s.m());
}

inline Rational norm(const Residue& z, const LocalityScale& s) {
  DecodeOutcome d = decode(z, s);
  if (!d) fail(ErrorKind::NotLocal, std::to_string(z.value()) + " is not local at L=" + std::to_string(s.L()));
  return abs(d->value());
}

inline Rational dist(const Residue& z1, const Residue& z2, const LocalityScale& s) { return norm(z1 - z2, s); }

/// Ring-mode decode through the reduction Z_n -> F_q.
inline DecodeOutcome decode_ring(const Residue& k, const Modulus& q, const LocalityScale& s) {
  return decode(project_ring_to_field(k, q), s);
}

/// Pseudo-metric on Z_n pulled back from F_q.
inline Rational dist_ring(const Residue& x, const Residue& y, const Modulus& q, const LocalityScale& s) {
  return dist(project_ring_to_field(x, q), project_ring_to_field(y, q), s);
}

enum class SortOp { add, mul };

struct LevelBound {
  std::uint64_t level;         // sort index containing the result
  std::uint64_t height_bound;  // l^level
  std::uint64_t ratio_bound;   // exact |value| bound: 2m for +, m^2 for *
};

/// Level guaranteed to hold op(x, y) for x, y in S_m at unit l. Sums have
/// numerators below 2L^2 and denominators below L^2; products have both
/// below L^2. The level is the least k with l^k covering the height bound
/// and k covering the ratio bound.
inline LevelBound sort_level_for(SortOp op, std::uint64_t l, std::uint64_t m) {
  LocalityScale s(l, m);
  u128 L = s.L();
  u128 height_req = op == SortOp::add ? 2 * L * L : L * L;
  u128 ratio_req = op == SortOp::add ? u128(2) * m : u128(m) * m;
  if (height_req > std::numeric_limits<std::uint64_t>::max() || ratio_req > std::numeric_limits<std::uint64_t>::max())
    fail(ErrorKind::OverflowAtRequestedLevel, "level bound for m=" + std::to_string(m) + " exceeds 64 bits");
  std::uint64_t k = 0;
  u128 pow = 1;
  while (pow < height_req) {
    pow *= l;
    ++k;
  }
  std::uint64_t level = std::max<std::uint64_t>(k, static_cast<std::uint64_t>(ratio_req));
  pow = 1;
  for (std::uint64_t i = 0; i < level; ++i) {
    pow *= l;
    if (pow > std::numeric_limits<std::uint64_t>::max())
      fail(ErrorKind::OverflowAtRequestedLevel,
           "l^" + std::to_string(level) + " exceeds 64 bits for l=" + std::to_string(l));
  }
  return {level, static_cast<std::uint64_t>(pow), static_cast<std::uint64_t>(ratio_req)};
}

constexpr std::size_t default_enumeration_budget = 20'000'000;

/// Reduced rationals with |k1| <= height, 1 <= k2 <= height and |k1| <= ratio*k2,
/// in ascending order.
inline std::vector<BoundedRational> enumerate_bounded_rationals(std::uint64_t height, std::uint64_t ratio,
                                                                std::size_t budget = default_enumeration_budget) {
  if (height > std::uint64_t(std::numeric_limits<std::int64_t>::max()))
    fail(ErrorKind::Overflow, "height bound exceeds signed 64-bit range");
  std::vector<BoundedRational> out;
  const auto h = static_cast<std::int64_t>(height);
  for (std::int64_t k2 = 1; k2 <= h; ++k2) {
    u128 cap = u128(ratio) * u128(k2);
    std::int64_t top = cap < u128(h) ? static_cast<std::int64_t>(cap) : h;
    for (std::int64_t k1 = -top; k1 <= top; ++k1) {
      if (std::gcd(k1, k2) != 1) continue;
      if (out.size() >= budget)
        fail(ErrorKind::EnumerationBudgetExceeded,
             "sort enumeration exceeds budget of " + std::to_string(budget) + " elements");
      out.push_back({k1, k2});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Rational side of S_m at scale s.
inline std::vector<BoundedRational> enumerate_sort_rationals(const LocalityScale& s,
                                                             std::size_t budget = default_enumeration_budget) {
  return enumerate_bounded_rationals(s.L(), s.m(), budget);
}

/// Encodings of S_m in ascending rational order.
inline std::vector<Residue> enumerate_sort(const LocalityScale& s, const Modulus& q,
                                           std::size_t budget = default_enumeration_budget) {
  check_window(s, q);
  std::vector<Residue> out;
  for (const auto& r : enumerate_sort_rationals(s, budget)) out.push_back(encode(r, q));
  return out;
}

}  // namespace locapprox

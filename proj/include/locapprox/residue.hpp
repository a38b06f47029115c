#pragma once

// Exact arithmetic in F_q and Z_n on 64-bit moduli, the Gaussian pair ring
// R x R with (a1,b1)(a2,b2) = (a1a2 - b1b2, a1b2 + b1a2), primality, and the
// reduction map Z_n -> F_q for q | n.

#include <array>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

#include "locapprox/error.hpp"
#include "locapprox/rational.hpp"

namespace locapprox {

namespace detail {

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= m - b ? a - (m - b) : a + b;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(u128(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Least non-negative residue of a signed 128-bit value.
inline std::uint64_t reduce_signed(i128 v, std::uint64_t m) {
  i128 r = v % i128(m);
  if (r < 0) r += i128(m);
  return static_cast<std::uint64_t>(r);
}

/// Returns (g, x) with a*x == g (mod m), g = gcd(a, m).
inline std::pair<std::uint64_t, i128> inverse_with_gcd(std::uint64_t a, std::uint64_t m) {
  i128 r0 = m, r1 = a % m;
  i128 t0 = 0, t1 = 1;
  while (r1 != 0) {
    i128 q = r0 / r1;
    i128 r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    i128 t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  return {static_cast<std::uint64_t>(r0), t0};
}

}  // namespace detail

/// Deterministic Miller-Rabin. The first twelve primes as witnesses are
/// sufficient for every n < 3.3e24, which covers the full 64-bit range.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> witnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : witnesses) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : witnesses) {
    std::uint64_t x = detail::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Smallest prime >= lower.
inline std::uint64_t next_prime(std::uint64_t lower) {
  if (lower < 2) fail(ErrorKind::ValueTooSmall, "next_prime requires lower >= 2");
  // 2^64 - 59 is the largest 64-bit prime.
  constexpr std::uint64_t largest = std::numeric_limits<std::uint64_t>::max() - 58;
  if (lower > largest) fail(ErrorKind::RangeExhausted, "no 64-bit prime >= " + std::to_string(lower));
  for (std::uint64_t n = lower;; ++n) {
    if (is_prime(n)) return n;
  }
}

enum class ModulusMode { field, ring };

class Modulus {
 public:
  std::uint64_t value() const { return value_; }
  ModulusMode mode() const { return mode_; }
  bool is_field() const { return mode_ == ModulusMode::field; }

  friend bool operator==(const Modulus&, const Modulus&) = default;

  friend Modulus make_modulus(std::uint64_t value, ModulusMode mode);

 private:
  Modulus(std::uint64_t v, ModulusMode m) : value_(v), mode_(m) {}
  std::uint64_t value_;
  ModulusMode mode_;
};

inline Modulus make_modulus(std::uint64_t value, ModulusMode mode) {
  if (value < 2) fail(ErrorKind::ValueTooSmall, "modulus must be >= 2, got " + std::to_string(value));
  if (mode == ModulusMode::field && !is_prime(value))
    fail(ErrorKind::CompositeInFieldMode, std::to_string(value) + " is not prime");
  return Modulus(value, mode);
}

inline Modulus field_modulus(std::uint64_t q) { return make_modulus(q, ModulusMode::field); }
inline Modulus ring_modulus(std::uint64_t n) { return make_modulus(n, ModulusMode::ring); }

inline std::ostream& operator<<(std::ostream& os, const Modulus& m) {
  return os << (m.is_field() ? "F_" : "Z_") << m.value();
}

/// Element of F_q or Z_n in canonical form 0 <= value < modulus.
class Residue {
 public:
  Residue(const Modulus& m, std::uint64_t v) : mod_(m), value_(v % m.value()) {}

  /// Integer embedding k -> k mod n.
  static Residue embed(i128 k, const Modulus& m) { return Residue(m, detail::reduce_signed(k, m.value())); }

  static Residue zero(const Modulus& m) { return Residue(m, 0); }
  static Residue one(const Modulus& m) { return Residue(m, 1); }

  std::uint64_t value() const { return value_; }
  const Modulus& modulus() const { return mod_; }
  std::uint64_t n() const { return mod_.value(); }

  bool is_zero() const { return value_ == 0; }
  bool is_unit() const { return detail::inverse_with_gcd(value_, n()).first == 1; }

  Residue inv() const {
    auto [g, x] = detail::inverse_with_gcd(value_, n());
    if (g != 1)
      fail(ErrorKind::NonUnit, std::to_string(value_) + " is not invertible mod " + std::to_string(n()));
    return Residue(mod_, detail::reduce_signed(x, n()));
  }

  Residue pow(std::uint64_t e) const { return Residue(mod_, detail::pow_mod(value_, e, n())); }

  Residue operator-() const { return Residue(mod_, value_ == 0 ? 0 : n() - value_); }

  friend Residue operator+(const Residue& a, const Residue& b) {
    check_same(a, b);
    return Residue(a.mod_, detail::add_mod(a.value_, b.value_, a.n()));
  }
  friend Residue operator-(const Residue& a, const Residue& b) {
    check_same(a, b);
    return Residue(a.mod_, detail::sub_mod(a.value_, b.value_, a.n()));
  }
  friend Residue operator*(const Residue& a, const Residue& b) {
    check_same(a, b);
    return Residue(a.mod_, detail::mul_mod(a.value_, b.value_, a.n()));
  }
  Residue& operator+=(const Residue& o) { return *this = *this + o; }
  Residue& operator-=(const Residue& o) { return *this = *this - o; }
  Residue& operator*=(const Residue& o) { return *this = *this * o; }

  friend bool operator==(const Residue& a, const Residue& b) {
    return a.mod_ == b.mod_ && a.value_ == b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Residue& r) { return os << r.value_; }

 private:
  static void check_same(const Residue& a, const Residue& b) {
    if (!(a.mod_ == b.mod_))
      fail(ErrorKind::ModulusMismatch,
           "moduli " + std::to_string(a.n()) + " and " + std::to_string(b.n()) + " differ");
  }

  Modulus mod_;
  std::uint64_t value_;
};

inline Residue res_add(const Residue& a, const Residue& b) { return a + b; }
inline Residue res_sub(const Residue& a, const Residue& b) { return a - b; }
inline Residue res_mul(const Residue& a, const Residue& b) { return a * b; }
inline Residue res_inv(const Residue& a) { return a.inv(); }

/// s: Z_n -> F_q, k -> k mod q. Requires q prime (field mode) and q | n.
inline Residue project_ring_to_field(const Residue& k, const Modulus& q) {
  if (!q.is_field()) fail(ErrorKind::InvalidArgument, "projection target must be a field modulus");
  if (k.n() % q.value() != 0)
    fail(ErrorKind::NotADivisor, std::to_string(q.value()) + " does not divide " + std::to_string(k.n()));
  return Residue(q, k.value() % q.value());
}

/// Element (re, im) of R x R with the multiplication of Z[i]. Always
/// treated as a ring: for q = 1 mod 4 it has zero divisors.
class GaussianResidue {
 public:
  GaussianResidue(Residue re, Residue im) : re_(std::move(re)), im_(std::move(im)) {
    if (!(re_.modulus() == im_.modulus())) fail(ErrorKind::ModulusMismatch, "gaussian components differ");
  }
  explicit GaussianResidue(Residue re) : re_(re), im_(Residue::zero(re.modulus())) {}

  static GaussianResidue zero(const Modulus& m) { return {Residue::zero(m), Residue::zero(m)}; }
  static GaussianResidue one(const Modulus& m) { return {Residue::one(m), Residue::zero(m)}; }

  const Residue& re() const { return re_; }
  const Residue& im() const { return im_; }
  const Modulus& modulus() const { return re_.modulus(); }

  GaussianResidue conj() const { return {re_, -im_}; }
  Residue norm() const { return re_ * re_ + im_ * im_; }
  bool is_unit() const { return norm().is_unit(); }

  GaussianResidue inv() const {
    Residue nr = norm();
    if (!nr.is_unit()) fail(ErrorKind::NonUnit, "gaussian element has non-unit norm");
    Residue ni = nr.inv();
    return {re_ * ni, -im_ * ni};
  }

  GaussianResidue operator-() const { return {-re_, -im_}; }

  friend GaussianResidue operator+(const GaussianResidue& x, const GaussianResidue& y) {
    return {x.re_ + y.re_, x.im_ + y.im_};
  }
  friend GaussianResidue operator-(const GaussianResidue& x, const GaussianResidue& y) {
    return {x.re_ - y.re_, x.im_ - y.im_};
  }
  friend GaussianResidue operator*(const GaussianResidue& x, const GaussianResidue& y) {
    return {x.re_ * y.re_ - x.im_ * y.im_, x.re_ * y.im_ + x.im_ * y.re_};
  }
  GaussianResidue& operator+=(const GaussianResidue& o) { return *this = *this + o; }
  GaussianResidue& operator*=(const GaussianResidue& o) { return *this = *this * o; }

  friend bool operator==(const GaussianResidue&, const GaussianResidue&) = default;

  friend std::ostream& operator<<(std::ostream& os, const GaussianResidue& g) {
    return os << '(' << g.re_ << ',' << g.im_ << ')';
  }

 private:
  Residue re_;
  Residue im_;
};

inline GaussianResidue gauss_add(const GaussianResidue& x, const GaussianResidue& y) { return x + y; }
inline GaussianResidue gauss_mul(const GaussianResidue& x, const GaussianResidue& y) { return x * y; }

}  // namespace locapprox

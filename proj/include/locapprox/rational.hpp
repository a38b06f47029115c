#pragma once

// Exact rationals. General arithmetic runs on Boost.Multiprecision's
// cpp_rational; BoundedRational is the fixed-width reduced pair that
// encode/decode trade in.

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "locapprox/error.hpp"

namespace locapprox {

// Expression templates off: every operation yields a plain value, which
// keeps ?: and auto well-behaved.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

using i128 = __int128;
using u128 = unsigned __int128;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) fail(ErrorKind::InvalidArgument, "zero denominator");
  return Rational(num, den);
}

/// `num/den` with den > 0; integers print as `k/1`.
inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r) << '/' << boost::multiprecision::denominator(r);
  return os.str();
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// max(|numerator|, denominator) in lowest terms.
inline Integer height(const Rational& r) {
  Integer n = boost::multiprecision::abs(boost::multiprecision::numerator(r));
  Integer d = boost::multiprecision::denominator(r);
  return n > d ? n : d;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses `p/q`, `-p/q`, or an integer.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    return make_rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidArgument, "not a rational: '" + s + "'");
  }
}

/// Reduced pair k1/k2 with k2 >= 1, sign on the numerator.
struct BoundedRational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static BoundedRational make(std::int64_t k1, std::int64_t k2) {
    if (k2 == 0) fail(ErrorKind::InvalidArgument, "zero denominator");
    if (k1 == std::numeric_limits<std::int64_t>::min() ||
        k2 == std::numeric_limits<std::int64_t>::min())
      fail(ErrorKind::Overflow, "component out of range");
    if (k2 < 0) {
      k1 = -k1;
      k2 = -k2;
    }
    std::int64_t g = std::gcd(k1, k2);
    return BoundedRational{k1 / g, k2 / g};
  }

  static BoundedRational from(const Rational& r) {
    const Integer& n = boost::multiprecision::numerator(r);
    const Integer& d = boost::multiprecision::denominator(r);
    constexpr auto hi = std::numeric_limits<std::int64_t>::max();
    if (boost::multiprecision::abs(n) > hi || d > hi)
      fail(ErrorKind::Overflow, "rational does not fit 64-bit components: " + to_string(r));
    return BoundedRational{n.convert_to<std::int64_t>(), d.convert_to<std::int64_t>()};
  }

  Rational value() const { return Rational(num, den); }

  std::uint64_t height() const {
    std::uint64_t n = num < 0 ? std::uint64_t(-num) : std::uint64_t(num);
    return n > std::uint64_t(den) ? n : std::uint64_t(den);
  }

  friend bool operator==(const BoundedRational&, const BoundedRational&) = default;

  friend std::strong_ordering operator<=>(const BoundedRational& a, const BoundedRational& b) {
    return i128(a.num) * b.den <=> i128(b.num) * a.den;
  }

  friend std::ostream& operator<<(std::ostream& os, const BoundedRational& r) {
    return os << r.num << '/' << r.den;
  }
};

inline std::string to_string(const BoundedRational& r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

/// Element re + im*i of Q[i].
struct GaussRational {
  Rational re{0};
  Rational im{0};

  GaussRational() = default;
  GaussRational(Rational r) : re(std::move(r)) {}
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  GaussRational conj() const { return {re, -im}; }
  Rational norm() const { return re * re + im * im; }
  bool is_real() const { return im == 0; }

  GaussRational inv() const {
    Rational n = norm();
    if (n == 0) fail(ErrorKind::NonUnit, "zero has no inverse");
    return {re / n, -im / n};
  }

  GaussRational operator-() const { return {-re, -im}; }
  friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussRational& operator+=(const GaussRational& o) { return *this = *this + o; }
  GaussRational& operator*=(const GaussRational& o) { return *this = *this * o; }

  friend bool operator==(const GaussRational&, const GaussRational&) = default;

  friend std::ostream& operator<<(std::ostream& os, const GaussRational& g) {
    os << to_string(g.re);
    if (g.im != 0) os << (g.im < 0 ? " - " : " + ") << to_string(abs(g.im)) << "i";
    return os;
  }
};

}  // namespace locapprox

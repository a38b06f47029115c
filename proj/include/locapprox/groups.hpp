#pragma once

// Rational points of SO(n), SU(n) and SL(2) over the Gaussian rationals,
// their images in F_q and F_q^(2), and the finite homomorphism check.
//
// SO(n):  products of planar rotations, cos = (1-t^2)/(1+t^2),
//         sin = 2t/(1+t^2), one t per coordinate plane (i < j).
// SU(n):  products of SU(2) blocks on adjacent coordinates (k, k+1), each
//         built from a rational unit quaternion (w, x, y, z) as
//         [[w + xi, y + zi], [-y + zi, w - xi]].
// SL2:    [[1, a], [0, 1]] * [[1, 0], [b, 1]] = [[1 + ab, a], [b, 1]].

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "locapprox/error.hpp"
#include "locapprox/local_metric.hpp"
#include "locapprox/matrix.hpp"
#include "locapprox/rational.hpp"
#include "locapprox/report.hpp"
#include "locapprox/residue.hpp"

namespace locapprox {

enum class GroupKind { SO, SU, SL2_Gaussian };

struct GroupFamily {
  GroupKind kind = GroupKind::SO;
  std::size_t n = 2;

  static GroupFamily make(GroupKind kind, std::size_t n) {
    if (kind == GroupKind::SL2_Gaussian && n != 2) fail(ErrorKind::InvalidArgument, "SL2_Gaussian has n = 2");
    if (n < 2) fail(ErrorKind::InvalidArgument, "group dimension must be at least 2");
    return {kind, n};
  }
  static GroupFamily so(std::size_t n) { return make(GroupKind::SO, n); }
  static GroupFamily su(std::size_t n) { return make(GroupKind::SU, n); }
  static GroupFamily sl2() { return make(GroupKind::SL2_Gaussian, 2); }

  /// Entries live in Q[i] rather than Q.
  bool gaussian() const { return kind != GroupKind::SO; }

  std::string name() const {
    switch (kind) {
      case GroupKind::SO:
        return "SO(" + std::to_string(n) + ")";
      case GroupKind::SU:
        return "SU(" + std::to_string(n) + ")";
      case GroupKind::SL2_Gaussian:
        return "SL2_Gaussian";
    }
    return "?";
  }

  friend bool operator==(const GroupFamily&, const GroupFamily&) = default;
};

/// Accepts SO(n), SU(n), SOn, SUn, SL2, SL2_Gaussian.
inline GroupFamily parse_group_family(const std::string& text) {
  if (text == "SL2" || text == "SL2_Gaussian" || text == "SL(2)") return GroupFamily::sl2();
  if (text.size() < 3 || (text.rfind("SO", 0) != 0 && text.rfind("SU", 0) != 0))
    fail(ErrorKind::InvalidArgument, "unknown group family '" + text + "'");
  std::string digits = text.substr(2);
  if (digits.size() >= 2 && digits.front() == '(' && digits.back() == ')') digits = digits.substr(1, digits.size() - 2);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 3)
    fail(ErrorKind::InvalidArgument, "unknown group family '" + text + "'");
  std::size_t n = std::stoul(digits);
  return text[1] == 'O' ? GroupFamily::so(n) : GroupFamily::su(n);
}

using Quaternion = std::array<Rational, 4>;

struct SOParams {
  std::vector<Rational> t;  // planes (0,1), (0,2), ..., (n-2,n-1)
};
struct SUParams {
  std::vector<Quaternion> blocks;  // block k acts on coordinates (k, k+1)
};
struct SL2Params {
  GaussRational a, b;
};
using GroupParams = std::variant<SOParams, SUParams, SL2Params>;

/// Rotation by the tan-half-angle t in the (i, j) plane.
inline RationalMatrix givens(std::size_t n, std::size_t i, std::size_t j, const Rational& t) {
  if (i >= n || j >= n || i == j) fail(ErrorKind::InvalidArgument, "bad rotation plane");
  RationalMatrix m = RationalMatrix::identity(n, GaussRational());
  Rational den = 1 + t * t;
  Rational c = (1 - t * t) / den, s = 2 * t / den;
  m(i, i) = c;
  m(j, j) = c;
  m(i, j) = -s;
  m(j, i) = s;
  return m;
}

inline RationalMatrix su2_block(std::size_t n, std::size_t k, const Quaternion& u) {
  if (k + 1 >= n) fail(ErrorKind::InvalidArgument, "SU(2) block out of range");
  if (u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3] != 1)
    fail(ErrorKind::DegenerateParams, "quaternion is not a unit");
  RationalMatrix m = RationalMatrix::identity(n, GaussRational());
  m(k, k) = {u[0], u[1]};
  m(k, k + 1) = {u[2], u[3]};
  m(k + 1, k) = {-u[2], u[3]};
  m(k + 1, k + 1) = {u[0], -u[1]};
  return m;
}

/// Inverse stereographic image of (p1, p2, p3) / r on the unit 3-sphere:
/// ((r^2 - |p|^2), 2 r p) / (|p|^2 + r^2).
inline Quaternion stereographic(const Rational& p1, const Rational& p2, const Rational& p3, const Rational& r) {
  Rational pp = p1 * p1 + p2 * p2 + p3 * p3;
  Rational d = pp + r * r;
  if (d == 0) fail(ErrorKind::DegenerateParams, "stereographic parameters are all zero");
  return {(r * r - pp) / d, 2 * r * p1 / d, 2 * r * p2 / d, 2 * r * p3 / d};
}

/// Cayley transform (I - A)(I + A)^-1 of the skew-symmetric A whose strict
/// upper triangle is `upper`, row by row.
inline RationalMatrix cayley(std::size_t n, const std::vector<Rational>& upper) {
  if (upper.size() != n * (n - 1) / 2) fail(ErrorKind::DegenerateParams, "Cayley needs n(n-1)/2 entries");
  RationalMatrix a(n, std::vector<GaussRational>(n * n));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      a(i, j) = upper[k];
      a(j, i) = -upper[k];
    }
  RationalMatrix id = RationalMatrix::identity(n, GaussRational());
  try {
    return mat_sub(id, a) * mat_inverse(mat_add(id, a));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NonUnit) fail(ErrorKind::DegenerateParams, "I + A is singular");
    throw;
  }
}

/// max(D, max |D * entry part|) where D is the lcm of all entry denominators.
inline Integer common_height(const RationalMatrix& m) {
  Integer d = 1;
  for (const auto& e : m.entries())
    for (const Rational* part : {&e.re, &e.im}) d = boost::multiprecision::lcm(d, boost::multiprecision::denominator(*part));
  Integer h = d;
  for (const auto& e : m.entries())
    for (const Rational* part : {&e.re, &e.im}) {
      Integer num = boost::multiprecision::numerator(*part) * (d / boost::multiprecision::denominator(*part));
      if (num < 0) num = -num;
      if (num > h) h = num;
    }
  return h;
}

template <class T>
bool member_of(const GroupFamily& g, const Matrix<T>& m) {
  if (m.dim() != g.n) return false;
  const T& like = m(0, 0);
  const T one = element_traits<T>::one(like);
  if (mat_det(m) != one) return false;
  switch (g.kind) {
    case GroupKind::SO:
      for (const auto& e : m.entries())
        if (element_traits<T>::conj(e) != e) return false;
      return mat_transpose(m) * m == Matrix<T>::identity(g.n, like);
    case GroupKind::SU:
      return mat_conj_transpose(m) * m == Matrix<T>::identity(g.n, like);
    case GroupKind::SL2_Gaussian:
      return true;
  }
  return false;
}

inline RationalMatrix generate_rational_point(const GroupFamily& g, const GroupParams& params,
                                              std::optional<std::uint64_t> height_bound = std::nullopt) {
  RationalMatrix m = RationalMatrix::identity(g.n, GaussRational());
  switch (g.kind) {
    case GroupKind::SO: {
      const auto* p = std::get_if<SOParams>(&params);
      if (!p || p->t.size() != g.n * (g.n - 1) / 2)
        fail(ErrorKind::DegenerateParams, g.name() + " needs " + std::to_string(g.n * (g.n - 1) / 2) + " angle parameters");
      std::size_t k = 0;
      for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = i + 1; j < g.n; ++j) m = m * givens(g.n, i, j, p->t[k++]);
      break;
    }
    case GroupKind::SU: {
      const auto* p = std::get_if<SUParams>(&params);
      if (!p || p->blocks.size() != g.n - 1)
        fail(ErrorKind::DegenerateParams, g.name() + " needs " + std::to_string(g.n - 1) + " quaternions");
      for (std::size_t k = 0; k + 1 < g.n; ++k) m = m * su2_block(g.n, k, p->blocks[k]);
      break;
    }
    case GroupKind::SL2_Gaussian: {
      const auto* p = std::get_if<SL2Params>(&params);
      if (!p) fail(ErrorKind::DegenerateParams, "SL2_Gaussian needs parameters (a, b)");
      GaussRational one(Rational(1));
      m = RationalMatrix(2, {one + p->a * p->b, p->a, p->b, one});
      break;
    }
  }
  if (!member_of(g, m)) fail(ErrorKind::DegenerateParams, "generated matrix is not in " + g.name());
  if (height_bound && common_height(m) > *height_bound)
    fail(ErrorKind::HeightExceeded,
         "point height " + common_height(m).str() + " exceeds H = " + std::to_string(*height_bound));
  return m;
}

inline GaussianResidueMatrix encode_matrix(const RationalMatrix& m, const Modulus& q) {
  std::vector<GaussianResidue> out;
  out.reserve(m.entries().size());
  for (const auto& e : m.entries()) out.emplace_back(encode_exact(e.re, q), encode_exact(e.im, q));
  return GaussianResidueMatrix(m.dim(), std::move(out));
}

/// Entrywise decode; nullopt if any real or imaginary part is NotLocal.
inline std::optional<RationalMatrix> decode_matrix(const GaussianResidueMatrix& a, const LocalityScale& s) {
  std::vector<GaussRational> out;
  out.reserve(a.entries().size());
  for (const auto& e : a.entries()) {
    DecodeOutcome re = decode(e.re(), s), im = decode(e.im(), s);
    if (!re || !im) return std::nullopt;
    out.emplace_back(re->value(), im->value());
  }
  return RationalMatrix(a.dim(), std::move(out));
}

/// Height every entry of a product of two height-H points stays within:
/// denominators divide D1*D2 <= H^2, numerators are sums of n (times 2 for
/// Gaussian parts) products of height-H numerators.
inline Integer product_height_requirement(const GroupFamily& g, std::uint64_t height_bound) {
  Integer h = height_bound;
  return Integer(g.n) * (g.gaussian() ? 2 : 1) * h * h;
}

/// Uniformly drawn small parameters, rejected until the point has height
/// <= H. The parameter range shrinks after repeated rejections.
template <class Gen>
RationalMatrix random_rational_point(const GroupFamily& g, std::uint64_t height_bound, Gen& gen) {
  if (height_bound < 1) fail(ErrorKind::InvalidArgument, "height bound must be at least 1");
  const double h = static_cast<double>(height_bound);
  std::size_t pieces = g.kind == GroupKind::SO ? g.n * (g.n - 1) / 2 : g.kind == GroupKind::SU ? g.n - 1 : 2;
  double root = std::pow(h, 1.0 / (2.0 * static_cast<double>(pieces)));
  std::int64_t bound = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(root)));
  auto draw = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen);
  };
  for (int attempt = 1; attempt <= 200000; ++attempt) {
    if (attempt % 256 == 0 && bound > 1) --bound;
    GroupParams params;
    if (g.kind == GroupKind::SO) {
      SOParams p;
      for (std::size_t k = 0; k < pieces; ++k) p.t.push_back(Rational(draw(-bound, bound), draw(1, bound)));
      params = p;
    } else if (g.kind == GroupKind::SU) {
      SUParams p;
      for (std::size_t k = 0; k < pieces; ++k) {
        std::int64_t a = draw(-bound, bound), b = draw(-bound, bound), c = draw(-bound, bound), r = draw(0, bound);
        if (a == 0 && b == 0 && c == 0 && r == 0) r = 1;
        p.blocks.push_back(stereographic(a, b, c, r));
      }
      params = p;
    } else {
      auto gauss = [&] {
        Integer d = draw(1, bound);
        return GaussRational(Rational(Integer(draw(-bound, bound)), d), Rational(Integer(draw(-bound, bound)), d));
      };
      params = SL2Params{gauss(), gauss()};
    }
    RationalMatrix m = generate_rational_point(g, params);
    if (common_height(m) <= height_bound) return m;
  }
  fail(ErrorKind::HeightExceeded, "no " + g.name() + " point of height <= " + std::to_string(height_bound) + " found");
}

struct GroupHomReport {
  std::string family;
  std::uint64_t height_bound = 0;
  std::uint64_t pairs = 0;
  std::uint64_t membership_failures = 0;  // encoded point violates the group equations in F_q
  std::uint64_t product_failures = 0;     // decode(enc(M1) enc(M2)) != M1 M2
  std::string first_failure;
  Table rows{{"pair", "height_1", "height_2", "members_ok", "product_ok"}, {}};

  bool passed() const { return membership_failures == 0 && product_failures == 0; }

  Json summary() const {
    return {{"family", family},           {"H", height_bound},
            {"pairs", pairs},             {"membership_failures", membership_failures},
            {"product_failures", product_failures}, {"first_failure", first_failure},
            {"passed", passed()}};
  }
};

inline void check_group_window(const GroupFamily& g, std::uint64_t height_bound, const Modulus& q,
                               const LocalityScale& s) {
  if (!q.is_field()) fail(ErrorKind::InvalidArgument, "group check runs over a field modulus");
  Integer need = product_height_requirement(g, height_bound);
  if (Integer(s.L()) < need)
    fail(ErrorKind::WindowTooSmall, "scale L = " + std::to_string(s.L()) + " is below the product height " +
                                        need.str() + " for " + g.name() + " at H = " + std::to_string(height_bound));
  if (!window_ok(s, q))
    fail(ErrorKind::WindowTooSmall,
         "modulus " + std::to_string(q.value()) + " is too small for L = " + std::to_string(s.L()) + " (need q > 2L^2)");
}

/// Checks given pairs; every point must have height <= H.
inline GroupHomReport group_hom_check_pairs(const GroupFamily& g,
                                            const std::vector<std::pair<RationalMatrix, RationalMatrix>>& pairs,
                                            std::uint64_t height_bound, const Modulus& q, const LocalityScale& s) {
  check_group_window(g, height_bound, q, s);
  GroupHomReport rep;
  rep.family = g.name();
  rep.height_bound = height_bound;
  for (const auto& [m1, m2] : pairs) {
    Integer h1 = common_height(m1), h2 = common_height(m2);
    if (h1 > height_bound || h2 > height_bound)
      fail(ErrorKind::HeightExceeded, "pair " + std::to_string(rep.pairs) + " exceeds H");
    GaussianResidueMatrix a1 = encode_matrix(m1, q), a2 = encode_matrix(m2, q);
    bool members = member_of(g, a1) && member_of(g, a2);
    std::optional<RationalMatrix> prod = decode_matrix(a1 * a2, s);
    bool product = prod && *prod == m1 * m2;
    if (!members) ++rep.membership_failures;
    if (!product) ++rep.product_failures;
    if ((!members || !product) && rep.first_failure.empty())
      rep.first_failure = "pair " + std::to_string(rep.pairs) + (members ? "" : " membership") + (product ? "" : " product");
    rep.rows.add({std::to_string(rep.pairs), h1.str(), h2.str(), members ? "1" : "0", product ? "1" : "0"});
    ++rep.pairs;
  }
  return rep;
}

inline GroupHomReport group_hom_check(const GroupFamily& g, std::size_t sample_size, std::uint64_t height_bound,
                                      const Modulus& q, const LocalityScale& s, std::uint64_t seed) {
  check_group_window(g, height_bound, q, s);
  std::mt19937_64 gen(seed);
  std::vector<std::pair<RationalMatrix, RationalMatrix>> pairs;
  pairs.reserve(sample_size);
  for (std::size_t i = 0; i < sample_size; ++i) {
    RationalMatrix a = random_rational_point(g, height_bound, gen);
    RationalMatrix b = random_rational_point(g, height_bound, gen);
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return group_hom_check_pairs(g, pairs, height_bound, q, s);
}

}  // namespace locapprox

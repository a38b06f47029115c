#pragma once

// Covering radius of the height-<= H rational points of SO(2), SO(3) and
// SU(2) over a fixed reference grid.
//
// Point sets, each nested in H:
//   SO(2)  primitive (a, b), a^2 + b^2 <= H: the rotation with t = a/b,
//          cos = (b^2 - a^2)/N, sin = 2ab/N, N = a^2 + b^2.
//   SO(3)  primitive integer quaternions q with N = |q|^2 <= H: the
//          rotation R(q), whose entries are integers over N.
//   SU(2)  primitive (p1, p2, p3, r), D = |p|^2 + r^2 <= H: the
//          stereographic unit quaternion ((r^2 - |p|^2), 2rp) / D.
//
// Grids: `halton` takes points i = seed+1 .. seed+size of the Halton
// sequence in bases (2, 3, 5) and maps them to unit quaternions with
// Shoemake's formula (SO(2) uses base 2 for the angle); `identity` is the
// single identity element.
//
// Distances are Frobenius norms, evaluated through exact identities:
// |R(u) - R(v)|^2 = 8 (1 - <u,v>^2) on SO(3), |U(u) - U(v)|^2 = 4 (1 - <u,v>)
// on SU(2). Only the final comparison runs in floating point.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "locapprox/error.hpp"
#include "locapprox/groups.hpp"
#include "locapprox/report.hpp"

namespace locapprox {

enum class GridKind { halton, identity };

struct GridSpec {
  GridKind kind = GridKind::halton;
  std::size_t size = 512;
};

inline GridKind parse_grid_kind(const std::string& s) {
  if (s == "halton") return GridKind::halton;
  if (s == "identity") return GridKind::identity;
  fail(ErrorKind::InvalidArgument, "unknown grid '" + s + "' (expected halton or identity)");
}

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, r = 0;
  while (i) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

/// Shoemake's uniform map from [0,1)^3 to the unit 3-sphere.
inline std::array<double, 4> shoemake(double u1, double u2, double u3) {
  const double two_pi = 2 * M_PI;
  double a = std::sqrt(1 - u1), b = std::sqrt(u1);
  return {b * std::cos(two_pi * u3), a * std::sin(two_pi * u2), a * std::cos(two_pi * u2), b * std::sin(two_pi * u3)};
}

inline std::vector<std::array<double, 4>> quaternion_grid(const GridSpec& grid, std::uint64_t seed) {
  if (grid.kind == GridKind::identity) return {{1, 0, 0, 0}};
  std::vector<std::array<double, 4>> out;
  for (std::size_t k = 0; k < grid.size; ++k) {
    std::uint64_t i = seed + k + 1;
    out.push_back(shoemake(radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5)));
  }
  return out;
}

inline std::vector<double> angle_grid(const GridSpec& grid, std::uint64_t seed) {
  if (grid.kind == GridKind::identity) return {0.0};
  std::vector<double> out;
  for (std::size_t k = 0; k < grid.size; ++k) out.push_back(2 * M_PI * radical_inverse(seed + k + 1, 2));
  return out;
}

struct CoveringResult {
  double radius = 0;
  std::uint64_t points = 0;
  std::size_t grid_size = 0;
  std::size_t worst_grid_index = 0;
};

namespace detail {

inline std::int64_t isqrt(std::uint64_t h) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(h)));
  while (r > 0 && static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(r) > h) --r;
  while (static_cast<std::uint64_t>(r + 1) * static_cast<std::uint64_t>(r + 1) <= h) ++r;
  return r;
}

// Visits primitive integer 4-vectors with squared norm <= h whose first
// nonzero coordinate is positive.
template <class F>
void for_primitive_quaternions(std::uint64_t h, F&& visit) {
  const std::int64_t r = isqrt(h);
  for (std::int64_t a = 0; a <= r; ++a)
    for (std::int64_t b = a == 0 ? 0 : -r; b <= r; ++b)
      for (std::int64_t c = (a == 0 && b == 0) ? 0 : -r; c <= r; ++c)
        for (std::int64_t d = (a == 0 && b == 0 && c == 0) ? 1 : -r; d <= r; ++d) {
          std::uint64_t n = static_cast<std::uint64_t>(a * a + b * b + c * c + d * d);
          if (n > h) continue;
          if (std::gcd(std::gcd(a, b), std::gcd(c, d)) != 1) continue;
          visit(a, b, c, d, n);
        }
}

}  // namespace detail

/// Max over the grid of the Frobenius distance to the nearest rational
/// point of height <= H.
inline CoveringResult covering_radius(const GroupFamily& g, std::uint64_t height_bound, const GridSpec& grid,
                                      std::uint64_t seed = 0) {
  if (grid.kind == GridKind::halton && grid.size == 0) fail(ErrorKind::InvalidArgument, "grid size must be positive");
  CoveringResult res;
  std::vector<double> best;  // per grid point: squared distance to the nearest point so far

  if (g == GroupFamily::so(2)) {
    std::vector<double> angles = angle_grid(grid, seed);
    res.grid_size = angles.size();
    best.assign(angles.size(), INFINITY);
    const std::int64_t r = detail::isqrt(height_bound);
    for (std::int64_t b = 0; b <= r; ++b)
      for (std::int64_t a = b == 0 ? 1 : -r; a <= r; ++a) {
        std::uint64_t n = static_cast<std::uint64_t>(a * a + b * b);
        if (n > height_bound || std::gcd(a, b) != 1) continue;
        ++res.points;
        double c = static_cast<double>(b * b - a * a) / static_cast<double>(n);
        double s = static_cast<double>(2 * a * b) / static_cast<double>(n);
        for (std::size_t k = 0; k < angles.size(); ++k) {
          double dc = c - std::cos(angles[k]), ds = s - std::sin(angles[k]);
          best[k] = std::min(best[k], 2 * (dc * dc + ds * ds));
        }
      }
  } else if (g == GroupFamily::so(3) || g == GroupFamily::su(2)) {
    const bool so3 = g.kind == GroupKind::SO;
    std::vector<std::array<double, 4>> grid_q = quaternion_grid(grid, seed);
    res.grid_size = grid_q.size();
    std::vector<double> closeness(grid_q.size(), -INFINITY);
    auto consider = [&](const std::array<double, 4>& u) {
      ++res.points;
      for (std::size_t k = 0; k < grid_q.size(); ++k) {
        const auto& v = grid_q[k];
        double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3];
        double c = so3 ? dot * dot : dot;
        if (c > closeness[k]) closeness[k] = c;
      }
    };
    if (so3) {
      detail::for_primitive_quaternions(height_bound, [&](std::int64_t a, std::int64_t b, std::int64_t c,
                                                          std::int64_t d, std::uint64_t n) {
        double s = 1.0 / std::sqrt(static_cast<double>(n));
        consider({static_cast<double>(a) * s, static_cast<double>(b) * s, static_cast<double>(c) * s,
                  static_cast<double>(d) * s});
      });
    } else {
      // Primitive (p, r) with r > 0 map injectively; keep r >= 0.
      const std::int64_t lim = detail::isqrt(height_bound);
      for (std::int64_t r = 0; r <= lim; ++r)
        for (std::int64_t p1 = -lim; p1 <= lim; ++p1)
          for (std::int64_t p2 = -lim; p2 <= lim; ++p2)
            for (std::int64_t p3 = -lim; p3 <= lim; ++p3) {
              std::int64_t pp = p1 * p1 + p2 * p2 + p3 * p3;
              std::uint64_t d = static_cast<std::uint64_t>(pp + r * r);
              if (d == 0 || d > height_bound) continue;
              if (std::gcd(std::gcd(p1, p2), std::gcd(p3, r)) != 1) continue;
              if (r == 0 && !(p1 == 1 && p2 == 0 && p3 == 0)) continue;  // every r = 0 maps to -1
              double inv = 1.0 / static_cast<double>(d);
              consider({static_cast<double>(r * r - pp) * inv, static_cast<double>(2 * r * p1) * inv,
                        static_cast<double>(2 * r * p2) * inv, static_cast<double>(2 * r * p3) * inv});
            }
    }
    best.resize(grid_q.size());
    for (std::size_t k = 0; k < grid_q.size(); ++k)
      best[k] = so3 ? 8 * std::max(0.0, 1 - closeness[k]) : 4 * std::max(0.0, 1 - closeness[k]);
  } else {
    fail(ErrorKind::Unsupported, "covering radius is implemented for SO(2), SO(3) and SU(2), not " + g.name());
  }

  if (res.points == 0) fail(ErrorKind::EmptyPointSet, "no rational points of height <= " + std::to_string(height_bound));
  auto worst = std::max_element(best.begin(), best.end());
  res.worst_grid_index = static_cast<std::size_t>(worst - best.begin());
  res.radius = std::sqrt(*worst);
  return res;
}

/// Six significant digits, the only decimal output format.
inline std::string format_radius(double r) {
  std::ostringstream os;
  os << std::setprecision(6) << r;
  return os.str();
}

inline Table covering_table(const GroupFamily& g, const std::vector<std::uint64_t>& heights, const GridSpec& grid,
                            std::uint64_t seed = 0) {
  Table t{{"H", "points", "radius"}, {}};
  for (auto h : heights) {
    CoveringResult r = covering_radius(g, h, grid, seed);
    t.add({std::to_string(h), std::to_string(r.points), format_radius(r.radius)});
  }
  return t;
}

}  // namespace locapprox

#pragma once

// Square matrices over Residue, GaussianResidue, Rational and GaussRational.
// Element-specific behaviour (zero/one, conjugation, unit test, inverse)
// lives in element_traits.

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "locapprox/error.hpp"
#include "locapprox/rational.hpp"
#include "locapprox/residue.hpp"

namespace locapprox {

template <class T>
struct element_traits;

template <>
struct element_traits<Residue> {
  static Residue zero(const Residue& like) { return Residue::zero(like.modulus()); }
  static Residue one(const Residue& like) { return Residue::one(like.modulus()); }
  static Residue conj(const Residue& x) { return x; }
  static bool is_zero(const Residue& x) { return x.is_zero(); }
  static bool is_unit(const Residue& x) { return x.is_unit(); }
  static Residue inv(const Residue& x) { return x.inv(); }
};

template <>
struct element_traits<GaussianResidue> {
  static GaussianResidue zero(const GaussianResidue& like) { return GaussianResidue::zero(like.modulus()); }
  static GaussianResidue one(const GaussianResidue& like) { return GaussianResidue::one(like.modulus()); }
  static GaussianResidue conj(const GaussianResidue& x) { return x.conj(); }
  static bool is_zero(const GaussianResidue& x) { return x.re().is_zero() && x.im().is_zero(); }
  static bool is_unit(const GaussianResidue& x) { return x.is_unit(); }
  static GaussianResidue inv(const GaussianResidue& x) { return x.inv(); }
};

template <>
struct element_traits<Rational> {
  static Rational zero(const Rational&) { return Rational(0); }
  static Rational one(const Rational&) { return Rational(1); }
  static Rational conj(const Rational& x) { return x; }
  static bool is_zero(const Rational& x) { return x == 0; }
  static bool is_unit(const Rational& x) { return x != 0; }
  static Rational inv(const Rational& x) {
    if (x == 0) fail(ErrorKind::NonUnit, "zero has no inverse");
    return Rational(1) / x;
  }
};

template <>
struct element_traits<GaussRational> {
  static GaussRational zero(const GaussRational&) { return {}; }
  static GaussRational one(const GaussRational&) { return GaussRational(Rational(1)); }
  static GaussRational conj(const GaussRational& x) { return x.conj(); }
  static bool is_zero(const GaussRational& x) { return x.re == 0 && x.im == 0; }
  static bool is_unit(const GaussRational& x) { return !is_zero(x); }
  static GaussRational inv(const GaussRational& x) { return x.inv(); }
};

template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix(std::size_t n, std::vector<T> entries) : n_(n), a_(std::move(entries)) {
    if (n_ == 0) fail(ErrorKind::DimensionMismatch, "matrix dimension must be >= 1");
    if (a_.size() != n_ * n_)
      fail(ErrorKind::DimensionMismatch,
           "expected " + std::to_string(n_ * n_) + " entries, got " + std::to_string(a_.size()));
  }

  /// Identity over the ring of `like`.
  static Matrix identity(std::size_t n, const T& like) {
    std::vector<T> e(n * n, element_traits<T>::zero(like));
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = element_traits<T>::one(like);
    return Matrix(n, std::move(e));
  }

  std::size_t dim() const { return n_; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const std::vector<T>& entries() const { return a_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.n_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < m.n_; ++j) os << (j ? ", " : "") << m(i, j);
      os << ']';
    }
    return os << ']';
  }

 private:
  std::size_t n_;
  std::vector<T> a_;
};

template <class T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b) {
  const std::size_t n = a.dim();
  if (b.dim() != n) fail(ErrorKind::DimensionMismatch, "mat_mul dimensions differ");
  std::vector<T> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      T acc = a(i, 0) * b(0, j);
      for (std::size_t k = 1; k < n; ++k) acc += a(i, k) * b(k, j);
      out.push_back(std::move(acc));
    }
  }
  return Matrix<T>(n, std::move(out));
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  return mat_mul(a, b);
}

template <class T>
Matrix<T> mat_transpose(const Matrix<T>& m) {
  const std::size_t n = m.dim();
  std::vector<T> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.push_back(m(j, i));
  return Matrix<T>(n, std::move(out));
}

template <class T>
Matrix<T> mat_conj_transpose(const Matrix<T>& m) {
  const std::size_t n = m.dim();
  std::vector<T> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.push_back(element_traits<T>::conj(m(j, i)));
  return Matrix<T>(n, std::move(out));
}

template <class T>
Matrix<T> mat_add(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "mat_add dimensions differ");
  std::vector<T> out;
  out.reserve(a.entries().size());
  for (std::size_t k = 0; k < a.entries().size(); ++k) out.push_back(a.entries()[k] + b.entries()[k]);
  return Matrix<T>(a.dim(), std::move(out));
}

template <class T>
Matrix<T> mat_sub(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "mat_sub dimensions differ");
  std::vector<T> out;
  out.reserve(a.entries().size());
  for (std::size_t k = 0; k < a.entries().size(); ++k) out.push_back(a.entries()[k] - b.entries()[k]);
  return Matrix<T>(a.dim(), std::move(out));
}

namespace detail {

// Laplace expansion along the first row of the minor given by `rows` x `cols`.
template <class T>
T expand_det(const Matrix<T>& m, std::vector<std::size_t>& rows, std::vector<std::size_t>& cols) {
  if (rows.size() == 1) return m(rows[0], cols[0]);
  const std::size_t r = rows.front();
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  T acc = element_traits<T>::zero(m(0, 0));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::vector<std::size_t> sub_cols;
    sub_cols.reserve(cols.size() - 1);
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (c != k) sub_cols.push_back(cols[c]);
    T term = m(r, cols[k]) * expand_det(m, sub_rows, sub_cols);
    if (k % 2 == 0)
      acc = acc + term;
    else
      acc = acc - term;
  }
  return acc;
}

}  // namespace detail

/// Determinant. Fraction-free cofactor expansion for n <= 4; Gaussian
/// elimination with unit pivots above that. In a ring with zero divisors
/// elimination may find a column with no unit but a nonzero entry, which
/// raises SingularPivot.
template <class T>
T mat_det(const Matrix<T>& m) {
  const std::size_t n = m.dim();
  using tr = element_traits<T>;
  if (n <= 4) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    auto cols = idx;
    return detail::expand_det(m, idx, cols);
  }
  Matrix<T> a = m;
  T det = tr::one(m(0, 0));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = n;
    bool any_nonzero = false;
    for (std::size_t r = c; r < n; ++r) {
      if (!tr::is_zero(a(r, c))) any_nonzero = true;
      if (tr::is_unit(a(r, c))) {
        pivot = r;
        break;
      }
    }
    if (pivot == n) {
      if (!any_nonzero) return tr::zero(m(0, 0));
      fail(ErrorKind::SingularPivot, "no unit pivot in column " + std::to_string(c));
    }
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(c, j));
      det = -det;
    }
    det = det * a(c, c);
    T inv = tr::inv(a(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      if (tr::is_zero(a(r, c))) continue;
      T f = a(r, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(r, j) = a(r, j) - f * a(c, j);
    }
  }
  return det;
}

/// Inverse by Gauss-Jordan with unit pivots. NonUnit if singular.
template <class T>
Matrix<T> mat_inverse(const Matrix<T>& m) {
  const std::size_t n = m.dim();
  using tr = element_traits<T>;
  Matrix<T> a = m;
  Matrix<T> inv = Matrix<T>::identity(n, m(0, 0));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = n;
    for (std::size_t r = c; r < n; ++r) {
      if (tr::is_unit(a(r, c))) {
        pivot = r;
        break;
      }
    }
    if (pivot == n) fail(ErrorKind::NonUnit, "matrix is not invertible");
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(c, j));
        std::swap(inv(pivot, j), inv(c, j));
      }
    }
    T p = tr::inv(a(c, c));
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) = a(c, j) * p;
      inv(c, j) = inv(c, j) * p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || tr::is_zero(a(r, c))) continue;
      T f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - f * a(c, j);
        inv(r, j) = inv(r, j) - f * inv(c, j);
      }
    }
  }
  return inv;
}

using ResidueMatrix = Matrix<Residue>;
using GaussianResidueMatrix = Matrix<GaussianResidue>;
using RationalMatrix = Matrix<GaussRational>;

}  // namespace locapprox

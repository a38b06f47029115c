#include <gtest/gtest.h>

#include <random>

#include "locapprox/groups.hpp"

using namespace locapprox;

namespace {

GaussRational gr(std::int64_t a, std::int64_t b, std::int64_t c = 0, std::int64_t d = 1) {
  return {Rational(a, b), Rational(c, d)};
}

template <class F>
ErrorKind kind_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

// Plain-loop checks that do not go through the library's matrix routines.
bool orthonormal_columns(const RationalMatrix& m, bool hermitian) {
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational re = 0, im = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const GaussRational& a = m(k, i);
        const GaussRational& b = m(k, j);
        Rational ai = hermitian ? -a.im : a.im;
        re += a.re * b.re - ai * b.im;
        im += a.re * b.im + ai * b.re;
      }
      if (re != (i == j ? 1 : 0) || im != 0) return false;
    }
  return true;
}

GaussRational det3(const RationalMatrix& m) {
  auto e = [&](int i, int j) { return m(i, j); };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

}  // namespace

TEST(Groups, SO2Example) {
  RationalMatrix m = generate_rational_point(GroupFamily::so(2), SOParams{{Rational(1, 2)}});
  EXPECT_EQ(m, RationalMatrix(2, {gr(3, 5), gr(-4, 5), gr(4, 5), gr(3, 5)}));
  EXPECT_TRUE(orthonormal_columns(m, false));
  EXPECT_EQ(common_height(m), Integer(5));
}

TEST(Groups, SU2Examples) {
  GroupFamily su2 = GroupFamily::su(2);
  Quaternion one{Rational(1), Rational(0), Rational(0), Rational(0)};
  Quaternion i{Rational(0), Rational(1), Rational(0), Rational(0)};
  EXPECT_EQ(generate_rational_point(su2, SUParams{{one}}), RationalMatrix::identity(2, GaussRational()));
  RationalMatrix m = generate_rational_point(su2, SUParams{{i}});
  EXPECT_EQ(m, RationalMatrix(2, {gr(0, 1, 1), gr(0, 1), gr(0, 1), gr(0, 1, -1)}));
  EXPECT_TRUE(orthonormal_columns(m, true));
  EXPECT_EQ(mat_det(m), GaussRational(Rational(1)));
}

TEST(Groups, StereographicPointsAreUnit) {
  for (int p1 = -3; p1 <= 3; ++p1)
    for (int p2 = -3; p2 <= 3; ++p2)
      for (int r = 0; r <= 3; ++r) {
        if (p1 == 0 && p2 == 0 && r == 0) continue;
        Quaternion u = stereographic(p1, p2, 1, r);
        ASSERT_EQ(u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3], Rational(1));
      }
  EXPECT_EQ(kind_of([] { stereographic(0, 0, 0, 0); }), ErrorKind::DegenerateParams);
}

TEST(Groups, GeneratedSO3PointsSatisfyEquationsExactly) {
  std::mt19937_64 gen(17);
  GroupFamily so3 = GroupFamily::so(3);
  for (int t = 0; t < 50; ++t) {
    RationalMatrix m = random_rational_point(so3, 1000, gen);
    ASSERT_TRUE(orthonormal_columns(m, false));
    ASSERT_EQ(det3(m), GaussRational(Rational(1)));
    ASSERT_LE(common_height(m), Integer(1000));
  }
}

TEST(Groups, GeneratedSUAndSL2PointsSatisfyEquationsExactly) {
  std::mt19937_64 gen(18);
  for (int t = 0; t < 30; ++t) {
    RationalMatrix u = random_rational_point(GroupFamily::su(3), 100000, gen);
    ASSERT_TRUE(orthonormal_columns(u, true));
    ASSERT_EQ(det3(u), GaussRational(Rational(1)));
    RationalMatrix s = random_rational_point(GroupFamily::sl2(), 1000, gen);
    ASSERT_EQ(s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0), GaussRational(Rational(1)));
  }
}

TEST(Groups, CayleyIsOrthogonal) {
  RationalMatrix q = cayley(3, {Rational(1, 2), Rational(-1, 3), Rational(2)});
  EXPECT_TRUE(orthonormal_columns(q, false));
  EXPECT_EQ(det3(q), GaussRational(Rational(1)));
  EXPECT_TRUE(member_of(GroupFamily::so(3), q));
}

TEST(Groups, ParameterErrors) {
  EXPECT_EQ(kind_of([] { generate_rational_point(GroupFamily::so(3), SOParams{{Rational(1)}}); }),
            ErrorKind::DegenerateParams);
  Quaternion not_unit{Rational(1), Rational(1), Rational(0), Rational(0)};
  EXPECT_EQ(kind_of([&] { generate_rational_point(GroupFamily::su(2), SUParams{{not_unit}}); }),
            ErrorKind::DegenerateParams);
  EXPECT_EQ(kind_of([] { generate_rational_point(GroupFamily::so(2), SOParams{{Rational(1, 2)}}, 4); }),
            ErrorKind::HeightExceeded);
  EXPECT_EQ(kind_of([] { GroupFamily::so(1); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { GroupFamily::make(GroupKind::SL2_Gaussian, 3); }), ErrorKind::InvalidArgument);
}

TEST(Groups, ParseFamily) {
  EXPECT_EQ(parse_group_family("SO(3)"), GroupFamily::so(3));
  EXPECT_EQ(parse_group_family("SU2"), GroupFamily::su(2));
  EXPECT_EQ(parse_group_family("SL2"), GroupFamily::sl2());
  EXPECT_EQ(parse_group_family("SU(2)").name(), "SU(2)");
  EXPECT_THROW(parse_group_family("Sp(4)"), Error);
  EXPECT_THROW(parse_group_family("SO()"), Error);
}

TEST(Groups, EncodeDecodeRoundTrip) {
  Modulus q = field_modulus(1009);
  LocalityScale s(10, 1);
  RationalMatrix m = generate_rational_point(GroupFamily::so(2), SOParams{{Rational(1, 2)}});
  EXPECT_EQ(decode_matrix(encode_matrix(m, q), s), m);
  RationalMatrix id = RationalMatrix::identity(4, GaussRational());
  EXPECT_EQ(decode_matrix(encode_matrix(id, q), LocalityScale(2, 1)), id);
  EXPECT_TRUE(member_of(GroupFamily::so(2), encode_matrix(m, q)));
}

TEST(Groups, RandomResidueMatricesAreRarelyLocal) {
  // At L = 2 only 7 of 1009 residues decode, so a 2x2 Gaussian matrix
  // (8 parts) is local with probability about (7/1009)^8.
  Modulus q = field_modulus(1009);
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<std::uint64_t> pick(0, 1008);
  int local = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<GaussianResidue> e;
    for (int k = 0; k < 4; ++k) e.emplace_back(Residue(q, pick(gen)), Residue(q, pick(gen)));
    if (decode_matrix(GaussianResidueMatrix(2, e), LocalityScale(2, 1))) ++local;
  }
  EXPECT_EQ(local, 0);
}

TEST(Groups, EncodeIsAMonoidHomomorphism) {
  Modulus q = field_modulus(1000003);
  std::mt19937_64 gen(23);
  for (GroupFamily g : {GroupFamily::so(3), GroupFamily::su(2), GroupFamily::sl2()}) {
    for (int t = 0; t < 20; ++t) {
      RationalMatrix a = random_rational_point(g, 500, gen), b = random_rational_point(g, 500, gen);
      ASSERT_EQ(encode_matrix(a * b, q), encode_matrix(a, q) * encode_matrix(b, q));
    }
    RationalMatrix id = RationalMatrix::identity(g.n, GaussRational());
    ASSERT_EQ(encode_matrix(id, q), GaussianResidueMatrix::identity(g.n, GaussianResidue::zero(q)));
  }
}

TEST(GroupHom, SO3HundredPairs) {
  Modulus q = field_modulus((1ULL << 61) - 1);
  GroupHomReport r = group_hom_check(GroupFamily::so(3), 100, 100, q, LocalityScale(10, 5), 1);
  EXPECT_EQ(r.pairs, 100u);
  EXPECT_EQ(r.membership_failures, 0u);
  EXPECT_EQ(r.product_failures, 0u);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.rows.rows.size(), 100u);
}

TEST(GroupHom, IdentityPair) {
  RationalMatrix id = RationalMatrix::identity(2, GaussRational());
  GroupHomReport r =
      group_hom_check_pairs(GroupFamily::su(2), {{id, id}}, 1, field_modulus(1009), LocalityScale(2, 2));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.pairs, 1u);
}

TEST(GroupHom, WindowTooSmall) {
  EXPECT_EQ(kind_of([] { group_hom_check(GroupFamily::so(3), 10, 100, field_modulus(1009), LocalityScale(10, 5), 1); }),
            ErrorKind::WindowTooSmall);
  EXPECT_EQ(kind_of([] {
              group_hom_check(GroupFamily::so(3), 10, 100, field_modulus((1ULL << 61) - 1), LocalityScale(10, 2), 1);
            }),
            ErrorKind::WindowTooSmall);
}

TEST(GroupHom, ProductHeightRequirement) {
  Modulus q = field_modulus((1ULL << 61) - 1);
  EXPECT_EQ(product_height_requirement(GroupFamily::so(3), 100), Integer(30000));
  EXPECT_EQ(product_height_requirement(GroupFamily::su(2), 10000), Integer(400000000));
  EXPECT_NO_THROW(check_group_window(GroupFamily::su(2), 10000, q, LocalityScale(10, 9)));
}

TEST(GroupHom, ReproducibleForSeed) {
  Modulus q = field_modulus((1ULL << 61) - 1);
  auto a = group_hom_check(GroupFamily::su(2), 10, 1000, q, LocalityScale(10, 7), 5);
  auto b = group_hom_check(GroupFamily::su(2), 10, 1000, q, LocalityScale(10, 7), 5);
  EXPECT_EQ(a.rows.to_csv(), b.rows.to_csv());
  EXPECT_TRUE(a.passed());
}

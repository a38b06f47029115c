#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>

#include "locapprox/local_metric.hpp"

using namespace locapprox;

namespace {

// Exhaustive minimal-pair search: least k2, then least |k1|, with
// |k1| <= L and 1 <= k2 <= L.
std::optional<BoundedRational> brute_force_decode(std::uint64_t z, std::uint64_t q, std::int64_t L) {
  for (std::int64_t k2 = 1; k2 <= L; ++k2) {
    for (std::int64_t a = 0; a <= L; ++a) {
      for (std::int64_t k1 : {a, -a}) {
        i128 lhs = (i128(k1) - i128(z) * k2) % i128(q);
        if (lhs == 0) return BoundedRational::make(k1, k2);
      }
    }
  }
  return std::nullopt;
}

std::set<BoundedRational> brute_force_sort(std::int64_t L, std::int64_t m) {
  std::set<BoundedRational> out;
  for (std::int64_t k2 = 1; k2 <= L; ++k2)
    for (std::int64_t k1 = -L; k1 <= L; ++k1)
      if (std::abs(k1) <= m * k2) out.insert(BoundedRational::make(k1, k2));
  return out;
}

BoundedRational br(std::int64_t a, std::int64_t b) { return BoundedRational::make(a, b); }

template <class F>
ErrorKind kind_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(LocalityScale, ComputesHeightExactly) {
  LocalityScale s(10, 3);
  EXPECT_EQ(s.L(), 1000u);
  EXPECT_EQ(LocalityScale(2, 63).L(), 1ULL << 63);
  EXPECT_EQ(kind_of([] { LocalityScale(2, 64); }), ErrorKind::Overflow);
  EXPECT_EQ(kind_of([] { LocalityScale(1, 3); }), ErrorKind::ValueTooSmall);
  EXPECT_EQ(kind_of([] { LocalityScale(3, 0); }), ErrorKind::ValueTooSmall);
}

TEST(Encode, Examples) {
  EXPECT_EQ(encode(br(-2, 5), field_modulus(101)).value(), 40u);
  EXPECT_EQ((5 * 40) % 101, 101 - 2);
  EXPECT_TRUE(encode(br(0, 1), field_modulus(7)).is_zero());
  EXPECT_EQ(encode(br(1, 3), field_modulus(257)).value(), 86u);
}

TEST(Encode, DenominatorNotUnit) {
  EXPECT_EQ(kind_of([] { encode(br(1, 257), field_modulus(257)); }), ErrorKind::DenominatorNotUnit);
  EXPECT_EQ(kind_of([] { encode(br(1, 4), ring_modulus(1028)); }), ErrorKind::DenominatorNotUnit);
}

TEST(Encode, AdditiveWhenDefined) {
  Modulus q = field_modulus(1009);
  for (std::int64_t a = -6; a <= 6; ++a)
    for (std::int64_t b = 1; b <= 6; ++b)
      for (std::int64_t c = -6; c <= 6; ++c)
        for (std::int64_t d = 1; d <= 6; ++d) {
          BoundedRational s = BoundedRational::from(br(a, b).value() + br(c, d).value());
          ASSERT_EQ(encode(s, q), encode(br(a, b), q) + encode(br(c, d), q));
        }
}

TEST(Decode, Examples) {
  Modulus q = field_modulus(257);
  EXPECT_EQ(decode(Residue(q, 86), LocalityScale(10, 1)), br(1, 3));
  EXPECT_EQ(decode(Residue(q, 0), LocalityScale(10, 1)), br(0, 1));
  EXPECT_EQ(decode(Residue(q, 0), LocalityScale(2, 1)), br(0, 1));
}

TEST(Decode, OracleFindsHalfAt128) {
  // 128 = -1 * 2^-1 mod 257, so 128 is local already at L = 3.
  Modulus q = field_modulus(257);
  EXPECT_EQ(brute_force_decode(128, 257, 3), br(-1, 2));
  EXPECT_EQ(decode(Residue(q, 128), LocalityScale(3, 1)), br(-1, 2));
}

TEST(Decode, NotLocalAgreesWithOracle) {
  Modulus q = field_modulus(257);
  int not_local = 0;
  for (std::uint64_t z = 0; z < 257; ++z) {
    auto want = brute_force_decode(z, 257, 3);
    auto got = decode(Residue(q, z), LocalityScale(3, 1));
    ASSERT_EQ(got, want) << z;
    if (!got) ++not_local;
  }
  // Every z with a pair of height <= 3 is the image of exactly one value.
  std::set<BoundedRational> reachable = brute_force_sort(3, 3);
  EXPECT_EQ(not_local, 257 - static_cast<int>(reachable.size()));
  EXPECT_FALSE(decode(Residue(q, 100), LocalityScale(3, 1)).has_value());
}

TEST(Decode, WindowIsAHardPrecondition) {
  Modulus q = field_modulus(257);
  // 2 * 12^2 = 288 >= 257.
  EXPECT_EQ(kind_of([&] { decode(Residue(q, 1), LocalityScale(12, 1)); }), ErrorKind::ScaleTooLargeForModulus);
  EXPECT_EQ(kind_of([&] { decode(Residue(q, 1), LocalityScale(100, 2)); }), ErrorKind::ScaleTooLargeForModulus);
  // 2 * 11^2 = 242 < 257.
  EXPECT_NO_THROW(decode(Residue(q, 1), LocalityScale(11, 1)));
}

TEST(Decode, RejectsRingResidues) {
  EXPECT_EQ(kind_of([] { decode(Residue(ring_modulus(1028), 3), LocalityScale(2, 1)); }), ErrorKind::InvalidArgument);
}

TEST(Decode, RoundTripExhaustive1009) {
  Modulus q = field_modulus(1009);
  LocalityScale s(10, 1);
  for (std::int64_t k2 = 1; k2 <= 10; ++k2)
    for (std::int64_t k1 = -10; k1 <= 10; ++k1) {
      BoundedRational r = br(k1, k2);
      ASSERT_EQ(decode(encode(r, q), s), r);
    }
}

TEST(Decode, AgreesWithExhaustiveMinimalPairOn257) {
  Modulus q = field_modulus(257);
  LocalityScale s(10, 1);
  for (std::uint64_t z = 0; z < 257; ++z) ASSERT_EQ(decode(Residue(q, z), s), brute_force_decode(z, 257, 10)) << z;
}

TEST(Decode, RoundTripRandomLargeModulus) {
  Modulus q = field_modulus((1ULL << 61) - 1);
  LocalityScale s(1000, 3);  // L = 1e9, 2e18 < 2^61 - 1
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<std::int64_t> num(-1000000000, 1000000000);
  std::uniform_int_distribution<std::int64_t> den(1, 1000000000);
  for (int t = 0; t < 20000; ++t) {
    BoundedRational r = br(num(gen), den(gen));
    ASSERT_EQ(decode(encode(r, q), s), r);
  }
}

TEST(Reconstruct, AsymmetricBox) {
  // Numerator up to 12, denominator up to 6: 2*12*6 = 144 < 257.
  Modulus q = field_modulus(257);
  HeightBox box{12, 6};
  ASSERT_TRUE(box.fits(257));
  for (std::int64_t k2 = 1; k2 <= 6; ++k2)
    for (std::int64_t k1 = -12; k1 <= 12; ++k1) {
      BoundedRational r = br(k1, k2);
      ASSERT_EQ(reconstruct(encode(r, q).value(), 257, box), r);
    }
  EXPECT_FALSE((HeightBox{12, 11}).fits(257));
}

TEST(InSort, Examples) {
  Modulus q = field_modulus(257);
  EXPECT_TRUE(in_sort(encode(br(1, 2), q), LocalityScale(10, 1)));
  EXPECT_FALSE(in_sort(encode(br(7, 2), q), LocalityScale(10, 1)));
  Modulus big = field_modulus(next_prime(200000001));
  EXPECT_TRUE(in_sort(encode(br(7, 2), big), LocalityScale(10, 4)));
  EXPECT_EQ(kind_of([&] { in_sort(encode(br(7, 2), q), LocalityScale(10, 4)); }),
            ErrorKind::ScaleTooLargeForModulus);
}

TEST(Norm, Examples) {
  Modulus q = field_modulus(257);
  LocalityScale s(10, 1);
  EXPECT_EQ(norm(encode(br(-2, 5), q), s), Rational(2, 5));
  EXPECT_EQ(norm(Residue::zero(q), s), Rational(0));
  EXPECT_EQ(norm(encode(br(1, 1), q), s), Rational(1));
  EXPECT_EQ(kind_of([&] { norm(Residue(q, 100), LocalityScale(3, 1)); }), ErrorKind::NotLocal);
}

TEST(Dist, Examples) {
  Modulus q = field_modulus(257);
  LocalityScale s(10, 1);
  EXPECT_EQ(dist(encode(br(1, 3), q), encode(br(1, 2), q), s), Rational(1, 6));
  Residue z = encode(br(3, 7), q);
  EXPECT_EQ(dist(z, z, s), Rational(0));
  EXPECT_EQ(dist(encode(br(1, 1), q), encode(br(0, 1), q), s), Rational(1));
}

TEST(Dist, CoherentWithDecodedDifferenceInsideWindow) {
  // Inner scale L' = 3; the outer scale L = 2 L'^2 = 18 satisfies
  // 2 * 18^2 = 648 < 1009.
  Modulus q = field_modulus(1009);
  LocalityScale outer(18, 1);
  auto pts = enumerate_bounded_rationals(3, 3);
  for (const auto& a : pts)
    for (const auto& b : pts) {
      Rational d = dist(encode(a, q), encode(b, q), outer);
      ASSERT_EQ(d, abs(a.value() - b.value()));
      ASSERT_EQ(d, dist(encode(b, q), encode(a, q), outer));
    }
}

TEST(Dist, PartialHomomorphismRandom) {
  Modulus q = field_modulus(1000003);
  LocalityScale s(2, 9);  // L = 512, 2 * 512^2 < 1000003
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<std::int64_t> num(-15, 15), den(1, 15);
  for (int t = 0; t < 5000; ++t) {
    BoundedRational x = br(num(gen), den(gen)), y = br(num(gen), den(gen));
    Rational sum = x.value() + y.value(), prod = x.value() * y.value();
    ASSERT_EQ(decode(encode(x, q) + encode(y, q), s), BoundedRational::from(sum));
    ASSERT_EQ(decode(encode(x, q) * encode(y, q), s), BoundedRational::from(prod));
  }
}

TEST(SortLevel, Examples) {
  LevelBound add1 = sort_level_for(SortOp::add, 10, 1);
  EXPECT_EQ(add1.level, 3u);
  EXPECT_GE(add1.height_bound, 200u);
  EXPECT_EQ(add1.ratio_bound, 2u);
  for (std::uint64_t m : {1u, 2u, 3u}) {
    LocalityScale s(10, m);
    LevelBound mul = sort_level_for(SortOp::mul, 10, m);
    EXPECT_GE(mul.height_bound, s.L() * s.L());
    EXPECT_EQ(mul.ratio_bound, m * m);
    EXPECT_GE(mul.level, m * m);
    LevelBound add = sort_level_for(SortOp::add, 10, m);
    EXPECT_EQ(add.ratio_bound, 2 * m);
    EXPECT_GE(add.height_bound, 2 * s.L() * s.L());
  }
  EXPECT_EQ(kind_of([] { sort_level_for(SortOp::mul, 1000, 4); }), ErrorKind::OverflowAtRequestedLevel);
}

TEST(SortLevel, ContainsActualResults) {
  const std::uint64_t l = 3;
  for (std::uint64_t m : {1u, 2u}) {
    auto pts = enumerate_sort_rationals(LocalityScale(l, m));
    for (SortOp op : {SortOp::add, SortOp::mul}) {
      LevelBound lb = sort_level_for(op, l, m);
      for (const auto& a : pts)
        for (const auto& b : pts) {
          Rational v = op == SortOp::add ? a.value() + b.value() : a.value() * b.value();
          ASSERT_LE(height(v), Integer(lb.height_bound));
          ASSERT_LE(abs(v), Rational(lb.level));
        }
    }
  }
}

TEST(EnumerateSort, Examples) {
  Modulus q = field_modulus(257);
  LocalityScale s(2, 1);
  auto got = enumerate_sort(s, q);
  std::vector<Residue> want;
  for (auto r : {br(-1, 1), br(-1, 2), br(0, 1), br(1, 2), br(1, 1)}) want.push_back(encode(r, q));
  EXPECT_EQ(got, want);
  // Oracle count for l = 3, m = 1 is 9: {0, +-1, +-1/2, +-1/3, +-2/3}.
  EXPECT_EQ(brute_force_sort(3, 1).size(), 9u);
  EXPECT_EQ(enumerate_sort(LocalityScale(3, 1), field_modulus(1000003)).size(), 9u);
}

TEST(EnumerateSort, MatchesBruteForceAndIsAscending) {
  for (std::int64_t l : {2, 3, 5, 7}) {
    for (std::int64_t m : {1, 2}) {
      LocalityScale s(l, m);
      auto got = enumerate_sort_rationals(s);
      auto want = brute_force_sort(static_cast<std::int64_t>(s.L()), m);
      ASSERT_EQ(std::set<BoundedRational>(got.begin(), got.end()), want);
      ASSERT_EQ(got.size(), want.size());
      ASSERT_TRUE(std::is_sorted(got.begin(), got.end()));
    }
  }
}

TEST(EnumerateSort, Errors) {
  EXPECT_EQ(kind_of([] { enumerate_sort(LocalityScale(12, 1), field_modulus(257)); }),
            ErrorKind::ScaleTooLargeForModulus);
  EXPECT_EQ(kind_of([] { enumerate_sort(LocalityScale(10, 1), field_modulus(257), 10); }),
            ErrorKind::EnumerationBudgetExceeded);
}

TEST(EnumerateSort, NestedAcrossLevels) {
  for (std::uint64_t m = 1; m < 5; ++m) {
    auto lo = enumerate_sort_rationals(LocalityScale(2, m));
    auto hi = enumerate_sort_rationals(LocalityScale(2, m + 1));
    ASSERT_TRUE(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
  }
}

TEST(RingMode, ProjectionCommutesWithEncoding) {
  Modulus n = ring_modulus(1028);
  Modulus q = field_modulus(257);
  for (std::int64_t k = -1027; k <= 1027; ++k)
    ASSERT_EQ(project_ring_to_field(Residue::embed(k, n), q), Residue::embed(k, q));
  for (std::int64_t k2 = 1; k2 <= 11; k2 += 2)
    for (std::int64_t k1 = -11; k1 <= 11; ++k1) {
      BoundedRational r = br(k1, k2);
      ASSERT_EQ(project_ring_to_field(encode(r, n), q), encode(r, q));
      ASSERT_EQ(decode_ring(encode(r, n), q, LocalityScale(11, 1)), r);
    }
}

TEST(RingMode, PullbackIsAPseudoMetric) {
  Modulus n = ring_modulus(1028);
  Modulus q = field_modulus(257);
  LocalityScale s(10, 1);
  // 0 and 257 are distinct in Z_1028 but at distance zero.
  EXPECT_EQ(dist_ring(Residue(n, 0), Residue(n, 257), q, s), Rational(0));
  // 2 divides 1028, so only odd denominators encode.
  EXPECT_EQ(dist_ring(encode(br(1, 3), n), encode(br(1, 1), n), q, s), Rational(2, 3));
}

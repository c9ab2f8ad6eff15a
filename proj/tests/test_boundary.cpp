#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_support.hpp"

namespace wraptree::testing {
namespace {

TEST(RestrictPosition, WrapsIntoHalfOpenCell) {
  const auto b = unit_line();
  EXPECT_DOUBLE_EQ(b.restrict_position(pt1(12.5))[0], 2.5);
  EXPECT_DOUBLE_EQ(b.restrict_position(pt1(10.0))[0], 0.0);
  EXPECT_DOUBLE_EQ(b.restrict_position(pt1(-0.5))[0], 9.5);
  EXPECT_DOUBLE_EQ(b.restrict_position(pt1(3.0))[0], 3.0);
}

TEST(RestrictPosition, FarOutsideInputsWrapInOneStep) {
  const auto b = unit_line();
  EXPECT_NEAR(b.restrict_position(pt1(1e6 + 2.5))[0], 2.5, 1e-9);
  EXPECT_NEAR(b.restrict_position(pt1(-1e6 - 2.5))[0], 7.5, 1e-9);
}

TEST(RestrictPosition, TinyNegativeStaysBelowUpper) {
  const auto b = unit_line();
  const double x = b.restrict_position(pt1(-1e-18))[0];
  EXPECT_GE(x, 0.0);
  EXPECT_LT(x, 10.0);
}

TEST(RestrictPosition, OffsetCellCorner) {
  const auto b = boundary_condition<double, 2>::periodic(vec<double, 2>({-3.0, 2.0}),
                                                         vec<double, 2>({7.0, 4.0}));
  const auto p = b.restrict_position(vec<double, 2>({7.0, 1.5}));
  EXPECT_DOUBLE_EQ(p[0], -3.0);
  EXPECT_DOUBLE_EQ(p[1], 3.5);
}

TEST(RestrictVector, MinimumImageHalfOpen) {
  const auto b = unit_line();
  EXPECT_DOUBLE_EQ(b.restrict_vector(pt1(8.0))[0], -2.0);
  EXPECT_DOUBLE_EQ(b.restrict_vector(pt1(0.0))[0], 0.0);
  EXPECT_DOUBLE_EQ(b.restrict_vector(pt1(5.0))[0], -5.0);
  EXPECT_DOUBLE_EQ(b.restrict_vector(pt1(-7.0))[0], 3.0);
  EXPECT_DOUBLE_EQ(b.restrict_vector(pt1(-5.0))[0], -5.0);
}

TEST(Boundary, NonFiniteInputIsDomainError) {
  const auto b = unit_line();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(b.restrict_position(pt1(nan)), std::domain_error);
  EXPECT_THROW(b.restrict_vector(pt1(inf)), std::domain_error);
  EXPECT_THROW(boundary_t<1>::unbounded().restrict_position(pt1(nan)),
               std::domain_error);
}

TEST(Boundary, InvalidCellIsConfigError) {
  using v2 = vec<double, 2>;
  EXPECT_THROW((cuboid_cell<double, 2>(v2({0, 0}), v2({10, 0}))), config_error);
  EXPECT_THROW((cuboid_cell<double, 2>(v2({0, 5}), v2({10, 1}))), config_error);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW((cuboid_cell<double, 2>(v2({0, 0}), v2({inf, 1}))), config_error);
}

template <std::size_t D>
void check_periodic_properties(std::uint64_t seed) {
  seeded_rng rng(seed);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int trial = 0; trial < 2000; ++trial) {
    const auto cell = random_cell<D>(rng);
    const auto b = boundary_t<D>::periodic(cell);
    point_t<D> p;
    point_t<D> shifted;
    point_t<D> v;
    point_t<D> w;
    for (std::size_t k = 0; k < D; ++k) {
      const double len = cell.period()[k];
      p[k] = rng.uniform(cell.lower()[k] - 2 * len, cell.upper()[k] + 2 * len);
      const int n = static_cast<int>(rng.below(7)) - 3;
      shifted[k] = p[k] + n * len;
      v[k] = rng.uniform(-4 * len, 4 * len);
      w[k] = rng.uniform(-4 * len, 4 * len);
    }

    const auto a = b.restrict_position(p);
    const auto c = b.restrict_position(shifted);
    const auto rv = b.restrict_vector(v);
    const auto rv_sum = b.restrict_vector(v + w);
    const auto rw = b.restrict_vector(w);
    for (std::size_t k = 0; k < D; ++k) {
      const double len = cell.period()[k];
      ASSERT_GE(a[k], cell.lower()[k]);
      ASSERT_LT(a[k], cell.upper()[k]);
      // Same residue class; compared on the circle because one side may
      // round onto the seam. Shifting by n*L costs a few ulps of the
      // shifted magnitude, not of the result.
      const double tol = 8 * eps * (std::abs(p[k]) + 4 * len + std::abs(cell.lower()[k]));
      ASSERT_LE(std::abs(detail::minimum_image(a[k] - c[k], len)), tol);

      ASSERT_GE(rv[k], -len / 2);
      ASSERT_LT(rv[k], len / 2);
      const double turns = (rv[k] - v[k]) / len;
      ASSERT_NEAR(turns, std::round(turns), 1e-9);

      ASSERT_LE(std::abs(rv_sum[k]), std::abs(rv[k]) + std::abs(rw[k]) + 1e-12 * len);
    }
  }
}

TEST(RestrictProperties, PeriodicityAndMinimumImage1D) { check_periodic_properties<1>(11); }
TEST(RestrictProperties, PeriodicityAndMinimumImage2D) { check_periodic_properties<2>(12); }
TEST(RestrictProperties, PeriodicityAndMinimumImage3D) { check_periodic_properties<3>(13); }

TEST(RestrictProperties, UnboundedIsIdentity) {
  seeded_rng rng(5);
  const auto b = boundary_t<3>::unbounded();
  for (int i = 0; i < 1000; ++i) {
    point_t<3> p;
    for (auto& x : p) x = rng.uniform(-1e6, 1e6);
    ASSERT_EQ(b.restrict_position(p), p);
    ASSERT_EQ(b.restrict_vector(p), p);
  }
}

}  // namespace
}  // namespace wraptree::testing

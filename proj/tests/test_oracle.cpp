#include <gtest/gtest.h>

#include "test_support.hpp"

namespace wraptree::testing {
namespace {

TEST(FlatStore, ScanExamples) {
  flat_store<double, 1> store(unit_line());
  EXPECT_TRUE(store.scan_intersects(box1(3, 1)).empty());

  store.insert(7, box1(3, 1));
  EXPECT_EQ(store.scan_intersects(box1(3, 1)), std::vector<object_id>{7});

  flat_store<double, 1> scene(unit_line());
  scene.insert(1, box1(0.5, 0.4));
  scene.insert(2, box1(9.5, 0.4));
  scene.insert(3, box1(5, 0.4));
  EXPECT_EQ(scene.scan_intersects(box1(0, 1)), (std::vector<object_id>{1, 2}));
  EXPECT_EQ(scene.scan_within(box1(0, 1)), (std::vector<object_id>{1, 2}));
  EXPECT_EQ(scene.scan_within(box1(0, 0.5)), std::vector<object_id>{});
}

TEST(FlatStore, RejectsDuplicateIdsAndRemoves) {
  flat_store<double, 1> store(unit_line());
  store.insert(1, box1(1, 1));
  EXPECT_THROW(store.insert(1, box1(2, 1)), duplicate_id);
  EXPECT_TRUE(store.remove(1));
  EXPECT_FALSE(store.remove(1));
  EXPECT_EQ(store.size(), 0u);
}

TEST(ImageOverlap, Examples) {
  const auto cell = unit_line().cell();
  EXPECT_TRUE(image_overlap(box1(3, 1), box1(3, 1), cell));
  EXPECT_TRUE(image_overlap(box1(0.5, 0.5), box1(9.5, 0.6), cell));
  EXPECT_FALSE(image_overlap(box1(0.5, 0.5), box1(9.5, 0.4), cell));
}

template <std::size_t D>
void check_image_agreement(std::uint64_t seed, double max_fraction) {
  seeded_rng rng(seed);
  std::size_t hits = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto cell = random_cell<D>(rng);
    const auto b = boundary_t<D>::periodic(cell);
    const auto r1 = random_box<D>(rng, cell, max_fraction);
    const auto r2 = random_box<D>(rng, cell, max_fraction);
    const bool fast = intersects(r1, r2, b);
    ASSERT_EQ(fast, image_overlap(r1, r2, cell)) << r1 << ' ' << r2;
    hits += fast;
  }
  // Both outcomes must actually be exercised.
  EXPECT_GT(hits, 100u);
  EXPECT_LT(hits, 9900u);
}

TEST(ImageOverlap, AgreesWithMinimumImage1D) { check_image_agreement<1>(41, 0.25); }
TEST(ImageOverlap, AgreesWithMinimumImage2D) { check_image_agreement<2>(42, 0.25); }
TEST(ImageOverlap, AgreesWithMinimumImage3D) { check_image_agreement<3>(43, 0.25); }

TEST(ImageOverlap, ClampRegimeIsFullAxis) {
  seeded_rng rng(44);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto cell = random_cell<2>(rng);
    const auto b = boundary_t<2>::periodic(cell);
    auto wide = random_box<2>(rng, cell, 0.25);
    wide.radius[0] = cell.half_period()[0];
    const auto other = random_box<2>(rng, cell, 0.25);
    // Axis 0 always overlaps, so the result is decided by axis 1 alone.
    const double dc = std::abs(b.restrict_component(wide.center[1] - other.center[1], 1));
    const bool axis1 = dc <= wide.radius[1] + other.radius[1];
    ASSERT_EQ(intersects(wide, other, b), axis1);
    ASSERT_EQ(image_overlap(wide, other, cell), axis1);
  }
}

TEST(IntervalOracles, PlainOverlapAndContainment) {
  EXPECT_TRUE(interval_overlap(box1(2, 1), box1(4, 1)));
  EXPECT_FALSE(interval_overlap(box1(0.5, 0.5), box1(9.5, 0.6)));
  EXPECT_TRUE(interval_contains(box1(5, 2), box1(6, 1)));
  EXPECT_FALSE(interval_contains(box1(5, 2), box1(6.5, 1)));
}

}  // namespace
}  // namespace wraptree::testing

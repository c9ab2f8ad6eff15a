#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "test_support.hpp"

namespace wraptree::testing {
namespace {

using tree2 = rtree<double, 2>;

boundary_t<2> cell10_2d() {
  return boundary_t<2>::periodic(point_t<2>::filled(0), point_t<2>::filled(10));
}

TEST(RTreeConstruction, OccupancyBounds) {
  tree2 t(cell10_2d(), 3, 8);
  EXPECT_EQ(t.size(), 0u);
  EXPECT_TRUE(t.query_intersects(box_t<2>{point_t<2>::filled(5), point_t<2>::filled(5)}).empty());

  EXPECT_THROW(tree2(cell10_2d(), 5, 8), config_error);
  EXPECT_THROW(tree2(cell10_2d(), 1, 8), config_error);
  EXPECT_NO_THROW(tree2(cell10_2d(), 4, 7));

  rtree<double, 3> t3(boundary_t<3>::unbounded(), 2, 4);
  EXPECT_TRUE(t3.empty());
  EXPECT_TRUE(t3.validate().empty());
}

TEST(RTreeInsert, SingleObjectIsFound) {
  tree2 t(cell10_2d());
  const box_t<2> box{point_t<2>({2, 3}), point_t<2>({0.5, 0.5})};
  t.insert(42, box);
  EXPECT_EQ(t.query_intersects(box), std::vector<object_id>{42});
  EXPECT_EQ(t.query_within(box), std::vector<object_id>{42});
}

TEST(RTreeInsert, OverflowSplitsRoot) {
  tree2 t(cell10_2d(), 3, 8);
  for (object_id i = 0; i < 9; ++i) {
    t.insert(i, box_t<2>{point_t<2>({1.0 + i, 1.0 + 0.5 * i}), point_t<2>::filled(0.2)});
  }
  EXPECT_EQ(t.depth(), 2u);
  EXPECT_EQ(t.root().entries.size(), 2u);
  for (const auto& e : t.root().entries) {
    EXPECT_GE(e.child().entries.size(), 3u);
    EXPECT_LE(e.child().entries.size(), 8u);
  }
  EXPECT_TRUE(t.validate().empty());
}

TEST(RTreeInsert, BoundaryStraddlingQuery1D) {
  rtree<double, 1> t(unit_line());
  t.insert(1, box1(0.5, 0.4));
  t.insert(2, box1(9.5, 0.4));
  t.insert(3, box1(5, 0.4));
  EXPECT_EQ(t.query_intersects(box1(0, 1)), (std::vector<object_id>{1, 2}));
}

TEST(RTreeInsert, DuplicateIdRejected) {
  tree2 t(cell10_2d());
  const box_t<2> box{point_t<2>({2, 3}), point_t<2>({0.5, 0.5})};
  t.insert(1, box);
  EXPECT_THROW(t.insert(1, box), duplicate_id);
  EXPECT_EQ(t.size(), 1u);
}

TEST(RTreeInsert, NonCanonicalInputIsWrapped) {
  tree2 t(cell10_2d());
  t.insert(1, box_t<2>{point_t<2>({12, -1}), point_t<2>({0.5, 0.5})});
  EXPECT_TRUE(t.validate().empty());
  EXPECT_EQ(t.query_intersects(box_t<2>{point_t<2>({2, 9}), point_t<2>::filled(0.1)}),
            std::vector<object_id>{1});
}

TEST(RTreeQuery, FullDomainReturnsAll) {
  seeded_rng rng(9);
  tree2 t(cell10_2d());
  const auto data = uniform_dataset(rng, cell10_2d().cell(), 300, 0.1);
  for (const auto& [id, box] : data) t.insert(id, box);
  const auto all = t.query_intersects(box_t<2>{point_t<2>::filled(3), point_t<2>::filled(5)});
  EXPECT_EQ(all.size(), 300u);
}

TEST(RTreeQuery, OversizeQueryClampedWithWarning) {
  warning_capture warnings;
  tree2 t(cell10_2d());
  t.insert(1, box_t<2>{point_t<2>({1, 1}), point_t<2>::filled(0.1)});
  t.insert(2, box_t<2>{point_t<2>({8, 8}), point_t<2>::filled(0.1)});
  const auto ids = t.query_intersects(box_t<2>{point_t<2>({5, 5}), point_t<2>({20, 20})});
  EXPECT_EQ(ids, (std::vector<object_id>{1, 2}));
  EXPECT_FALSE(warnings.messages.empty());
}

TEST(RTreeQuery, WithinExamples) {
  rtree<double, 1> t(unit_line());
  t.insert(1, box1(9, 0.5));
  t.insert(2, box1(5, 1.0));
  EXPECT_EQ(t.query_within(box1(0, 2)), std::vector<object_id>{1});
  EXPECT_EQ(t.query_within(box1(5, 1.0)), std::vector<object_id>{2});
  EXPECT_TRUE(t.query_within(box1(5, 0.1)).empty());
}

TEST(RTreeRemove, Basics) {
  tree2 t(cell10_2d());
  const box_t<2> box{point_t<2>({2, 3}), point_t<2>({0.5, 0.5})};
  EXPECT_FALSE(t.remove(1, box));
  t.insert(1, box);
  EXPECT_FALSE(t.remove(1, box_t<2>{point_t<2>({2, 3.5}), point_t<2>({0.5, 0.5})}));
  EXPECT_FALSE(t.remove(2, box));
  EXPECT_TRUE(t.remove(1, box));
  EXPECT_EQ(t.size(), 0u);
  EXPECT_FALSE(t.remove(1, box));
  EXPECT_TRUE(t.validate().empty());
}

TEST(RTreeRemove, MatchesWithinToleranceAfterCanonicalization) {
  tree2 t(cell10_2d());
  t.insert(5, box_t<2>{point_t<2>({0.0, 3}), point_t<2>({0.5, 0.5})});
  EXPECT_TRUE(t.remove(5, box_t<2>{point_t<2>({10.0 + 5e-10, 3}), point_t<2>({0.5, 0.5})}));
}

template <std::size_t D>
void insert_then_remove_all(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t M) {
  seeded_rng rng(seed);
  const cuboid_cell<double, D> cell(point_t<D>::filled(0), point_t<D>::filled(10));
  rtree<double, D> t(boundary_t<D>::periodic(cell), m, M);
  auto data = uniform_dataset(rng, cell, n, 0.1);
  for (const auto& [id, box] : data) {
    t.insert(id, box);
    const auto v = t.validate();
    ASSERT_TRUE(v.empty()) << v.front().path << ": " << v.front().rule << ": " << v.front().detail;
  }
  rng.shuffle(data);
  for (const auto& [id, box] : data) {
    ASSERT_TRUE(t.remove(id, box));
    const auto v = t.validate();
    ASSERT_TRUE(v.empty()) << v.front().path << ": " << v.front().rule << ": " << v.front().detail;
  }
  EXPECT_EQ(t.size(), 0u);
  EXPECT_EQ(t.depth(), 1u);
}

TEST(RTreeRemove, RandomRemoveAll2D) { insert_then_remove_all<2>(61, 100, 3, 8); }
TEST(RTreeRemove, RandomRemoveAll3D) { insert_then_remove_all<3>(62, 100, 2, 4); }
TEST(RTreeRemove, RandomRemoveAllLarge) { insert_then_remove_all<2>(63, 600, 2, 4); }

TEST(RTreeMutations, InterleavedSequenceStaysValid) {
  seeded_rng rng(64);
  const auto b = cell10_2d();
  tree2 t(b, 3, 8);
  flat_store<double, 2> store(b);
  std::vector<std::pair<object_id, box_t<2>>> live;
  object_id next = 1;
  for (int op = 0; op < 1000; ++op) {
    if (live.empty() || rng.uniform() < 0.6) {
      const auto box = random_box<2>(rng, b.cell(), 0.08);
      t.insert(next, box);
      store.insert(next, box);
      live.emplace_back(next++, box);
    } else {
      const std::size_t i = rng.below(live.size());
      ASSERT_TRUE(t.remove(live[i].first, live[i].second));
      store.remove(live[i].first);
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
    }
    ASSERT_TRUE(t.validate().empty()) << "after op " << op;
    ASSERT_EQ(t.size(), live.size());
  }
  for (const auto& q : random_queries(rng, b.cell(), 100, 0.5)) {
    ASSERT_EQ(t.query_intersects(q), store.scan_intersects(q));
  }
}

template <std::size_t D>
void check_oracle_equivalence(std::uint64_t seed, bool periodic, std::size_t n) {
  seeded_rng rng(seed);
  const cuboid_cell<double, D> cell(point_t<D>::filled(0), point_t<D>::filled(10));
  const auto b = periodic ? boundary_t<D>::periodic(cell) : boundary_t<D>::unbounded();
  rtree<double, D> t(b);
  flat_store<double, D> store(b);
  for (const auto& [id, box] : uniform_dataset(rng, cell, n, 0.1)) {
    t.insert(id, box);
    store.insert(id, box);
  }
  ASSERT_TRUE(t.validate().empty());
  for (const auto& q : random_queries(rng, cell, 200, 0.5)) {
    ASSERT_EQ(t.query_intersects(q), store.scan_intersects(q)) << q;
    ASSERT_EQ(t.query_within(q), store.scan_within(q)) << q;
    if (!periodic) {
      std::vector<object_id> plain;
      for (const auto& [id, box] : store.items()) {
        if (interval_overlap(q, box)) plain.push_back(id);
      }
      ASSERT_EQ(t.query_intersects(q), plain);
    }
  }
}

TEST(RTreeOracle, Periodic2D) { check_oracle_equivalence<2>(71, true, 500); }
TEST(RTreeOracle, Periodic3D) { check_oracle_equivalence<3>(72, true, 500); }
TEST(RTreeOracle, Unbounded2D) { check_oracle_equivalence<2>(73, false, 500); }

TEST(RTreeProperties, InsertionOrderDoesNotChangeResults) {
  seeded_rng rng(81);
  const auto b = cell10_2d();
  auto data = uniform_dataset(rng, b.cell(), 400, 0.1);
  const auto queries = random_queries(rng, b.cell(), 100, 0.5);
  tree2 a(b);
  for (const auto& [id, box] : data) a.insert(id, box);
  for (int perm = 0; perm < 3; ++perm) {
    rng.shuffle(data);
    tree2 c(b);
    for (const auto& [id, box] : data) c.insert(id, box);
    for (const auto& q : queries) {
      ASSERT_EQ(a.query_intersects(q), c.query_intersects(q));
      ASSERT_EQ(a.query_within(q), c.query_within(q));
    }
  }
}

TEST(RTreeProperties, TranslationInvariance) {
  seeded_rng rng(82);
  const auto b = cell10_2d();
  const auto data = uniform_dataset(rng, b.cell(), 400, 0.1);
  const auto queries = random_queries(rng, b.cell(), 100, 0.5);
  const point_t<2> shift({3.75, -6.5});  // exact in binary, no re-rounding
  tree2 a(b);
  tree2 s(b);
  for (const auto& [id, box] : data) {
    a.insert(id, box);
    s.insert(id, translated(box, shift, b));
  }
  std::size_t compared = 0;
  for (const auto& q : queries) {
    const auto moved = translated(q, shift, b);
    bool ambiguous = false;
    for (const auto& [id, box] : data) {
      ambiguous = ambiguous || near_contact<2>(q, box, b, 1e-9) ||
                  near_contact<2>(moved, translated(box, shift, b), b, 1e-9);
    }
    if (ambiguous) continue;
    ++compared;
    ASSERT_EQ(a.query_intersects(q), s.query_intersects(moved));
  }
  EXPECT_GT(compared, 90u);
}

TEST(RTreeProperties, PeriodicCoverSmallerForSeamCluster) {
  const auto data = seam_demo_dataset();
  tree2 periodic(cell10_2d());
  tree2 open(boundary_t<2>::unbounded());
  for (const auto& [id, box] : data) {
    periodic.insert(id, box);
    open.insert(id, box);
  }
  const double pv = volume(*periodic.bounds(), periodic.boundary());
  const double uv = volume(*open.bounds(), open.boundary());
  EXPECT_LT(pv, uv);
  RecordProperty("root_volume_ratio", std::to_string(pv / uv));
}

TEST(RTreeStats, CoverVolumesAndVisits) {
  seeded_rng rng(83);
  tree2 t(cell10_2d());
  for (const auto& [id, box] : uniform_dataset(rng, cell10_2d().cell(), 200, 0.05)) t.insert(id, box);
  const auto levels = t.cover_volume_by_level();
  ASSERT_EQ(levels.size(), t.depth());
  EXPECT_GT(levels.back(), 0.0);
  tree2::query_stats stats;
  t.query_intersects(box_t<2>{point_t<2>({5, 5}), point_t<2>::filled(0.5)}, &stats);
  EXPECT_GE(stats.nodes_visited, 1u);
  EXPECT_LE(stats.nodes_visited, t.node_count());
}

}  // namespace
}  // namespace wraptree::testing

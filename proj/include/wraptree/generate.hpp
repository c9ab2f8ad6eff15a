#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "wraptree/aabb.hpp"
#include "wraptree/boundary.hpp"
#include "wraptree/rtree.hpp"

namespace wraptree {

/// Seeded generator with a platform-independent uniform draw; std::mt19937_64
/// is fully specified, the standard distributions are not.
class seeded_rng {
 public:
  explicit seeded_rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  bool coin() { return (engine_() >> 63) != 0; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

template <typename Real, std::size_t D>
using labelled_boxes = std::vector<std::pair<object_id, aabb<Real, D>>>;

/// Centers uniform in the cell, radii uniform in [0, max_radius_fraction * L].
template <typename Real, std::size_t D>
labelled_boxes<Real, D> uniform_dataset(seeded_rng& rng, const cuboid_cell<Real, D>& cell,
                                        std::size_t count, double max_radius_fraction) {
  const auto b = boundary_condition<Real, D>::periodic(cell);
  labelled_boxes<Real, D> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    vec<Real, D> c;
    vec<Real, D> r;
    for (std::size_t k = 0; k < D; ++k) {
      c[k] = static_cast<Real>(rng.uniform(cell.lower()[k], cell.upper()[k]));
      r[k] = static_cast<Real>(rng.uniform(0.0, max_radius_fraction * cell.period()[k]));
    }
    out.emplace_back(static_cast<object_id>(i + 1), make_aabb(c, r, b));
  }
  return out;
}

/// Boxes clustered around the lower corner of the cell, alternating between
/// the two sides of the seam on axis 0 and random sides on other axes.
/// Centers lie within `spread` of the corner on every axis.
template <typename Real, std::size_t D>
labelled_boxes<Real, D> seam_cluster_dataset(seeded_rng& rng, const cuboid_cell<Real, D>& cell,
                                             std::size_t count, double spread,
                                             double max_radius) {
  const auto b = boundary_condition<Real, D>::periodic(cell);
  labelled_boxes<Real, D> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    vec<Real, D> c;
    vec<Real, D> r;
    for (std::size_t k = 0; k < D; ++k) {
      const bool below_seam = k == 0 ? (i % 2 == 1) : rng.coin();
      const double offset = rng.uniform(0.0, spread);
      c[k] = static_cast<Real>(cell.lower()[k] + (below_seam ? -offset : offset));
      r[k] = static_cast<Real>(rng.uniform(0.1 * max_radius, max_radius));
    }
    out.emplace_back(static_cast<object_id>(i + 1), make_aabb(c, r, b));
  }
  return out;
}

/// Query boxes; a `straddle_fraction` share is centred close enough to a
/// cell face on a random axis that it crosses the periodic seam.
template <typename Real, std::size_t D>
std::vector<aabb<Real, D>> random_queries(seeded_rng& rng, const cuboid_cell<Real, D>& cell,
                                          std::size_t count, double straddle_fraction,
                                          double min_radius_fraction = 0.02,
                                          double max_radius_fraction = 0.15) {
  const auto b = boundary_condition<Real, D>::periodic(cell);
  std::vector<aabb<Real, D>> out;
  out.reserve(count);
  const auto straddling = static_cast<std::size_t>(straddle_fraction * static_cast<double>(count) + 0.5);
  for (std::size_t i = 0; i < count; ++i) {
    vec<Real, D> c;
    vec<Real, D> r;
    for (std::size_t k = 0; k < D; ++k) {
      r[k] = static_cast<Real>(rng.uniform(min_radius_fraction, max_radius_fraction) * cell.period()[k]);
      c[k] = static_cast<Real>(rng.uniform(cell.lower()[k], cell.upper()[k]));
    }
    if (i < straddling) {
      const std::size_t axis = rng.below(D);
      const double inset = rng.uniform(0.0, 0.9) * static_cast<double>(r[axis]);
      c[axis] = static_cast<Real>(rng.coin() ? cell.lower()[axis] + inset : cell.upper()[axis] - inset);
    }
    out.push_back(make_aabb(c, r, b));
  }
  return out;
}

/// 20 boxes of radius <= 0.4 in the 2-D cell [0,10)^2, clustered within 1.5
/// of the corner seam with half of them on each side of it.
inline labelled_boxes<double, 2> seam_demo_dataset() {
  const cuboid_cell<double, 2> cell(vec<double, 2>::filled(0.0), vec<double, 2>::filled(10.0));
  seeded_rng rng(20180517);
  return seam_cluster_dataset(rng, cell, 20, 1.1, 0.4);
}

/// Scripted scene for a boundary-straddling query in the 2-D cell
/// [0,10)^2. Objects 1-4 are hits whose boxes cross the seam or meet the
/// query only through it, 5 is an ordinary in-cell hit, 6-8 are misses.
struct straddle_scene {
  labelled_boxes<double, 2> objects;
  aabb<double, 2> query;
  std::vector<object_id> expected_hits;
  std::vector<object_id> beyond_boundary;
};

inline straddle_scene straddle_demo_scene() {
  using v2 = vec<double, 2>;
  auto box = [](double cx, double cy, double rx, double ry) {
    return aabb<double, 2>{v2({cx, cy}), v2({rx, ry})};
  };
  straddle_scene s;
  // Query spans x in [-0.5, 1.5], y in [4, 6].
  s.query = box(0.5, 5.0, 1.0, 1.0);
  s.objects = {
      {1, box(9.3, 5.0, 0.5, 0.5)},   // x in [8.8, 9.8] -> image [-1.2, -0.2]
      {2, box(9.9, 4.5, 0.3, 0.3)},   // sticks out of the cell across x = 10
      {3, box(9.7, 6.6, 0.4, 0.7)},   // corner-adjacent, reaches y = 5.9
      {4, box(0.1, 6.5, 0.4, 0.6)},   // x in [-0.3, 0.5], crosses x = 0
      {5, box(1.2, 5.5, 0.2, 0.2)},   // plain hit inside the cell
      {6, box(8.9, 5.0, 0.3, 0.3)},   // image [-1.4, -0.8], misses
      {7, box(5.0, 5.0, 0.5, 0.5)},   // centre of the cell
      {8, box(0.5, 2.0, 0.5, 1.5)},   // ends at y = 3.5, misses below
  };
  s.expected_hits = {1, 2, 3, 4, 5};
  s.beyond_boundary = {1, 2, 3, 4};
  return s;
}

}  // namespace wraptree

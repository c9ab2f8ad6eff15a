#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "wraptree/aabb.hpp"
#include "wraptree/boundary.hpp"
#include "wraptree/diagnostics.hpp"
#include "wraptree/rtree.hpp"

namespace wraptree {

/// Linear-scan ground truth using the same predicates as the tree.
template <typename Real, std::size_t D>
class flat_store {
 public:
  using box_type = aabb<Real, D>;
  using boundary_type = boundary_condition<Real, D>;

  explicit flat_store(boundary_type boundary) : boundary_(std::move(boundary)) {}

  const boundary_type& boundary() const noexcept { return boundary_; }
  std::size_t size() const noexcept { return items_.size(); }
  const std::vector<std::pair<object_id, box_type>>& items() const noexcept { return items_; }

  void insert(object_id id, const box_type& box) {
    if (std::any_of(items_.begin(), items_.end(), [id](const auto& it) { return it.first == id; })) {
      throw duplicate_id("object id " + std::to_string(id) + " is already in the store");
    }
    items_.emplace_back(id, canonicalize(box, boundary_));
  }

  bool remove(object_id id) {
    auto it = std::find_if(items_.begin(), items_.end(), [id](const auto& e) { return e.first == id; });
    if (it == items_.end()) return false;
    items_.erase(it);
    return true;
  }

  std::vector<object_id> scan_intersects(const box_type& q) const {
    const box_type query = canonicalize(q, boundary_);
    return collect([&](const box_type& b) { return intersects(query, b, boundary_); });
  }

  std::vector<object_id> scan_within(const box_type& q) const {
    const box_type query = canonicalize(q, boundary_);
    return collect([&](const box_type& b) { return aabb_within(query, b, boundary_); });
  }

 private:
  template <typename Pred>
  std::vector<object_id> collect(Pred&& pred) const {
    std::vector<object_id> out;
    for (const auto& [id, box] : items_) {
      if (pred(box)) out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  boundary_type boundary_;
  std::vector<std::pair<object_id, box_type>> items_;
};

namespace detail {

template <typename Real>
bool closed_overlap(Real lo1, Real hi1, Real lo2, Real hi2) {
  return lo2 <= hi1 && lo1 <= hi2;
}

}  // namespace detail

/// Replicates r2 into its 3^D neighbouring images (offsets n*L with
/// n in {-1,0,1}^D) and tests plain min-max overlap against r1. Shares no
/// code with the minimum-image predicates, so it can check them.
template <typename Real, std::size_t D>
bool image_overlap(const aabb<Real, D>& r1, const aabb<Real, D>& r2,
                   const cuboid_cell<Real, D>& cell) {
  std::array<int, D> n;
  n.fill(-1);
  while (true) {
    bool all_axes = true;
    for (std::size_t k = 0; k < D && all_axes; ++k) {
      const Real shift = static_cast<Real>(n[k]) * cell.period()[k];
      all_axes = detail::closed_overlap(r1.center[k] - r1.radius[k], r1.center[k] + r1.radius[k],
                                        r2.center[k] + shift - r2.radius[k],
                                        r2.center[k] + shift + r2.radius[k]);
    }
    if (all_axes) return true;

    std::size_t k = 0;
    while (k < D && n[k] == 1) n[k++] = -1;
    if (k == D) return false;
    ++n[k];
  }
}

/// Textbook non-periodic overlap on raw min-max intervals.
template <typename Real, std::size_t D>
bool interval_overlap(const aabb<Real, D>& r1, const aabb<Real, D>& r2) {
  for (std::size_t k = 0; k < D; ++k) {
    if (!detail::closed_overlap(r1.center[k] - r1.radius[k], r1.center[k] + r1.radius[k],
                                r2.center[k] - r2.radius[k], r2.center[k] + r2.radius[k])) {
      return false;
    }
  }
  return true;
}

/// Textbook non-periodic containment on raw min-max intervals.
template <typename Real, std::size_t D>
bool interval_contains(const aabb<Real, D>& outer, const aabb<Real, D>& inner) {
  for (std::size_t k = 0; k < D; ++k) {
    if (inner.center[k] - inner.radius[k] < outer.center[k] - outer.radius[k]) return false;
    if (inner.center[k] + inner.radius[k] > outer.center[k] + outer.radius[k]) return false;
  }
  return true;
}

}  // namespace wraptree

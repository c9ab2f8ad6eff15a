#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wraptree/boundary.hpp"
#include "wraptree/diagnostics.hpp"
#include "wraptree/vector.hpp"

namespace wraptree {

/// Center-radius axis-aligned box. Under a periodic boundary the center is
/// kept inside the cell and radius never exceeds half the period; a radius
/// of exactly half the period means the box covers that whole axis.
template <typename Real, std::size_t D>
struct aabb {
  using point_type = vec<Real, D>;

  point_type center{};
  point_type radius{};

  friend bool operator==(const aabb&, const aabb&) = default;
  friend std::ostream& operator<<(std::ostream& os, const aabb& b) {
    return os << "{c:" << b.center << ", r:" << b.radius << '}';
  }
};

/// Min-max interchange form. Only used at I/O boundaries.
template <typename Real, std::size_t D>
struct min_max_box {
  vec<Real, D> min{};
  vec<Real, D> max{};

  friend bool operator==(const min_max_box&, const min_max_box&) = default;
};

namespace detail {

template <typename Real, std::size_t D>
bool full_axis(const aabb<Real, D>& box, const boundary_condition<Real, D>& b, std::size_t k) {
  return b.is_periodic() && box.radius[k] >= b.cell().half_period()[k];
}

template <typename Real, std::size_t D>
void clamp_radius(aabb<Real, D>& box, const boundary_condition<Real, D>& b) {
  if (!b.is_periodic()) return;
  const auto& half = b.cell().half_period();
  for (std::size_t k = 0; k < D; ++k) box.radius[k] = std::min(box.radius[k], half[k]);
}

// Grows outer.radius on axis k (center fixed) until the containment test
// below passes in floating point. Expansion results are rounded; this keeps
// them conservative by a few ulps at most.
template <typename Real, std::size_t D>
void grow_to_contain(aabb<Real, D>& outer, const aabb<Real, D>& inner,
                     const boundary_condition<Real, D>& b) {
  constexpr Real inf = std::numeric_limits<Real>::infinity();
  for (std::size_t k = 0; k < D; ++k) {
    if (full_axis(outer, b, k)) continue;
    const Real dc = std::abs(b.restrict_component(outer.center[k] - inner.center[k], k));
    outer.radius[k] = std::max(outer.radius[k], dc + inner.radius[k]);
    while (!(dc <= outer.radius[k] - inner.radius[k]) && !full_axis(outer, b, k)) {
      outer.radius[k] = std::nextafter(outer.radius[k], inf);
    }
    if (b.is_periodic()) {
      outer.radius[k] = std::min(outer.radius[k], b.cell().half_period()[k]);
    }
  }
}

template <typename Real, std::size_t D>
void grow_to_contain(aabb<Real, D>& outer, const vec<Real, D>& p,
                     const boundary_condition<Real, D>& b) {
  constexpr Real inf = std::numeric_limits<Real>::infinity();
  for (std::size_t k = 0; k < D; ++k) {
    const Real dc = std::abs(b.restrict_component(outer.center[k] - p[k], k));
    outer.radius[k] = std::max(outer.radius[k], dc);
    while (!(dc <= outer.radius[k])) outer.radius[k] = std::nextafter(outer.radius[k], inf);
  }
}

}  // namespace detail

/// Validates and canonicalizes a box: wraps the center into the cell and
/// clamps an oversize radius to full-axis coverage (reported as a warning).
template <typename Real, std::size_t D>
aabb<Real, D> make_aabb(const vec<Real, D>& center, const vec<Real, D>& radius,
                        const boundary_condition<Real, D>& b) {
  if (!all_finite(center) || !all_finite(radius)) {
    throw std::domain_error("aabb: non-finite component");
  }
  for (std::size_t k = 0; k < D; ++k) {
    if (radius[k] < Real(0)) throw std::domain_error("aabb: negative radius");
  }
  aabb<Real, D> box{b.restrict_position(center), radius};
  if (b.is_periodic()) {
    const auto& half = b.cell().half_period();
    for (std::size_t k = 0; k < D; ++k) {
      if (box.radius[k] > half[k]) {
        std::ostringstream os;
        os << "box radius " << box.radius[k] << " exceeds half period " << half[k] << " on axis "
           << k << "; treating the axis as fully covered";
        warn(os.str());
        box.radius[k] = half[k];
      }
    }
  }
  return box;
}

template <typename Real, std::size_t D>
aabb<Real, D> canonicalize(const aabb<Real, D>& box, const boundary_condition<Real, D>& b) {
  return make_aabb(box.center, box.radius, b);
}

/// Converts min-max to center-radius. Extents wider than a period cover the axis.
template <typename Real, std::size_t D>
aabb<Real, D> to_aabb(const min_max_box<Real, D>& box, const boundary_condition<Real, D>& b) {
  if (!all_finite(box.min) || !all_finite(box.max)) {
    throw std::domain_error("to_aabb: non-finite component");
  }
  vec<Real, D> center;
  vec<Real, D> radius;
  for (std::size_t k = 0; k < D; ++k) {
    const Real extent = box.max[k] - box.min[k];
    if (extent < Real(0)) {
      std::ostringstream os;
      os << "to_aabb: negative extent on axis " << k << " (min " << box.min[k] << ", max "
         << box.max[k] << ')';
      throw std::domain_error(os.str());
    }
    center[k] = (box.min[k] + box.max[k]) / Real(2);
    radius[k] = extent / Real(2);
  }
  return make_aabb(center, radius, b);
}

/// Unwrapped min-max form; min may lie below the cell's lower corner.
template <typename Real, std::size_t D>
min_max_box<Real, D> from_aabb(const aabb<Real, D>& r) {
  return {r.center - r.radius, r.center + r.radius};
}

/// True if the two boxes overlap on every axis under the boundary.
template <typename Real, std::size_t D>
bool intersects(const aabb<Real, D>& r1, const aabb<Real, D>& r2,
                const boundary_condition<Real, D>& b) {
  for (std::size_t k = 0; k < D; ++k) {
    const Real dc = b.restrict_component(r1.center[k] - r2.center[k], k);
    if (!(std::abs(dc) <= r1.radius[k] + r2.radius[k])) return false;
  }
  return true;
}

/// True if `inner` lies inside `outer`. An axis on which `outer` spans the
/// whole period contains anything.
template <typename Real, std::size_t D>
bool aabb_within(const aabb<Real, D>& outer, const aabb<Real, D>& inner,
                 const boundary_condition<Real, D>& b) {
  for (std::size_t k = 0; k < D; ++k) {
    if (detail::full_axis(outer, b, k)) continue;
    const Real dc = b.restrict_component(outer.center[k] - inner.center[k], k);
    if (!(std::abs(dc) <= outer.radius[k] - inner.radius[k])) return false;
  }
  return true;
}

template <typename Real, std::size_t D>
bool point_within(const aabb<Real, D>& r, const vec<Real, D>& p,
                  const boundary_condition<Real, D>& b) {
  for (std::size_t k = 0; k < D; ++k) {
    const Real dc = b.restrict_component(r.center[k] - p[k], k);
    if (!(std::abs(dc) <= r.radius[k])) return false;
  }
  return true;
}

/// Smallest box (per the nearest periodic image of r2's center) that
/// contains both r1 and r2.
template <typename Real, std::size_t D>
aabb<Real, D> expand_to_contain_aabb(const aabb<Real, D>& r1, const aabb<Real, D>& r2,
                                     const boundary_condition<Real, D>& b) {
  aabb<Real, D> out;
  for (std::size_t k = 0; k < D; ++k) {
    const Real dc = b.restrict_component(r2.center[k] - r1.center[k], k);
    const Real image = r1.center[k] + dc;
    const Real lo = std::min(r1.center[k] - r1.radius[k], image - r2.radius[k]);
    const Real hi = std::max(r1.center[k] + r1.radius[k], image + r2.radius[k]);
    out.center[k] = (lo + hi) / Real(2);
    out.radius[k] = (hi - lo) / Real(2);
  }
  out.center = b.restrict_position(out.center);
  detail::clamp_radius(out, b);
  detail::grow_to_contain(out, r1, b);
  detail::grow_to_contain(out, r2, b);
  return out;
}

/// Expands r to contain p, using the image of p nearest to r's center.
template <typename Real, std::size_t D>
aabb<Real, D> expand_to_contain_point(const aabb<Real, D>& r, const vec<Real, D>& p,
                                      const boundary_condition<Real, D>& b) {
  aabb<Real, D> out;
  for (std::size_t k = 0; k < D; ++k) {
    const Real image = r.center[k] + b.restrict_component(p[k] - r.center[k], k);
    const Real lo = std::min(r.center[k] - r.radius[k], image);
    const Real hi = std::max(r.center[k] + r.radius[k], image);
    out.center[k] = (lo + hi) / Real(2);
    out.radius[k] = (hi - lo) / Real(2);
  }
  out.center = b.restrict_position(out.center);
  detail::clamp_radius(out, b);
  detail::grow_to_contain(out, r, b);
  detail::grow_to_contain(out, p, b);
  return out;
}

/// Product of edge lengths; edges are capped at the period when periodic.
template <typename Real, std::size_t D>
Real volume(const aabb<Real, D>& r, const boundary_condition<Real, D>& b) {
  Real v = Real(1);
  for (std::size_t k = 0; k < D; ++k) {
    Real edge = Real(2) * r.radius[k];
    if (b.is_periodic()) edge = std::min(edge, b.cell().period()[k]);
    v *= edge;
  }
  return v;
}

/// Volume growth needed for `base` to absorb `add`; rounding noise clamped to 0.
template <typename Real, std::size_t D>
Real enlargement(const aabb<Real, D>& base, const aabb<Real, D>& add,
                 const boundary_condition<Real, D>& b) {
  const Real grown = volume(expand_to_contain_aabb(base, add, b), b);
  return std::max(Real(0), grown - volume(base, b));
}

/// Rigid shift of the center, re-wrapped into the cell.
template <typename Real, std::size_t D>
aabb<Real, D> translated(const aabb<Real, D>& r, const vec<Real, D>& offset,
                         const boundary_condition<Real, D>& b) {
  return {b.restrict_position(r.center + offset), r.radius};
}

}  // namespace wraptree

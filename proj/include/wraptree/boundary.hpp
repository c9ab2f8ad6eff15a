#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wraptree/diagnostics.hpp"
#include "wraptree/vector.hpp"

namespace wraptree {

namespace detail {

// Representative of x modulo period in [0, period).
template <typename Real>
Real wrap_offset(Real x, Real period) {
  Real r = x - period * std::floor(x / period);
  if (r >= period) r -= period;
  if (r < Real(0)) r += period;
  // r + period can round back up to period for tiny negative x.
  if (r >= period) r = Real(0);
  return r;
}

// Representative of x modulo period in [-period/2, period/2).
template <typename Real>
Real minimum_image(Real x, Real period) {
  const Real half = period / Real(2);
  Real r = x - period * std::floor(x / period + Real(0.5));
  if (r >= half) r -= period;
  if (r < -half) r += period;
  return r;
}

}  // namespace detail

/// Axis-aligned periodic unit cell [lower, upper).
template <typename Real, std::size_t D>
class cuboid_cell {
 public:
  using point_type = vec<Real, D>;

  cuboid_cell(const point_type& lower, const point_type& upper) : lower_(lower), upper_(upper) {
    for (std::size_t k = 0; k < D; ++k) {
      if (!std::isfinite(lower[k]) || !std::isfinite(upper[k])) {
        throw config_error("cuboid cell bounds must be finite");
      }
      if (!(upper[k] > lower[k])) {
        std::ostringstream os;
        os << "cuboid cell needs upper > lower on every axis (axis " << k << ": " << lower[k]
           << " .. " << upper[k] << ")";
        throw config_error(os.str());
      }
      period_[k] = upper[k] - lower[k];
      half_[k] = period_[k] / Real(2);
    }
  }

  const point_type& lower() const noexcept { return lower_; }
  const point_type& upper() const noexcept { return upper_; }
  const point_type& period() const noexcept { return period_; }
  /// Largest meaningful radius per axis; a box this wide covers the axis.
  const point_type& half_period() const noexcept { return half_; }

  friend bool operator==(const cuboid_cell&, const cuboid_cell&) = default;

 private:
  point_type lower_;
  point_type upper_;
  point_type period_;
  point_type half_;
};

/// Either unbounded space or a periodic cuboid cell. All axes share the mode.
template <typename Real, std::size_t D>
class boundary_condition {
 public:
  using point_type = vec<Real, D>;
  using cell_type = cuboid_cell<Real, D>;

  boundary_condition() = default;

  static boundary_condition unbounded() { return boundary_condition(); }
  static boundary_condition periodic(const cell_type& cell) { return boundary_condition(cell); }
  static boundary_condition periodic(const point_type& lower, const point_type& upper) {
    return boundary_condition(cell_type(lower, upper));
  }

  bool is_periodic() const noexcept { return cell_.has_value(); }
  const cell_type& cell() const { return cell_.value(); }
  const std::optional<cell_type>& maybe_cell() const noexcept { return cell_; }

  /// Wraps p into [lower, upper) per axis. Identity when unbounded.
  point_type restrict_position(point_type p) const {
    require_finite(p, "restrict_position");
    if (!cell_) return p;
    const auto& lo = cell_->lower();
    const auto& hi = cell_->upper();
    const auto& len = cell_->period();
    for (std::size_t k = 0; k < D; ++k) {
      Real r = lo[k] + detail::wrap_offset(p[k] - lo[k], len[k]);
      if (r >= hi[k]) r = lo[k];
      p[k] = r;
    }
    return p;
  }

  /// Minimum-image representative of v, per axis in [-L/2, L/2).
  point_type restrict_vector(point_type v) const {
    require_finite(v, "restrict_vector");
    if (!cell_) return v;
    const auto& len = cell_->period();
    for (std::size_t k = 0; k < D; ++k) v[k] = detail::minimum_image(v[k], len[k]);
    return v;
  }

  /// Single-axis minimum image; the caller guarantees finiteness.
  Real restrict_component(Real x, std::size_t axis) const noexcept {
    return cell_ ? detail::minimum_image(x, cell_->period()[axis]) : x;
  }

  friend bool operator==(const boundary_condition&, const boundary_condition&) = default;

 private:
  explicit boundary_condition(const cell_type& cell) : cell_(cell) {}

  static void require_finite(const point_type& p, const char* what) {
    if (!all_finite(p)) throw std::domain_error(std::string(what) + ": non-finite coordinate");
  }

  std::optional<cell_type> cell_;
};

template <typename Real, std::size_t D>
vec<Real, D> restrict_position(const vec<Real, D>& p, const boundary_condition<Real, D>& b) {
  return b.restrict_position(p);
}

template <typename Real, std::size_t D>
vec<Real, D> restrict_vector(const vec<Real, D>& v, const boundary_condition<Real, D>& b) {
  return b.restrict_vector(v);
}

}  // namespace wraptree

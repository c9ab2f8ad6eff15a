#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace wraptree {

/// Fixed-dimension coordinate tuple used for both points and displacements.
template <typename Real, std::size_t D>
struct vec {
  static_assert(D > 0, "dimension must be positive");
  using value_type = Real;
  static constexpr std::size_t dimension = D;

  std::array<Real, D> v{};

  constexpr vec() = default;
  constexpr explicit vec(const std::array<Real, D>& a) : v(a) {}

  static constexpr vec filled(Real x) {
    vec r;
    r.v.fill(x);
    return r;
  }

  constexpr Real& operator[](std::size_t i) { return v[i]; }
  constexpr const Real& operator[](std::size_t i) const { return v[i]; }
  static constexpr std::size_t size() { return D; }

  auto begin() { return v.begin(); }
  auto end() { return v.end(); }
  auto begin() const { return v.begin(); }
  auto end() const { return v.end(); }

  constexpr vec& operator+=(const vec& o) {
    for (std::size_t i = 0; i < D; ++i) v[i] += o.v[i];
    return *this;
  }
  constexpr vec& operator-=(const vec& o) {
    for (std::size_t i = 0; i < D; ++i) v[i] -= o.v[i];
    return *this;
  }
  constexpr vec& operator*=(Real s) {
    for (auto& x : v) x *= s;
    return *this;
  }
  constexpr vec& operator/=(Real s) {
    for (auto& x : v) x /= s;
    return *this;
  }

  friend constexpr vec operator+(vec a, const vec& b) { return a += b; }
  friend constexpr vec operator-(vec a, const vec& b) { return a -= b; }
  friend constexpr vec operator*(vec a, Real s) { return a *= s; }
  friend constexpr vec operator*(Real s, vec a) { return a *= s; }
  friend constexpr vec operator/(vec a, Real s) { return a /= s; }
  friend constexpr vec operator-(vec a) {
    for (auto& x : a.v) x = -x;
    return a;
  }
  friend constexpr bool operator==(const vec&, const vec&) = default;

  friend std::ostream& operator<<(std::ostream& os, const vec& p) {
    os << '(';
    for (std::size_t i = 0; i < D; ++i) os << (i ? ", " : "") << p.v[i];
    return os << ')';
  }
};

template <typename Real, std::size_t D>
bool all_finite(const vec<Real, D>& p) {
  return std::all_of(p.begin(), p.end(), [](Real x) { return std::isfinite(x); });
}

}  // namespace wraptree

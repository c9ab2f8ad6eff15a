#pragma once

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wraptree {

/// Invalid tree parameters (occupancy bounds, cell extents).
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimension of loaded data does not match the tree or boundary.
class dimension_mismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class duplicate_id : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using warning_handler = std::function<void(std::string_view)>;

namespace detail {
inline warning_handler& current_warning_handler() {
  static warning_handler handler = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return handler;
}
}  // namespace detail

/// Installs a sink for non-fatal diagnostics (e.g. clamped oversize boxes).
/// Returns the previous handler. Not thread-safe; install before use.
inline warning_handler set_warning_handler(warning_handler h) {
  auto old = std::move(detail::current_warning_handler());
  detail::current_warning_handler() = std::move(h);
  return old;
}

inline void warn(std::string_view msg) {
  if (auto& h = detail::current_warning_handler()) h(msg);
}

}  // namespace wraptree

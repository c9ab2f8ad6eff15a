#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wraptree/aabb.hpp"
#include "wraptree/boundary.hpp"
#include "wraptree/diagnostics.hpp"
#include "wraptree/rtree.hpp"

namespace wraptree {

/// Pieces of a box clipped to the cell, one per periodic image that
/// overlaps it. A box inside the cell yields itself; one crossing a single
/// seam yields two pieces, a corner crossing four.
template <typename Real, std::size_t D>
std::vector<min_max_box<Real, D>> periodic_fragments(const aabb<Real, D>& box,
                                                     const cuboid_cell<Real, D>& cell) {
  std::array<std::vector<std::pair<Real, Real>>, D> pieces;
  for (std::size_t k = 0; k < D; ++k) {
    const Real lo = box.center[k] - box.radius[k];
    const Real hi = box.center[k] + box.radius[k];
    for (int n = -1; n <= 1; ++n) {
      const Real shift = static_cast<Real>(n) * cell.period()[k];
      const Real a = std::max(lo + shift, cell.lower()[k]);
      const Real b = std::min(hi + shift, cell.upper()[k]);
      const bool degenerate_inside = lo == hi && a == b && a < cell.upper()[k];
      if (b > a || degenerate_inside) pieces[k].emplace_back(a, b);
    }
  }

  std::vector<min_max_box<Real, D>> out;
  std::array<std::size_t, D> pick{};
  for (std::size_t k = 0; k < D; ++k) {
    if (pieces[k].empty()) return out;
  }
  while (true) {
    min_max_box<Real, D> f;
    for (std::size_t k = 0; k < D; ++k) {
      f.min[k] = pieces[k][pick[k]].first;
      f.max[k] = pieces[k][pick[k]].second;
    }
    out.push_back(f);
    std::size_t k = 0;
    while (k < D && ++pick[k] == pieces[k].size()) pick[k++] = 0;
    if (k == D) break;
  }
  return out;
}

struct svg_options {
  double canvas = 480.0;  // pixels along the longer side of the drawn region
  double margin = 16.0;
};

namespace detail {

class svg_canvas {
 public:
  svg_canvas(double x0, double y0, double x1, double y1, const svg_options& opt)
      : x0_(x0), y1_(y1), margin_(opt.margin) {
    scale_ = opt.canvas / std::max(x1 - x0, y1 - y0);
    width_ = (x1 - x0) * scale_ + 2 * margin_;
    height_ = (y1 - y0) * scale_ + 2 * margin_;
    body_ << std::fixed << std::setprecision(2);
  }

  void rect(double xmin, double ymin, double xmax, double ymax) {
    // y grows upward in the data, downward in SVG.
    body_ << "    <rect x=\"" << px(xmin) << "\" y=\"" << py(ymax) << "\" width=\""
          << (xmax - xmin) * scale_ << "\" height=\"" << (ymax - ymin) * scale_ << "\"/>\n";
  }

  void open_group(const std::string& cls, const std::string& extra = "") {
    body_ << "  <g class=\"" << cls << "\"" << extra << ">\n";
  }
  void close_group() { body_ << "  </g>\n"; }

  std::string finish() const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
        << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n"
        << "  <style>\n"
        << "    .cell rect { fill: #ffffff; stroke: #000000; stroke-width: 1.5; }\n"
        << "    .cover rect { fill: none; stroke-width: 1; stroke-dasharray: 4 2; }\n"
        << "    .level-1 rect { stroke: #1f77b4; }\n"
        << "    .level-2 rect { stroke: #2ca02c; }\n"
        << "    .level-3 rect { stroke: #9467bd; }\n"
        << "    .level-deep rect { stroke: #8c564b; }\n"
        << "    .root-cover rect { stroke: #d62728; stroke-width: 2; stroke-dasharray: none; }\n"
        << "    .object rect { fill: #000000; fill-opacity: 0.6; stroke: none; }\n"
        << "    .object.hit rect { fill: #d62728; fill-opacity: 0.9; }\n"
        << "    .query rect { fill: #ffd700; fill-opacity: 0.45; stroke: #b8860b; }\n"
        << "  </style>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double px(double x) const { return margin_ + (x - x0_) * scale_; }
  double py(double y) const { return margin_ + (y1_ - y) * scale_; }

  double x0_;
  double y1_;
  double margin_;
  double scale_ = 1;
  double width_ = 0;
  double height_ = 0;
  std::ostringstream body_;
};

inline std::string level_class(int level) {
  return level <= 3 ? "level-" + std::to_string(level) : std::string("level-deep");
}

}  // namespace detail

/// Draws a 2-D tree: unit cell, node covers coloured by level (root cover
/// highlighted), object boxes and an optional query whose hits are marked.
/// Under a periodic boundary every box is drawn as its clipped periodic
/// fragments.
template <typename Real, std::size_t D>
std::string render_svg(const rtree<Real, D>& tree, const std::optional<aabb<Real, D>>& query = {},
                       const svg_options& opt = {}) {
  if constexpr (D != 2) {
    throw dimension_mismatch("SVG rendering supports 2-D trees only, got dimension " +
                             std::to_string(D));
  } else {
    using box_type = aabb<Real, 2>;
    const auto& b = tree.boundary();
    std::optional<box_type> q;
    if (query) q = canonicalize(*query, b);

    double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
    if (b.is_periodic()) {
      x0 = b.cell().lower()[0];
      y0 = b.cell().lower()[1];
      x1 = b.cell().upper()[0];
      y1 = b.cell().upper()[1];
    } else {
      bool first = true;
      auto extend = [&](const box_type& box) {
        const auto mm = from_aabb(box);
        if (first) {
          x0 = mm.min[0], y0 = mm.min[1], x1 = mm.max[0], y1 = mm.max[1];
          first = false;
        }
        x0 = std::min<double>(x0, mm.min[0]);
        y0 = std::min<double>(y0, mm.min[1]);
        x1 = std::max<double>(x1, mm.max[0]);
        y1 = std::max<double>(y1, mm.max[1]);
      };
      tree.for_each_object([&](object_id, const box_type& box) { extend(box); });
      if (q) extend(*q);
      if (x1 - x0 <= 0) x1 = x0 + 1;
      if (y1 - y0 <= 0) y1 = y0 + 1;
    }

    detail::svg_canvas canvas(x0, y0, x1, y1, opt);
    auto draw = [&](const box_type& box) {
      if (b.is_periodic()) {
        for (const auto& f : periodic_fragments(box, b.cell())) {
          canvas.rect(f.min[0], f.min[1], f.max[0], f.max[1]);
        }
      } else {
        const auto mm = from_aabb(box);
        canvas.rect(mm.min[0], mm.min[1], mm.max[0], mm.max[1]);
      }
    };

    if (b.is_periodic()) {
      canvas.open_group("cell");
      canvas.rect(x0, y0, x1, y1);
      canvas.close_group();
    }

    // Covers of non-root nodes, deepest level last so it sits on top.
    std::vector<std::vector<box_type>> covers(tree.depth());
    auto collect = [&](auto&& self, const typename rtree<Real, 2>::node& n) -> void {
      if (n.is_leaf()) return;
      for (const auto& e : n.entries) {
        if (e.holds_id()) continue;
        const int lvl = e.child().level;
        if (lvl >= 0 && static_cast<std::size_t>(lvl) < covers.size()) covers[lvl].push_back(e.box);
        self(self, e.child());
      }
    };
    collect(collect, tree.root());
    for (std::size_t lvl = covers.size(); lvl-- > 0;) {
      for (const auto& box : covers[lvl]) {
        canvas.open_group("cover " + detail::level_class(static_cast<int>(lvl)));
        draw(box);
        canvas.close_group();
      }
    }
    if (auto root_cover = tree.bounds()) {
      canvas.open_group("cover root-cover " + detail::level_class(tree.root().level));
      draw(*root_cover);
      canvas.close_group();
    }

    std::vector<object_id> hits;
    if (q) hits = tree.query_intersects(*q);
    tree.for_each_object([&](object_id id, const box_type& box) {
      const bool hit = std::binary_search(hits.begin(), hits.end(), id);
      canvas.open_group(hit ? "object hit" : "object", " data-id=\"" + std::to_string(id) + "\"");
      draw(box);
      canvas.close_group();
    });

    if (q) {
      canvas.open_group("query");
      draw(*q);
      canvas.close_group();
    }
    return canvas.finish();
  }
}

}  // namespace wraptree

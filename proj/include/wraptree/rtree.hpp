#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "wraptree/aabb.hpp"
#include "wraptree/boundary.hpp"
#include "wraptree/diagnostics.hpp"

namespace wraptree {

using object_id = std::uint64_t;

/// Guttman R-tree with quadratic split whose box arithmetic honours the
/// tree's boundary condition. Objects whose boxes cross the periodic seam are
/// stored once and found from either side.
///
/// Any number of concurrent const queries is fine; insert/remove need
/// exclusive access.
template <typename Real, std::size_t D>
class rtree {
 public:
  using box_type = aabb<Real, D>;
  using boundary_type = boundary_condition<Real, D>;
  using point_type = vec<Real, D>;

  static constexpr std::size_t default_min_entries = 3;
  static constexpr std::size_t default_max_entries = 8;

  struct node;

  struct entry {
    box_type box;
    std::variant<object_id, std::unique_ptr<node>> payload;

    bool holds_id() const noexcept { return std::holds_alternative<object_id>(payload); }
    object_id id() const { return std::get<object_id>(payload); }
    node& child() { return *std::get<std::unique_ptr<node>>(payload); }
    const node& child() const { return *std::get<std::unique_ptr<node>>(payload); }
    std::unique_ptr<node>& child_ptr() { return std::get<std::unique_ptr<node>>(payload); }
  };

  struct node {
    int level = 0;  // 0 for leaves
    std::vector<entry> entries;

    bool is_leaf() const noexcept { return level == 0; }
  };

  struct violation {
    std::string path;
    std::string rule;
    std::string detail;
  };

  struct query_stats {
    std::size_t nodes_visited = 0;
  };

  explicit rtree(boundary_type boundary, std::size_t min_entries = default_min_entries,
                 std::size_t max_entries = default_max_entries)
      : boundary_(std::move(boundary)),
        min_entries_(min_entries),
        max_entries_(max_entries),
        root_(std::make_unique<node>()) {
    if (max_entries < 2 || min_entries < 2 || min_entries > (max_entries + 1) / 2) {
      std::ostringstream os;
      os << "occupancy bounds need 2 <= m <= ceil(M/2), got m=" << min_entries
         << ", M=" << max_entries;
      throw config_error(os.str());
    }
  }

  rtree(rtree&&) noexcept = default;
  rtree& operator=(rtree&&) noexcept = default;

  /// Builds a tree from deserialized parts without restoring invariants.
  /// Run validate() before trusting the result.
  static rtree assemble(boundary_type boundary, std::size_t min_entries, std::size_t max_entries,
                        std::unique_ptr<node> root, std::size_t count) {
    rtree t(std::move(boundary), min_entries, max_entries);
    t.root_ = root ? std::move(root) : std::make_unique<node>();
    t.count_ = count;
    t.for_each_object([&t](object_id id, const box_type&) { t.ids_.insert(id); });
    return t;
  }

  const boundary_type& boundary() const noexcept { return boundary_; }
  std::size_t min_entries() const noexcept { return min_entries_; }
  std::size_t max_entries() const noexcept { return max_entries_; }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  bool contains_id(object_id id) const { return ids_.contains(id); }
  const node& root() const noexcept { return *root_; }
  /// Number of levels, 1 for a tree whose root is a leaf.
  std::size_t depth() const noexcept { return static_cast<std::size_t>(root_->level) + 1; }

  void insert(object_id id, const box_type& box) {
    if (ids_.contains(id)) {
      throw duplicate_id("object id " + std::to_string(id) + " is already in the tree");
    }
    box_type canonical = canonicalize(box, boundary_);
    insert_entry(entry{canonical, id}, 0);
    ids_.insert(id);
    ++count_;
  }

  /// Removes (id, box). The box must match the stored one to within 1e-9 per
  /// component after canonicalization.
  bool remove(object_id id, const box_type& box) {
    if (!ids_.contains(id)) return false;
    const box_type target = canonicalize(box, boundary_);
    std::vector<node*> nodes;
    std::vector<std::size_t> slots;
    if (!find_leaf(*root_, id, target, nodes, slots)) return false;

    nodes.back()->entries.erase(nodes.back()->entries.begin() +
                                static_cast<std::ptrdiff_t>(slots.back()));
    condense(nodes, slots);
    ids_.erase(id);
    --count_;
    return true;
  }

  std::vector<object_id> query_intersects(const box_type& q, query_stats* stats = nullptr) const {
    const box_type query = canonicalize(q, boundary_);
    std::vector<object_id> out;
    search(*root_, query, stats, [&](const box_type&) { return true; }, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<object_id> query_within(const box_type& q, query_stats* stats = nullptr) const {
    const box_type query = canonicalize(q, boundary_);
    std::vector<object_id> out;
    search(*root_, query, stats,
           [&](const box_type& b) { return aabb_within(query, b, boundary_); }, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  template <typename F>
  void for_each_object(F&& f) const {
    visit_objects(*root_, f);
  }

  /// Cover of everything stored, or nothing for an empty tree.
  std::optional<box_type> bounds() const {
    if (root_->entries.empty()) return std::nullopt;
    return cover_of(*root_);
  }

  /// Sum of node cover volumes, indexed by node level.
  std::vector<Real> cover_volume_by_level() const {
    std::vector<Real> out(depth(), Real(0));
    if (auto b = bounds()) out[root_->level] = volume(*b, boundary_);
    accumulate_volumes(*root_, out);
    return out;
  }

  std::size_t node_count() const { return count_nodes(*root_); }

  /// Empty iff all structural invariants hold.
  std::vector<violation> validate() const {
    std::vector<violation> out;
    std::unordered_set<object_id> seen;
    std::size_t objects = 0;
    check_node(*root_, "root", true, out, seen, objects);
    if (objects != count_) {
      std::ostringstream os;
      os << "recorded count " << count_ << " but " << objects << " leaf entries reachable";
      out.push_back({"root", "count", os.str()});
    }
    return out;
  }

 private:
  box_type cover_of(const node& n) const {
    box_type c = n.entries.front().box;
    for (std::size_t i = 1; i < n.entries.size(); ++i) {
      c = expand_to_contain_aabb(c, n.entries[i].box, boundary_);
    }
    for (const auto& e : n.entries) detail::grow_to_contain(c, e.box, boundary_);
    return c;
  }

  void insert_entry(entry e, int level) {
    if (auto sibling = insert_at(*root_, std::move(e), level)) {
      auto grown = std::make_unique<node>();
      grown->level = root_->level + 1;
      box_type old_cover = cover_of(*root_);
      grown->entries.push_back(entry{old_cover, std::move(root_)});
      grown->entries.push_back(std::move(*sibling));
      root_ = std::move(grown);
    }
  }

  // Returns the entry for a new sibling when `n` had to split.
  std::optional<entry> insert_at(node& n, entry e, int level) {
    if (n.level == level) {
      n.entries.push_back(std::move(e));
      if (n.entries.size() > max_entries_) return split(n);
      return std::nullopt;
    }
    const std::size_t i = choose_subtree(n, e.box);
    node& child = n.entries[i].child();
    const box_type added = e.box;
    auto sibling = insert_at(child, std::move(e), level);
    if (sibling) {
      n.entries[i].box = cover_of(child);
      n.entries.push_back(std::move(*sibling));
      if (n.entries.size() > max_entries_) return split(n);
    } else {
      box_type& cover = n.entries[i].box;
      cover = expand_to_contain_aabb(cover, added, boundary_);
      // The nearest image chosen for the parent may differ from the one the
      // child picked, so re-check every child box.
      for (const auto& ce : child.entries) detail::grow_to_contain(cover, ce.box, boundary_);
    }
    return std::nullopt;
  }

  // Least enlargement, then smaller volume, then lower index.
  std::size_t choose_subtree(const node& n, const box_type& box) const {
    std::size_t best = 0;
    Real best_growth = std::numeric_limits<Real>::infinity();
    Real best_volume = std::numeric_limits<Real>::infinity();
    for (std::size_t i = 0; i < n.entries.size(); ++i) {
      const Real growth = enlargement(n.entries[i].box, box, boundary_);
      const Real vol = volume(n.entries[i].box, boundary_);
      if (growth < best_growth || (growth == best_growth && vol < best_volume)) {
        best = i;
        best_growth = growth;
        best_volume = vol;
      }
    }
    return best;
  }

  // Quadratic split. Leaves the first group in `n`, returns the second.
  entry split(node& n) {
    std::vector<entry> pool = std::move(n.entries);
    n.entries.clear();

    std::size_t seed_a = 0;
    std::size_t seed_b = 1;
    Real worst = -std::numeric_limits<Real>::infinity();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        const Real dead = volume(expand_to_contain_aabb(pool[i].box, pool[j].box, boundary_),
                                 boundary_) -
                          volume(pool[i].box, boundary_) - volume(pool[j].box, boundary_);
        if (dead > worst) {
          worst = dead;
          seed_a = i;
          seed_b = j;
        }
      }
    }

    auto sibling = std::make_unique<node>();
    sibling->level = n.level;
    std::vector<entry>& group_a = n.entries;
    std::vector<entry>& group_b = sibling->entries;
    box_type cover_a = pool[seed_a].box;
    box_type cover_b = pool[seed_b].box;

    std::vector<std::size_t> remaining;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (i != seed_a && i != seed_b) remaining.push_back(i);
    }
    group_a.push_back(std::move(pool[seed_a]));
    group_b.push_back(std::move(pool[seed_b]));

    while (!remaining.empty()) {
      if (group_a.size() + remaining.size() <= min_entries_) {
        for (auto i : remaining) group_a.push_back(std::move(pool[i]));
        break;
      }
      if (group_b.size() + remaining.size() <= min_entries_) {
        for (auto i : remaining) group_b.push_back(std::move(pool[i]));
        break;
      }

      std::size_t pick = 0;
      Real best_diff = -1;
      Real grow_a = 0;
      Real grow_b = 0;
      for (std::size_t r = 0; r < remaining.size(); ++r) {
        const box_type& box = pool[remaining[r]].box;
        const Real da = enlargement(cover_a, box, boundary_);
        const Real db = enlargement(cover_b, box, boundary_);
        const Real diff = std::abs(da - db);
        if (diff > best_diff) {
          best_diff = diff;
          pick = r;
          grow_a = da;
          grow_b = db;
        }
      }

      entry chosen = std::move(pool[remaining[pick]]);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));

      bool to_a;
      if (grow_a != grow_b) {
        to_a = grow_a < grow_b;
      } else {
        const Real va = volume(cover_a, boundary_);
        const Real vb = volume(cover_b, boundary_);
        to_a = va != vb ? va < vb : group_a.size() <= group_b.size();
      }
      if (to_a) {
        cover_a = expand_to_contain_aabb(cover_a, chosen.box, boundary_);
        group_a.push_back(std::move(chosen));
      } else {
        cover_b = expand_to_contain_aabb(cover_b, chosen.box, boundary_);
        group_b.push_back(std::move(chosen));
      }
    }

    box_type sibling_cover = cover_of(*sibling);
    return entry{sibling_cover, std::move(sibling)};
  }

  bool matches(const box_type& a, const box_type& b) const {
    constexpr Real tol = Real(1e-9);
    for (std::size_t k = 0; k < D; ++k) {
      if (std::abs(boundary_.restrict_component(a.center[k] - b.center[k], k)) > tol) return false;
      if (std::abs(a.radius[k] - b.radius[k]) > tol) return false;
    }
    return true;
  }

  bool find_leaf(node& n, object_id id, const box_type& target, std::vector<node*>& nodes,
                 std::vector<std::size_t>& slots) {
    nodes.push_back(&n);
    slots.push_back(0);
    if (n.is_leaf()) {
      for (std::size_t i = 0; i < n.entries.size(); ++i) {
        if (n.entries[i].id() == id && matches(n.entries[i].box, target)) {
          slots.back() = i;
          return true;
        }
      }
    } else {
      box_type probe = target;
      for (auto& r : probe.radius) r += Real(1e-9);
      for (std::size_t i = 0; i < n.entries.size(); ++i) {
        if (!intersects(n.entries[i].box, probe, boundary_)) continue;
        slots.back() = i;
        if (find_leaf(n.entries[i].child(), id, target, nodes, slots)) return true;
      }
    }
    nodes.pop_back();
    slots.pop_back();
    return false;
  }

  // Guttman CondenseTree: drop underfull nodes along the path, tighten the
  // remaining covers, then reinsert orphaned entries at their own level.
  void condense(const std::vector<node*>& nodes, const std::vector<std::size_t>& slots) {
    std::vector<std::unique_ptr<node>> orphans;
    for (std::size_t d = nodes.size() - 1; d >= 1; --d) {
      node* n = nodes[d];
      node* parent = nodes[d - 1];
      const std::size_t slot = slots[d - 1];
      if (n->entries.size() < min_entries_) {
        orphans.push_back(std::move(parent->entries[slot].child_ptr()));
        parent->entries.erase(parent->entries.begin() + static_cast<std::ptrdiff_t>(slot));
      } else {
        parent->entries[slot].box = cover_of(*n);
      }
    }

    if (!orphans.empty()) {
      std::stable_sort(orphans.begin(), orphans.end(),
                       [](const auto& a, const auto& b) { return a->level > b->level; });
      if (root_->entries.empty()) root_->level = orphans.front()->level;
      for (auto& orphan : orphans) {
        for (auto& e : orphan->entries) insert_entry(std::move(e), orphan->level);
      }
    }

    while (!root_->is_leaf() && root_->entries.size() == 1) {
      std::unique_ptr<node> only = std::move(root_->entries.front().child_ptr());
      root_ = std::move(only);
    }
    if (root_->entries.empty()) root_->level = 0;
  }

  template <typename Pred>
  void search(const node& n, const box_type& q, query_stats* stats, Pred&& accept,
              std::vector<object_id>& out) const {
    if (stats) ++stats->nodes_visited;
    for (const auto& e : n.entries) {
      if (!intersects(e.box, q, boundary_)) continue;
      if (n.is_leaf()) {
        if (accept(e.box)) out.push_back(e.id());
      } else {
        search(e.child(), q, stats, accept, out);
      }
    }
  }

  template <typename F>
  void visit_objects(const node& n, F& f) const {
    for (const auto& e : n.entries) {
      if (e.holds_id()) {
        f(e.id(), e.box);
      } else {
        visit_objects(e.child(), f);
      }
    }
  }

  void accumulate_volumes(const node& n, std::vector<Real>& out) const {
    if (n.is_leaf()) return;
    for (const auto& e : n.entries) {
      if (e.holds_id()) continue;
      const node& c = e.child();
      if (c.level >= 0 && static_cast<std::size_t>(c.level) < out.size()) {
        out[c.level] += volume(e.box, boundary_);
      }
      accumulate_volumes(c, out);
    }
  }

  std::size_t count_nodes(const node& n) const {
    std::size_t total = 1;
    for (const auto& e : n.entries) {
      if (!e.holds_id()) total += count_nodes(e.child());
    }
    return total;
  }

  bool canonical(const box_type& b) const {
    if (!all_finite(b.center) || !all_finite(b.radius)) return false;
    for (std::size_t k = 0; k < D; ++k) {
      if (b.radius[k] < Real(0)) return false;
      if (boundary_.is_periodic()) {
        const auto& cell = boundary_.cell();
        if (b.center[k] < cell.lower()[k] || b.center[k] >= cell.upper()[k]) return false;
        if (b.radius[k] > cell.half_period()[k]) return false;
      }
    }
    return true;
  }

  void check_node(const node& n, const std::string& path, bool is_root,
                  std::vector<violation>& out, std::unordered_set<object_id>& seen,
                  std::size_t& objects) const {
    const std::size_t size = n.entries.size();
    if (n.level < 0) out.push_back({path, "level", "negative node level"});
    if (is_root) {
      if (size > max_entries_) {
        out.push_back({path, "occupancy", "root holds " + std::to_string(size) + " entries"});
      }
      if (!n.is_leaf() && size < 2) {
        out.push_back({path, "occupancy",
                       "internal root holds " + std::to_string(size) + " entries, needs >= 2"});
      }
    } else if (size < min_entries_ || size > max_entries_) {
      std::ostringstream os;
      os << "node holds " << size << " entries, expected " << min_entries_ << ".."
         << max_entries_;
      out.push_back({path, "occupancy", os.str()});
    }

    for (std::size_t i = 0; i < size; ++i) {
      const entry& e = n.entries[i];
      const std::string here = path + "/" + std::to_string(i);
      if (!canonical(e.box)) out.push_back({here, "box", "box is not canonical for the boundary"});

      if (n.is_leaf()) {
        if (!e.holds_id()) {
          out.push_back({here, "payload", "leaf entry references a child node"});
          continue;
        }
        ++objects;
        if (!seen.insert(e.id()).second) {
          out.push_back({here, "duplicate-id", "object id " + std::to_string(e.id())});
        }
        continue;
      }

      if (e.holds_id()) {
        out.push_back({here, "payload", "internal entry carries an object id"});
        continue;
      }
      const node& c = e.child();
      if (c.level != n.level - 1) {
        std::ostringstream os;
        os << "child level " << c.level << " under level " << n.level;
        out.push_back({here, "level", os.str()});
      }
      std::size_t escaped = 0;
      for (const auto& ce : c.entries) {
        if (!aabb_within(e.box, ce.box, boundary_)) ++escaped;
      }
      if (escaped > 0) {
        out.push_back({here, "parent-containment",
                       std::to_string(escaped) + " child box(es) not contained in entry box"});
      }
      check_node(c, here, false, out, seen, objects);
    }
  }

  boundary_type boundary_;
  std::size_t min_entries_;
  std::size_t max_entries_;
  std::unique_ptr<node> root_;
  std::size_t count_ = 0;
  std::unordered_set<object_id> ids_;
};

}  // namespace wraptree

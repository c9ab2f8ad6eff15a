#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wraptree/aabb.hpp"
#include "wraptree/boundary.hpp"
#include "wraptree/diagnostics.hpp"
#include "wraptree/generate.hpp"
#include "wraptree/oracle.hpp"
#include "wraptree/rtree.hpp"

namespace wraptree {

/// Periodic-vs-unbounded indexing comparison on identical seeded data.
struct bench_config {
  std::uint64_t seed = 1;
  std::size_t dimension = 2;
  std::size_t objects = 2000;
  std::size_t queries = 500;
  std::size_t min_entries = rtree<double, 2>::default_min_entries;
  std::size_t max_entries = rtree<double, 2>::default_max_entries;
  double cell_length = 10.0;
  std::string dataset = "uniform";  // "uniform" or "seam"
  double max_radius_fraction = 0.1;
  double straddle_fraction = 0.5;
  // Wall-clock figures break byte-for-byte reproducibility of the JSON.
  bool include_timing = false;
};

struct bench_result {
  nlohmann::json report;
  std::string text;
};

namespace detail {

inline void check_bench_config(const bench_config& c) {
  if (c.dimension < 1 || c.dimension > 3) throw config_error("bench dimension must be 1, 2 or 3");
  if (!(c.cell_length > 0)) throw config_error("cell length must be positive");
  if (c.dataset != "uniform" && c.dataset != "seam") {
    throw config_error("dataset must be 'uniform' or 'seam', got '" + c.dataset + "'");
  }
  if (!(c.max_radius_fraction >= 0 && c.max_radius_fraction <= 0.5)) {
    throw config_error("max radius fraction must lie in [0, 0.5]");
  }
  if (!(c.straddle_fraction >= 0 && c.straddle_fraction <= 1)) {
    throw config_error("straddle fraction must lie in [0, 1]");
  }
}

template <std::size_t D>
nlohmann::json bench_mode(const boundary_condition<double, D>& b, const bench_config& c,
                          const labelled_boxes<double, D>& data,
                          const std::vector<aabb<double, D>>& queries, double& build_ms) {
  rtree<double, D> tree(b, c.min_entries, c.max_entries);
  flat_store<double, D> store(b);

  const auto start = std::chrono::steady_clock::now();
  for (const auto& [id, box] : data) tree.insert(id, box);
  build_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  for (const auto& [id, box] : data) store.insert(id, box);

  std::size_t visits = 0;
  std::size_t hits = 0;
  std::size_t contained = 0;
  bool agree = tree.validate().empty();
  for (const auto& q : queries) {
    typename rtree<double, D>::query_stats stats;
    const auto found = tree.query_intersects(q, &stats);
    const auto within = tree.query_within(q);
    visits += stats.nodes_visited;
    hits += found.size();
    contained += within.size();
    agree = agree && found == store.scan_intersects(q) && within == store.scan_within(q);
  }
  const double nq = queries.empty() ? 1.0 : static_cast<double>(queries.size());
  const auto root = tree.bounds();
  return {{"objects", tree.size()},
          {"depth", tree.depth()},
          {"nodes", tree.node_count()},
          {"root_cover_volume", root ? volume(*root, b) : 0.0},
          {"cover_volume_by_level", tree.cover_volume_by_level()},
          {"mean_node_visits", static_cast<double>(visits) / nq},
          {"mean_result_size", static_cast<double>(hits) / nq},
          {"mean_within_size", static_cast<double>(contained) / nq},
          {"oracle_agreement", agree ? "pass" : "fail"}};
}

template <std::size_t D>
bench_result run_bench_dim(const bench_config& c) {
  const cuboid_cell<double, D> cell(vec<double, D>::filled(0.0), vec<double, D>::filled(c.cell_length));
  seeded_rng rng(c.seed);
  const auto data =
      c.dataset == "seam"
          ? seam_cluster_dataset(rng, cell, c.objects, 0.15 * c.cell_length,
                                 c.max_radius_fraction * c.cell_length)
          : uniform_dataset(rng, cell, c.objects, c.max_radius_fraction);
  const auto queries = random_queries(rng, cell, c.queries, c.straddle_fraction);

  double periodic_ms = 0;
  double unbounded_ms = 0;
  auto periodic = bench_mode<D>(boundary_condition<double, D>::periodic(cell), c, data, queries, periodic_ms);
  auto unbounded = bench_mode<D>(boundary_condition<double, D>::unbounded(), c, data, queries, unbounded_ms);
  if (c.include_timing) {
    periodic["build_ms"] = periodic_ms;
    unbounded["build_ms"] = unbounded_ms;
  }

  const double pv = periodic["root_cover_volume"].template get<double>();
  const double uv = unbounded["root_cover_volume"].template get<double>();
  nlohmann::json report{
      {"config",
       {{"seed", c.seed},
        {"dimension", c.dimension},
        {"objects", c.objects},
        {"queries", c.queries},
        {"min_entries", c.min_entries},
        {"max_entries", c.max_entries},
        {"cell_length", c.cell_length},
        {"dataset", c.dataset},
        {"max_radius_fraction", c.max_radius_fraction},
        {"straddle_fraction", c.straddle_fraction}}},
      {"modes", {{"periodic", periodic}, {"unbounded", unbounded}}},
      {"root_cover_volume_ratio", uv > 0 ? nlohmann::json(pv / uv) : nlohmann::json(nullptr)}};

  std::ostringstream text;
  text << std::fixed << std::setprecision(3);
  text << "dataset " << c.dataset << ", D=" << D << ", N=" << c.objects << ", queries=" << c.queries
       << ", seed=" << c.seed << "\n";
  text << std::left << std::setw(11) << "mode" << std::right << std::setw(10) << "build_ms"
       << std::setw(8) << "depth" << std::setw(14) << "root_volume" << std::setw(13) << "mean_visits"
       << std::setw(13) << "mean_hits" << std::setw(8) << "oracle" << "\n";
  auto row = [&](const char* name, const nlohmann::json& m, double ms) {
    text << std::left << std::setw(11) << name << std::right << std::setw(10) << ms << std::setw(8)
         << m["depth"].template get<std::size_t>() << std::setw(14) << m["root_cover_volume"].template get<double>()
         << std::setw(13) << m["mean_node_visits"].template get<double>() << std::setw(13)
         << m["mean_result_size"].template get<double>() << std::setw(8)
         << m["oracle_agreement"].template get<std::string>() << "\n";
  };
  row("periodic", periodic, periodic_ms);
  row("unbounded", unbounded, unbounded_ms);
  return {std::move(report), text.str()};
}

}  // namespace detail

inline bench_result run_bench(const bench_config& c) {
  detail::check_bench_config(c);
  switch (c.dimension) {
    case 1: return detail::run_bench_dim<1>(c);
    case 2: return detail::run_bench_dim<2>(c);
    default: return detail::run_bench_dim<3>(c);
  }
}

}  // namespace wraptree

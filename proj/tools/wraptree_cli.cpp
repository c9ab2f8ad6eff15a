// wraptree command-line front end: build, query, render, bench, validate.
//
// Exit codes: 0 success, 1 domain violation (bad data, invalid tree),
// 2 I/O or usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wraptree/wraptree.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_domain = 1;
constexpr int exit_io = 2;

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << data;
  if (!out) throw io_error("failed writing '" + path + "'");
}

nlohmann::json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw wraptree::parse_error(path + ": " + e.what());
  }
}

template <typename F>
int with_dimension(std::size_t dim, F&& f) {
  switch (dim) {
    case 1: return f(std::integral_constant<std::size_t, 1>{});
    case 2: return f(std::integral_constant<std::size_t, 2>{});
    case 3: return f(std::integral_constant<std::size_t, 3>{});
    default:
      throw wraptree::dimension_mismatch("unsupported dimension " + std::to_string(dim) +
                                         " (supported: 1, 2, 3)");
  }
}

template <std::size_t D>
wraptree::aabb<double, D> box_from_options(const std::string& center, const std::string& radius) {
  using namespace wraptree;
  return {detail::to_vec<double, D>(parse_coordinate_list(center, "query center"), "query center"),
          detail::to_vec<double, D>(parse_coordinate_list(radius, "query radius"), "query radius")};
}

struct build_options {
  std::string input;
  std::string output;
  std::string boundary = "unbounded";
  std::size_t min_entries = wraptree::rtree<double, 2>::default_min_entries;
  std::size_t max_entries = wraptree::rtree<double, 2>::default_max_entries;
  std::optional<std::size_t> dimension;
};

int cmd_build(const build_options& opt) {
  using namespace wraptree;
  std::ifstream in(opt.input);
  if (!in) throw io_error("cannot open '" + opt.input + "' for reading");
  const auto records = read_jsonl(in);
  const boundary_spec spec = parse_boundary_spec(opt.boundary);

  std::optional<std::size_t> dim = spec.dimension();
  if (!dim && !records.empty()) dim = records.front().center.size();
  if (!dim) dim = opt.dimension.value_or(2);
  if (opt.dimension && *opt.dimension != *dim) {
    throw dimension_mismatch("--dim " + std::to_string(*opt.dimension) +
                             " conflicts with data dimension " + std::to_string(*dim));
  }

  return with_dimension(*dim, [&](auto d) {
    constexpr std::size_t D = decltype(d)::value;
    rtree<double, D> tree(to_boundary<double, D>(spec), opt.min_entries, opt.max_entries);
    for (const auto& r : records) {
      const std::string where = "line " + std::to_string(r.line);
      try {
        tree.insert(r.id, make_aabb(detail::to_vec<double, D>(r.center, "center"),
                                    detail::to_vec<double, D>(r.radius, "radius"), tree.boundary()));
      } catch (const dimension_mismatch& e) {
        throw dimension_mismatch(where + ": " + e.what());
      } catch (const duplicate_id& e) {
        throw duplicate_id(where + ": " + e.what());
      } catch (const std::domain_error& e) {
        throw std::domain_error(where + ": " + e.what());
      }
    }
    write_file(opt.output, to_json(tree).dump(1) + "\n");

    double total = 0;
    for (double v : tree.cover_volume_by_level()) total += v;
    std::cout << "count " << tree.size() << "\n"
              << "depth " << tree.depth() << "\n"
              << "total_node_volume " << total << "\n";
    return exit_ok;
  });
}

struct query_options {
  std::string tree;
  std::string center;
  std::string radius;
  std::string mode = "intersects";
};

int cmd_query(const query_options& opt) {
  using namespace wraptree;
  const auto doc = read_json(opt.tree);
  return with_dimension(snapshot_dimension(doc), [&](auto d) {
    constexpr std::size_t D = decltype(d)::value;
    const auto tree = tree_from_json<double, D>(doc);
    const auto q = box_from_options<D>(opt.center, opt.radius);
    const auto ids = opt.mode == "within" ? tree.query_within(q) : tree.query_intersects(q);
    for (auto id : ids) std::cout << id << "\n";
    return exit_ok;
  });
}

struct render_options {
  std::string tree;
  std::string output;
  std::string center;
  std::string radius;
};

int cmd_render(const render_options& opt) {
  using namespace wraptree;
  const auto doc = read_json(opt.tree);
  const std::size_t dim = snapshot_dimension(doc);
  if (dim != 2) {
    throw dimension_mismatch("render supports 2-D snapshots only, got dimension " +
                             std::to_string(dim));
  }
  const auto tree = tree_from_json<double, 2>(doc);
  std::optional<aabb<double, 2>> q;
  if (!opt.center.empty() || !opt.radius.empty()) {
    if (opt.center.empty() || opt.radius.empty()) {
      throw std::invalid_argument("a query needs both --center and --radius");
    }
    q = box_from_options<2>(opt.center, opt.radius);
  }
  write_file(opt.output, render_svg(tree, q));
  return exit_ok;
}

int cmd_bench(const wraptree::bench_config& config, const std::string& json_path) {
  const auto result = wraptree::run_bench(config);
  const std::string json = result.report.dump(2) + "\n";
  std::cout << result.text;
  if (json_path == "-") {
    std::cout << json;
  } else if (!json_path.empty()) {
    write_file(json_path, json);
  }
  const bool agree =
      result.report["modes"]["periodic"]["oracle_agreement"] == "pass" &&
      result.report["modes"]["unbounded"]["oracle_agreement"] == "pass";
  return agree ? exit_ok : exit_domain;
}

int cmd_validate(const std::string& path) {
  using namespace wraptree;
  const auto doc = read_json(path);
  return with_dimension(snapshot_dimension(doc), [&](auto d) {
    constexpr std::size_t D = decltype(d)::value;
    const auto tree = tree_from_json<double, D>(doc);
    const auto violations = tree.validate();
    for (const auto& v : violations) {
      std::cout << v.path << ": " << v.rule << ": " << v.detail << "\n";
    }
    if (violations.empty()) {
      std::cout << "ok: " << tree.size() << " objects, depth " << tree.depth() << "\n";
      return exit_ok;
    }
    return exit_domain;
  });
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_domain;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic-boundary-aware R-tree toolkit"};
  app.require_subcommand(1);

  build_options build;
  auto* build_cmd = app.add_subcommand("build", "Build a tree snapshot from a JSONL dataset");
  build_cmd->add_option("-i,--input", build.input, "JSONL dataset, one {id, center, radius} per line")
      ->required();
  build_cmd->add_option("-o,--output", build.output, "Snapshot JSON to write")->required();
  build_cmd->add_option("-b,--boundary", build.boundary,
                        "'unbounded' or periodic cell 'lx,ly:ux,uy'");
  build_cmd->add_option("-m,--min", build.min_entries, "Minimum node occupancy");
  build_cmd->add_option("-M,--max", build.max_entries, "Maximum node occupancy");
  build_cmd->add_option("--dim", build.dimension, "Dimension when neither boundary nor data fix it");

  query_options query;
  auto* query_cmd = app.add_subcommand("query", "Print ids of objects matching a query box");
  query_cmd->add_option("-t,--tree", query.tree, "Snapshot JSON")->required();
  query_cmd->add_option("-c,--center", query.center, "Query center 'x,y,...'")->required();
  query_cmd->add_option("-r,--radius", query.radius, "Query half-widths 'rx,ry,...'")->required();
  query_cmd->add_option("--mode", query.mode, "intersects | within")
      ->check(CLI::IsMember({"intersects", "within"}));

  render_options render;
  auto* render_cmd = app.add_subcommand("render", "Draw a 2-D snapshot as SVG");
  render_cmd->add_option("-t,--tree", render.tree, "Snapshot JSON")->required();
  render_cmd->add_option("-o,--output", render.output, "SVG file to write")->required();
  render_cmd->add_option("-c,--center", render.center, "Optional query center 'x,y'");
  render_cmd->add_option("-r,--radius", render.radius, "Optional query half-widths 'rx,ry'");

  wraptree::bench_config bench;
  std::string bench_json;
  auto* bench_cmd = app.add_subcommand("bench", "Compare periodic and unbounded indexing");
  bench_cmd->add_option("--seed", bench.seed, "RNG seed");
  bench_cmd->add_option("--dim", bench.dimension, "Dimension (1-3)");
  bench_cmd->add_option("-n,--objects", bench.objects, "Number of objects");
  bench_cmd->add_option("-q,--queries", bench.queries, "Number of queries");
  bench_cmd->add_option("-m,--min", bench.min_entries, "Minimum node occupancy");
  bench_cmd->add_option("-M,--max", bench.max_entries, "Maximum node occupancy");
  bench_cmd->add_option("--cell", bench.cell_length, "Cell edge length");
  bench_cmd->add_option("--dataset", bench.dataset, "uniform | seam");
  bench_cmd->add_option("--max-radius", bench.max_radius_fraction, "Max radius as a fraction of L");
  bench_cmd->add_option("--straddle", bench.straddle_fraction, "Share of seam-crossing queries");
  bench_cmd->add_flag("--timing", bench.include_timing, "Include build times in the JSON report");
  bench_cmd->add_option("--json", bench_json, "Write the JSON report here ('-' for stdout)");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check the structural invariants of a snapshot");
  validate_cmd->add_option("-t,--tree", validate_path, "Snapshot JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_io;
  }

  if (*build_cmd) return guarded([&] { return cmd_build(build); });
  if (*query_cmd) return guarded([&] { return cmd_query(query); });
  if (*render_cmd) return guarded([&] { return cmd_render(render); });
  if (*bench_cmd) return guarded([&] { return cmd_bench(bench, bench_json); });
  if (*validate_cmd) return guarded([&] { return cmd_validate(validate_path); });
  return exit_io;
}

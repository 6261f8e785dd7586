#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tricount/bench.hpp"
#include "tricount/graph_core.hpp"
#include "tricount/graph_io.hpp"
#include "tricount/mapreduce.hpp"
#include "tricount/oracle.hpp"
#include "tricount/pipeline.hpp"

namespace {

using namespace tricount;

std::filesystem::path self_exe() {
  char buf[4096];
  ssize_t n = readlink("/proc/self/exe", buf, sizeof buf - 1);
  if (n <= 0) throw IoError("cannot resolve own executable path");
  buf[n] = '\0';
  return buf;
}

int cmd_count(const std::string& algo, const std::string& input, const std::string& format,
              std::size_t mappers, std::size_t reducers, std::size_t channel_cap,
              std::size_t workers, const std::string& spill, bool timing) {
  auto edges = dedup_stream(io::parse(input, io::format_from_string(format)));

  auto start = std::chrono::steady_clock::now();
  std::uint64_t count = 0;
  if (algo == "oracle") {
    count = oracle::count_triangles_exact(edges);
  } else if (algo == "pipeline") {
    pipeline::PipelineConfig cfg;
    cfg.channel_capacity_ch1 = cfg.channel_capacity_ch2 = cfg.channel_capacity_ch3 = channel_cap;
    if (workers > 0) cfg.max_live_filters = workers;
    count = pipeline::run_pipeline(edges, cfg).triangles;
  } else {
    mapreduce::MrConfig cfg;
    cfg.mappers = mappers;
    cfg.reducers = reducers;
    cfg.channel_capacity = std::max<std::size_t>(1, channel_cap);
    if (!spill.empty()) cfg.spill_dir = spill;
    count = mapreduce::count_triangles_mapreduce(edges, cfg).triangles;
  }
  auto elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);

  std::cout << count;
  if (timing) std::cout << ' ' << elapsed.count();
  std::cout << '\n';
  return 0;
}

int cmd_gen(std::optional<std::uint64_t> nodes, std::optional<std::uint64_t> arcs,
            double density, std::uint64_t seed, const std::string& out_path,
            const std::string& format) {
  io::GenSpec spec;
  if (nodes) {
    spec.mode = io::GenSpec::Mode::by_nodes;
    spec.nodes = *nodes;
  } else {
    spec.mode = io::GenSpec::Mode::by_arcs;
    spec.arcs = *arcs;
  }
  spec.density = density;
  spec.seed = seed;

  auto edges = io::generate(spec);
  io::write(edges, out_path, io::format_from_string(format));
  auto stats = graph_stats(edges);
  std::cout << "vertices=" << stats.num_vertices << " edges=" << stats.num_edges
            << " arcs=" << stats.num_arcs << " density=" << stats.density << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact triangle counting over edge streams: dynamic pipeline vs MapReduce"};
  app.require_subcommand(1);

  // count
  auto* count = app.add_subcommand("count", "count triangles in an edge-list file");
  std::string algo, input, format = "edgelist", spill;
  std::size_t mappers = 4, reducers = 4, channel_cap = 64, workers = 0;
  bool timing = false;
  count->add_option("--algo", algo, "engine")->required()
      ->check(CLI::IsMember({"pipeline", "mapreduce", "oracle"}));
  count->add_option("--input", input, "input graph file")->required();
  count->add_option("--format", format)->check(CLI::IsMember({"dimacs", "snap", "edgelist"}));
  count->add_option("--mappers", mappers, "mapreduce mapper count");
  count->add_option("--reducers", reducers, "mapreduce reducer count");
  count->add_option("--channel-cap", channel_cap, "channel buffer capacity (0 = rendezvous)");
  count->add_option("--workers", workers,
                    "pipeline multiplexing width (0 = one task per filter)");
  count->add_option("--spill", spill, "mapreduce round boundary directory");
  count->add_flag("--timing", timing, "append engine-only elapsed ms to the output line");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random graph of a given density");
  std::uint64_t gen_nodes = 0, gen_arcs = 0, gen_seed = 0;
  double gen_density = 0.0;
  std::string gen_out, gen_format = "edgelist";
  auto* nodes_opt = gen->add_option("--nodes", gen_nodes, "vertex count");
  auto* arcs_opt = gen->add_option("--arcs", gen_arcs, "arc count (2x edges)");
  nodes_opt->excludes(arcs_opt);
  gen->add_option("--density", gen_density)->required();
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out)->required();
  gen->add_option("--format", gen_format)->check(CLI::IsMember({"dimacs", "snap", "edgelist"}));

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark manifest, emitting CSV");
  std::string manifest, csv_out = "bench.csv";
  bench->add_option("--manifest", manifest, "benchmark case file")->required();
  bench->add_option("--out", csv_out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*count)
      return cmd_count(algo, input, format, mappers, reducers, channel_cap, workers, spill,
                       timing);
    if (*gen) {
      if (nodes_opt->count() == 0 && arcs_opt->count() == 0) {
        std::cerr << "gen: one of --nodes or --arcs is required\n";
        return 2;
      }
      std::optional<std::uint64_t> n, a;
      if (nodes_opt->count()) n = gen_nodes;
      else a = gen_arcs;
      return cmd_gen(n, a, gen_density, gen_seed, gen_out, gen_format);
    }
    if (*bench) {
      auto cases = tricount::bench::parse_manifest(manifest);
      tricount::bench::run_bench(cases, csv_out, self_exe());
      return 0;
    }
  } catch (const tricount::InfeasibleSpec& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const tricount::MalformedLine& e) {
    std::cerr << "error: " << e.what() << '\n';
    return *bench ? 2 : 1;
  } catch (const tricount::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

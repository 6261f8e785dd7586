// Acceptance suite: one pass/fail line per criterion. Usage:
//   acceptance <path-to-tricount-binary>
// The binary path is needed by the benchmark-harness criterion, which runs
// engines in child processes.

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "tricount/bench.hpp"
#include "tricount/graph_core.hpp"
#include "tricount/graph_io.hpp"
#include "tricount/mapreduce.hpp"
#include "tricount/oracle.hpp"
#include "tricount/pipeline.hpp"

using namespace tricount;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL");
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

EdgeSeq tri_star() { return {{2, 1}, {1, 3}, {4, 5}, {2, 3}, {4, 7}, {4, 6}}; }

EdgeSeq shuffled(EdgeSeq edges, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = edges.size(); i > 1; --i) std::swap(edges[i - 1], edges[rng() % i]);
  return edges;
}

// The generated-graph suite shared by criteria 2, 3, 4 and 7:
// n in 5..60, densities 0.1/0.5/0.9, several seeds -> 216 graphs.
std::vector<EdgeSeq> make_suite() {
  std::vector<EdgeSeq> suite;
  for (std::uint64_t n = 5; n <= 60; n += 5)
    for (double d : {0.1, 0.5, 0.9})
      for (std::uint64_t seed = 1; seed <= 6; ++seed)
        suite.push_back(io::generate({io::GenSpec::Mode::by_nodes, n, 0, d, seed}));
  return suite;
}

pipeline::PipelineConfig buffered_cfg() {
  pipeline::PipelineConfig cfg;
  cfg.channel_capacity_ch1 = cfg.channel_capacity_ch2 = cfg.channel_capacity_ch3 = 64;
  return cfg;
}

void criterion1_golden() {
  auto t0 = Clock::now();
  auto g = tri_star();
  bool ok = oracle::count_triangles_exact(g) == 1;
  ok = ok && pipeline::run_pipeline(g).triangles == 1;
  auto mr = mapreduce::count_triangles_mapreduce(g, {});
  ok = ok && mr.triangles == 1 && mr.raw_sum == 3;
  ok = ok && oracle::enumerate_2paths(g).size() == 6;
  auto p = oracle::simulate_partition(g);
  ok = ok && p == oracle::PartitionResult{{2, {1, 3}}, {1, {3}}, {4, {5, 7, 6}}};
  double el = seconds_since(t0);
  ok = ok && el < 1.0;
  std::ostringstream d;
  d << "tri_star golden values, " << el << " s";
  report(1, ok, d.str());
}

void criterion2_equivalence(const std::vector<EdgeSeq>& suite,
                            const std::vector<std::uint64_t>& expected) {
  auto t0 = Clock::now();
  bool ok = true;
  mapreduce::MrConfig mr_cfg;
  mr_cfg.mappers = 2;
  mr_cfg.reducers = 2;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    if (pipeline::run_pipeline(suite[i], buffered_cfg()).triangles != expected[i]) ok = false;
    if (mapreduce::count_triangles_mapreduce(suite[i], mr_cfg).triangles != expected[i])
      ok = false;
  }
  double el = seconds_since(t0);
  ok = ok && el < 60.0;
  std::ostringstream d;
  d << suite.size() << " graphs, both engines vs oracle, " << el << " s";
  report(2, ok, d.str());
}

void criterion3_pipeline_invariants(const std::vector<EdgeSeq>& suite,
                                    const std::vector<std::uint64_t>& expected) {
  bool ok = true;
  for (std::size_t i = 0; i < suite.size() && ok; ++i) {
    const auto& g = suite[i];
    auto oc = pipeline::run_pipeline(g, buffered_cfg());

    std::unordered_set<NodeId> vertices;
    for (const Edge& e : g) {
      vertices.insert(e.first);
      vertices.insert(e.second);
    }
    if (oc.filters_created > vertices.size() - 1) ok = false;

    std::unordered_set<NodeId> covered;
    std::unordered_set<EdgeKey> assigned;
    std::uint64_t tally_sum = 0;
    for (const auto& f : oc.filters) {
      covered.insert(f.responsible);
      tally_sum += f.tally;
      for (NodeId v : f.adjacency) {
        covered.insert(v);
        if (!assigned.insert(edge_key({f.responsible, v})).second) ok = false;  // disjoint
      }
    }
    if (covered != vertices) ok = false;          // dominator property
    if (assigned.size() != g.size()) ok = false;  // exact cover
    if (tally_sum != expected[i]) ok = false;

    for (std::uint64_t perm = 1; perm <= 5; ++perm)
      if (pipeline::run_pipeline(shuffled(g, perm), buffered_cfg()).triangles != expected[i])
        ok = false;
  }
  report(3, ok, "filter bound, dominator set, exact cover, tally sum, 5 permutations/graph");
}

void criterion4_mapreduce_invariants(const std::vector<EdgeSeq>& suite,
                                     const std::vector<std::uint64_t>& expected) {
  bool ok = true;
  auto spill = std::filesystem::temp_directory_path() / "tricount_acceptance_spill";
  const std::size_t mapper_opts[] = {1, 2, 8};
  const std::size_t reducer_opts[] = {1, 3, 8};
  const std::size_t cap_opts[] = {1, 64};
  for (std::size_t i = 0; i < suite.size() && ok; ++i) {
    const auto& g = suite[i];
    // every mapper x reducer combination; capacity and spill cycle with i
    for (std::size_t mi = 0; mi < 3 && ok; ++mi)
      for (std::size_t ri = 0; ri < 3 && ok; ++ri) {
        mapreduce::MrConfig cfg;
        cfg.mappers = mapper_opts[mi];
        cfg.reducers = reducer_opts[ri];
        cfg.channel_capacity = cap_opts[(i + mi + ri) % 2];
        if ((i + mi + ri) % 3 == 0) cfg.spill_dir = spill;
        auto r = mapreduce::count_triangles_mapreduce(g, cfg);
        if (r.triangles != expected[i] || r.raw_sum % 3 != 0 ||
            r.raw_sum != 3 * r.triangles)
          ok = false;
      }

    // Round I boundary multiset equals the 2-path oracle
    if (ok && i % 10 == 0) {
      mapreduce::MrConfig cfg;
      cfg.mappers = 3;
      cfg.reducers = 4;
      auto got = mapreduce::run_round1(g, cfg);
      std::vector<mapreduce::PathTriple> want;
      for (const auto& p : oracle::enumerate_2paths(g)) want.push_back({p.a, p.mid, p.b});
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      if (got != want) ok = false;
    }
  }
  std::filesystem::remove_all(spill);
  report(4, ok, "raw_sum mod 3, worker/capacity/spill invariance, round I multiset");
}

void criterion5_smoke() {
  auto t0 = Clock::now();
  auto g = io::generate({io::GenSpec::Mode::by_nodes, 1000, 0, 0.9, 4});
  bool ok = g.size() == 449550;
  auto expected = oracle::count_triangles_exact(g);

  auto tp = Clock::now();
  auto oc = pipeline::run_pipeline(g, buffered_cfg());
  double pipe_s = seconds_since(tp);
  ok = ok && oc.triangles == expected && pipe_s < 600.0;

  mapreduce::MrConfig cfg;
  cfg.mappers = 2;
  cfg.reducers = 2;
  cfg.channel_capacity = 4096;
  cfg.spill_dir = std::filesystem::temp_directory_path() / "tricount_acceptance_smoke";
  auto mr = mapreduce::count_triangles_mapreduce(g, cfg);
  std::filesystem::remove_all(*cfg.spill_dir);
  ok = ok && mr.triangles == expected;

  std::ostringstream d;
  d << "n=1000 d=0.9, " << expected << " triangles, pipeline " << pipe_s << " s, total "
    << seconds_since(t0) << " s";
  report(5, ok, d.str());
}

void criterion6_bench(const std::filesystem::path& cli) {
  auto csv = std::filesystem::temp_directory_path() / "tricount_acceptance_bench.csv";
  bool csv_ok = false;
  std::ostringstream detail;
  try {
    std::vector<bench::BenchCase> cases;
    for (double d : {0.5, 0.9})
      for (std::string engine : {"pipeline", "mapreduce"}) {
        bench::BenchCase c;
        c.name = engine + "_d" + std::to_string(int(d * 10));
        c.engine = engine;
        c.input = "gen:nodes=1000,density=" + std::to_string(d) + ",seed=4";
        c.workers = 4;
        c.repeat = 5;
        c.timeout_s = 1800;
        cases.push_back(c);
      }
    auto records = bench::run_bench(cases, csv, cli);
    csv_ok = std::filesystem::exists(csv);

    double pipe_mean[2] = {0, 0}, mr_mean[2] = {0, 0};
    for (const auto& r : records) {
      if (r.run != 0) continue;  // aggregate rows only
      int di = r.name.ends_with("_d5") ? 0 : 1;
      (r.engine == "pipeline" ? pipe_mean : mr_mean)[di] = r.elapsed_ms;
    }
    for (int di = 0; di < 2; ++di)
      detail << "d=0." << (di == 0 ? 5 : 9) << ": pipeline " << pipe_mean[di] << " ms vs mapreduce "
             << mr_mean[di] << " ms"
             << (pipe_mean[di] <= mr_mean[di] ? " (pipeline faster)" : " (inverted)") << "; ";
  } catch (const std::exception& e) {
    detail << "harness error: " << e.what();
  }
  detail << "csv " << (csv_ok ? "written" : "missing") << " at " << csv.string();
  // observational: the direction is recorded but only the CSV is required
  report(6, csv_ok, detail.str());
}

void criterion7_rendezvous(const std::vector<EdgeSeq>& suite,
                           const std::vector<std::uint64_t>& expected) {
  std::mutex mu;
  std::condition_variable cv;
  bool done = false, ok = true;
  double elapsed = 0;
  auto t0 = Clock::now();

  std::thread worker([&] {
    bool local_ok = true;
    mapreduce::MrConfig mr_cfg;  // capacity floor is 1; 0 = rendezvous applies to the pipeline
    mr_cfg.mappers = 2;
    mr_cfg.reducers = 2;
    mr_cfg.channel_capacity = 1;
    for (std::size_t i = 0; i < suite.size(); ++i) {
      pipeline::PipelineConfig cfg;  // all capacities 0: rendezvous
      if (pipeline::run_pipeline(suite[i], cfg).triangles != expected[i]) local_ok = false;
      if (mapreduce::count_triangles_mapreduce(suite[i], mr_cfg).triangles != expected[i])
        local_ok = false;
    }
    std::lock_guard lk(mu);
    ok = local_ok;
    done = true;
    cv.notify_all();
  });

  std::unique_lock lk(mu);
  if (!cv.wait_for(lk, std::chrono::seconds(60), [&] { return done; })) {
    report(7, false, "watchdog expired: suite did not finish in 60 s under rendezvous channels");
    std::cout << std::flush;
    std::_Exit(1);  // worker is stuck; cannot join
  }
  elapsed = seconds_since(t0);
  lk.unlock();
  worker.join();
  std::ostringstream d;
  d << "rendezvous suite completed in " << elapsed << " s";
  report(7, ok && elapsed < 60.0, d.str());
}

void criterion8_roundtrip() {
  bool ok = true;
  std::mt19937_64 seeds(99);
  for (int i = 0; i < 20 && ok; ++i) {
    auto g = io::generate(
        {io::GenSpec::Mode::by_nodes, 10 + std::uint64_t(i) * 3, 0, 0.3 + 0.03 * i, seeds()});
    for (auto f : {io::GraphFormat::dimacs, io::GraphFormat::snap, io::GraphFormat::edgelist}) {
      auto p = std::filesystem::temp_directory_path() /
               ("tricount_acceptance_rt_" + std::to_string(i) + "." + io::to_string(f));
      io::write(g, p, f);
      auto raw = io::parse(p, f);
      if (f == io::GraphFormat::dimacs && raw.size() != 2 * g.size()) ok = false;
      if (dedup_stream(raw) != g) ok = false;
      std::filesystem::remove(p);
    }
  }
  report(8, ok, "parse/write identity on 20 graphs x 3 formats; dimacs arcs = 2x edges");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-tricount-binary>\n";
    return 1;
  }

  auto suite = make_suite();
  std::vector<std::uint64_t> expected;
  expected.reserve(suite.size());
  for (const auto& g : suite) expected.push_back(oracle::count_triangles_exact(g));

  criterion1_golden();
  criterion2_equivalence(suite, expected);
  criterion3_pipeline_invariants(suite, expected);
  criterion4_mapreduce_invariants(suite, expected);
  criterion5_smoke();
  criterion6_bench(argv[1]);
  criterion7_rendezvous(suite, expected);
  criterion8_roundtrip();

  std::cout << (g_failures == 0 ? "all criteria passed" : "FAILURES present") << std::endl;
  return g_failures == 0 ? 0 : 1;
}

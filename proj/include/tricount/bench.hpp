#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tricount/types.hpp"

namespace tricount::bench {

struct BenchCase {
  std::string name;
  std::string engine;  // pipeline | mapreduce | oracle
  std::string input;   // file path, or gen:nodes=N,density=D,seed=S / gen:arcs=M,...
  std::size_t workers = 1;
  std::size_t repeat = 1;
  double timeout_s = 300.0;
};

struct BenchRecord {
  std::string name;
  std::string engine;
  std::size_t workers = 0;
  std::size_t run = 0;  // 1-based; 0 marks the aggregate row
  std::uint64_t triangles = 0;
  double elapsed_ms = 0.0;
  std::int64_t peak_mem_bytes = -1;
  bool timed_out = false;
};

// Manifest: one case per line, `name engine input_or_genspec workers repeat
// timeout_s`; blank lines and `#` comments skipped. Throws MalformedLine.
std::vector<BenchCase> parse_manifest(const std::filesystem::path& path);

// Runs each case repeat times in a fresh child process (self_exe invoked as
// `count --timing ...`), enforcing the per-case timeout, cross-checking
// every completed count against the oracle, and appending per-run rows plus
// a mean aggregate row per case to csv_out.
std::vector<BenchRecord> run_bench(std::span<const BenchCase> cases,
                                   const std::filesystem::path& csv_out,
                                   const std::filesystem::path& self_exe);

}  // namespace tricount::bench

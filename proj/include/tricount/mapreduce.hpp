#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tricount/types.hpp"

namespace tricount::mapreduce {

// Sentinel middle node marking an edge-triple (an original input edge).
inline constexpr NodeId kEmptyMid = 0xFFFFFFFFu;

// A 2-length path a-mid-b, or an edge when mid == kEmptyMid. Keyed by the
// canonical endpoint pair.
struct PathTriple {
  NodeId a = 0;
  NodeId mid = kEmptyMid;
  NodeId b = 0;

  EdgeKey key() const { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }
  bool is_edge() const { return mid == kEmptyMid; }

  friend auto operator<=>(const PathTriple&, const PathTriple&) = default;
};

struct MrConfig {
  std::size_t mappers = 1;
  std::size_t reducers = 1;
  std::size_t channel_capacity = 64;
  std::optional<std::filesystem::path> spill_dir;  // round boundary on disk
};

struct MrResult {
  std::uint64_t triangles = 0;
  std::uint64_t raw_sum = 0;  // always 3 * triangles
};

// Stable shuffle hash (splitmix64 mix); a given key always reaches the same
// reducer for a fixed reducer count.
std::size_t shuffle_node(NodeId node, std::size_t reducers);
std::size_t shuffle_key(EdgeKey key, std::size_t reducers);

// Round I map: each endpoint collects its neighbor.
std::array<std::pair<NodeId, NodeId>, 2> round1_map(const Edge& e);

// Round I reduce: all 2-length paths centered on `node`.
std::vector<PathTriple> round1_reduce(NodeId node, std::span<const NodeId> adj);

// Round II map: an input edge becomes an edge-triple.
PathTriple round2_map(const Edge& e);

// Round II reduce for one key group, streamed as (group size, edge seen):
// cluster size minus one when the group holds the edge plus at least one
// path, zero otherwise.
std::uint64_t round2_reduce(std::uint64_t group_size, bool edge_seen);

// Full Round I over the concurrent mapper/reducer topology; exposed so the
// boundary multiset can be checked against the 2-path oracle.
std::vector<PathTriple> run_round1(std::span<const Edge> edges, const MrConfig& cfg);

// Two-round count. raw_sum counts each triangle three times (once per side);
// triangles = raw_sum / 3.
MrResult count_triangles_mapreduce(std::span<const Edge> edges, const MrConfig& cfg);

// Spill file round-trip, one `A MID B` line per triple with `-` for the
// empty middle.
void write_spill(std::span<const PathTriple> triples, const std::filesystem::path& path);
std::vector<PathTriple> read_spill(const std::filesystem::path& path);

}  // namespace tricount::mapreduce

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tricount/types.hpp"

namespace tricount::oracle {

// Canonically ordered triangle, a < b < c.
struct Triangle {
  NodeId a = 0;
  NodeId b = 0;
  NodeId c = 0;

  friend auto operator<=>(const Triangle&, const Triangle&) = default;
};

// A 2-length path a-mid-b with a < b.
struct Path2 {
  NodeId a = 0;
  NodeId mid = 0;
  NodeId b = 0;

  friend auto operator<=>(const Path2&, const Path2&) = default;
};

// One pipeline filter as produced by the sequential partition replay:
// responsible node plus its adjacency in insertion order.
struct PartitionEntry {
  NodeId responsible = 0;
  std::vector<NodeId> adjacency;

  friend bool operator==(const PartitionEntry&, const PartitionEntry&) = default;
};

using PartitionResult = std::vector<PartitionEntry>;

// Reference triangle count, independent of both engines. Dense bit-matrix
// for small vertex counts, sorted-adjacency intersection otherwise.
std::uint64_t count_triangles_exact(std::span<const Edge> edges);

std::vector<Triangle> list_triangles(std::span<const Edge> edges);

// All 2-length paths, one per unordered neighbor pair of each middle node;
// |result| = sum_v C(deg(v), 2).
std::vector<Path2> enumerate_2paths(std::span<const Edge> edges);

// Sequential greedy replay of the pipeline's partition phase. Order of the
// input stream matters.
PartitionResult simulate_partition(std::span<const Edge> edges);

// Per-filter triangle tallies: edges with both endpoints inside a filter's
// adjacency. Their sum equals count_triangles_exact.
std::vector<std::pair<NodeId, std::uint64_t>> simulate_filter_counts(
    const PartitionResult& partition, std::span<const Edge> edges);

}  // namespace tricount::oracle

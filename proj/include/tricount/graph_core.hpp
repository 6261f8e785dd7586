#pragma once

#include <span>

#include "tricount/types.hpp"

namespace tricount {

// Canonical key of a non-loop edge. Callers must drop self-loops first.
inline EdgeKey edge_key(const Edge& e) {
  return e.first < e.second ? EdgeKey{e.first, e.second} : EdgeKey{e.second, e.first};
}

// Simple-graph pre-processing: keeps the first occurrence of each undirected
// edge in its original orientation, drops later duplicates (either
// orientation) and all self-loops.
EdgeSeq dedup_stream(std::span<const Edge> edges);

GraphStats graph_stats(std::span<const Edge> edges);

}  // namespace tricount

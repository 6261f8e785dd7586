#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "tricount/types.hpp"

namespace tricount::io {

enum class GraphFormat { dimacs, snap, edgelist };

GraphFormat format_from_string(const std::string& s);
std::string to_string(GraphFormat f);

// Reads raw edges in file order; no dedup (compose with dedup_stream).
//   dimacs:   `c ...` comments, `p ...` header ignored, `a U V [W]` edges
//   snap / edgelist: `# ...` comments, two whitespace-separated ints per line
// Throws MalformedLine on non-conforming lines, IoError on read failure.
EdgeSeq parse(const std::filesystem::path& path, GraphFormat format);

// Writes an edge list. DIMACS emits both orientations as `a` lines plus a
// `p` header (arcs convention); snap/edgelist emit one line per edge.
// parse(write(s)) == s for deduplicated s.
void write(std::span<const Edge> edges, const std::filesystem::path& path, GraphFormat format);

struct GenSpec {
  enum class Mode { by_nodes, by_arcs };
  Mode mode = Mode::by_nodes;
  std::uint64_t nodes = 0;    // by_nodes
  std::uint64_t arcs = 0;     // by_arcs
  double density = 0.0;       // target density, 0 < d <= 1
  std::uint64_t seed = 0;
};

// Largest n with arcs / (n*(n-1)) >= density; the by_arcs vertex count.
std::uint64_t choose_vertex_count(std::uint64_t arcs, double density);

// Uniform simple graph on vertices {1..n} with round(d*n*(n-1)/2) edges
// (by_nodes) or arcs/2 edges on the largest n with arcs/(n*(n-1)) >= d
// (by_arcs). Deterministic for a fixed seed; output needs no dedup.
// Throws InfeasibleSpec when the target is unreachable.
EdgeSeq generate(const GenSpec& spec);

}  // namespace tricount::io

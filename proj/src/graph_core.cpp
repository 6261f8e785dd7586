#include "tricount/graph_core.hpp"

#include <unordered_set>

namespace tricount {

EdgeSeq dedup_stream(std::span<const Edge> edges) {
  EdgeSeq out;
  std::unordered_set<EdgeKey> seen;
  seen.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.first == e.second) continue;
    if (seen.insert(edge_key(e)).second) out.push_back(e);
  }
  return out;
}

GraphStats graph_stats(std::span<const Edge> edges) {
  GraphStats s;
  std::unordered_set<NodeId> vertices;
  for (const Edge& e : edges) {
    vertices.insert(e.first);
    vertices.insert(e.second);
  }
  s.num_vertices = vertices.size();
  s.num_edges = edges.size();
  s.num_arcs = 2 * s.num_edges;
  if (s.num_vertices >= 2) {
    s.density = double(s.num_arcs) / (double(s.num_vertices) * double(s.num_vertices - 1));
  }
  return s;
}

}  // namespace tricount

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tricount {

using NodeId = std::uint32_t;

// Endpoint order is preserved: the first endpoint seeds a pipeline filter's
// responsible node. Identity as a graph edge is orientation-insensitive
// (see EdgeKey).
struct Edge {
  NodeId first = 0;
  NodeId second = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Canonical unordered form of an edge, used for dedup and shuffle keys.
struct EdgeKey {
  NodeId lo = 0;
  NodeId hi = 0;

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

using EdgeSeq = std::vector<Edge>;

struct GraphStats {
  std::uint64_t num_vertices = 0;
  std::uint64_t num_edges = 0;  // undirected edges
  std::uint64_t num_arcs = 0;   // 2 * num_edges
  double density = 0.0;         // arcs / (v * (v-1)), 0 if v < 2
};

struct MalformedLine : std::runtime_error {
  MalformedLine(std::size_t line_no, const std::string& content)
      : std::runtime_error("malformed line " + std::to_string(line_no) + ": " + content),
        line(line_no) {}
  std::size_t line;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProtocolViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tricount

template <>
struct std::hash<tricount::EdgeKey> {
  std::size_t operator()(const tricount::EdgeKey& k) const noexcept {
    std::uint64_t x = (std::uint64_t(k.lo) << 32) | k.hi;
    // splitmix64 finalizer
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return std::size_t(x);
  }
};

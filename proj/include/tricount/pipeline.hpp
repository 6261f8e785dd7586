#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "tricount/types.hpp"

namespace tricount::pipeline {

enum class Phase { partition, counting, aggregation, done };

// One filter stage: specializes itself on the first edge it receives, using
// the edge's first node as responsible node.
struct FilterState {
  bool initialized = false;
  NodeId responsible = 0;
  std::vector<NodeId> adjacency;         // insertion order
  std::unordered_set<NodeId> adj_set;
  Phase phase = Phase::partition;
  std::uint64_t tally = 0;

  // Partition-phase treatment of one ch3 edge; true when consumed (the
  // filter specialized on it or absorbed an endpoint), false when it must
  // travel on to the neighbor.
  bool absorb(const Edge& e) {
    if (!initialized) {
      initialized = true;
      responsible = e.first;
      adjacency.push_back(e.second);
      adj_set.insert(e.second);
      return true;
    }
    if (e.first != responsible && e.second != responsible) return false;
    NodeId other = e.first == responsible ? e.second : e.first;
    if (adj_set.insert(other).second) adjacency.push_back(other);
    return true;
  }

  // Counting-phase check of one ch2 edge; bumps the tally when both
  // endpoints sit in the adjacency. The edge is forwarded regardless.
  void count(const Edge& e) {
    if (adj_set.contains(e.first) && adj_set.contains(e.second)) ++tally;
  }
};

struct ChannelEvent {
  enum class Kind { ch3_edge, ch3_close, ch2_edge, ch2_close, ch1_value };
  Kind kind;
  Edge edge{};           // ch3_edge / ch2_edge
  std::uint64_t value = 0;  // ch1_value

  static ChannelEvent ch3(Edge e) { return {Kind::ch3_edge, e, 0}; }
  static ChannelEvent ch3_closed() { return {Kind::ch3_close, {}, 0}; }
  static ChannelEvent ch2(Edge e) { return {Kind::ch2_edge, e, 0}; }
  static ChannelEvent ch2_closed() { return {Kind::ch2_close, {}, 0}; }
  static ChannelEvent ch1(std::uint64_t v) { return {Kind::ch1_value, {}, v}; }
};

struct Emission {
  enum class Kind { forward_ch3, close_ch3, forward_ch2, close_ch2, emit_ch1, close_ch1 };
  Kind kind;
  Edge edge{};
  std::uint64_t value = 0;
};

// Pure protocol transition for one inbound event; scheduling lives in the
// runtime. Throws ProtocolViolation on events inconsistent with the phase.
std::vector<Emission> filter_step(FilterState& state, const ChannelEvent& event);

struct PipelineConfig {
  std::size_t channel_capacity_ch2 = 0;  // 0 = rendezvous
  std::size_t channel_capacity_ch3 = 0;
  std::size_t channel_capacity_ch1 = 0;
  // When set, filters are multiplexed over a fixed worker pool of this width
  // instead of each getting its own thread.
  std::optional<std::size_t> max_live_filters;
};

struct FilterSummary {
  NodeId responsible = 0;
  std::vector<NodeId> adjacency;
  std::uint64_t tally = 0;
};

struct PipelineOutcome {
  std::uint64_t triangles = 0;
  std::uint64_t filters_created = 0;
  std::uint64_t peak_live_filters = 0;
  std::vector<FilterSummary> filters;  // creation order
};

// Runs the dynamic pipeline over a deduplicated edge stream. The source
// feeds every edge on ch3, closes it, replays every edge on ch2, closes it,
// and finally sends 0 on ch1; filters partition, count, aggregate and die.
PipelineOutcome run_pipeline(std::span<const Edge> edges, const PipelineConfig& cfg = {});

}  // namespace tricount::pipeline

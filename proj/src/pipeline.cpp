#include "tricount/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "tricount/channel.hpp"

namespace tricount::pipeline {

std::vector<Emission> filter_step(FilterState& state, const ChannelEvent& event) {
  using K = ChannelEvent::Kind;
  using E = Emission::Kind;
  std::vector<Emission> out;

  switch (event.kind) {
    case K::ch3_edge:
      if (state.phase != Phase::partition)
        throw ProtocolViolation("ch3 edge outside partition phase");
      if (!state.absorb(event.edge)) out.push_back({E::forward_ch3, event.edge, 0});
      return out;
    case K::ch3_close:
      if (state.phase != Phase::partition)
        throw ProtocolViolation("ch3 close outside partition phase");
      state.phase = Phase::counting;
      out.push_back({E::close_ch3, {}, 0});
      return out;
    case K::ch2_edge:
      if (state.phase != Phase::counting)
        throw ProtocolViolation("ch2 edge outside counting phase");
      state.count(event.edge);
      out.push_back({E::forward_ch2, event.edge, 0});
      return out;
    case K::ch2_close:
      if (state.phase != Phase::counting)
        throw ProtocolViolation("ch2 close outside counting phase");
      state.phase = Phase::aggregation;
      out.push_back({E::close_ch2, {}, 0});
      return out;
    case K::ch1_value:
      if (state.phase != Phase::aggregation)
        throw ProtocolViolation("ch1 value outside aggregation phase");
      state.phase = Phase::done;
      out.push_back({E::emit_ch1, {}, event.value + state.tally});
      out.push_back({E::close_ch1, {}, 0});
      return out;
  }
  throw ProtocolViolation("unknown channel event");
}

namespace {

struct Triple {
  std::shared_ptr<Channel<std::uint64_t>> ch1;
  std::shared_ptr<Channel<Edge>> ch2;
  std::shared_ptr<Channel<Edge>> ch3;
};

Triple make_triple(const PipelineConfig& cfg) {
  return {std::make_shared<Channel<std::uint64_t>>(cfg.channel_capacity_ch1),
          std::make_shared<Channel<Edge>>(cfg.channel_capacity_ch2),
          std::make_shared<Channel<Edge>>(cfg.channel_capacity_ch3)};
}

struct Runtime {
  PipelineConfig cfg;
  std::mutex mu;
  std::vector<std::thread> threads;
  std::vector<FilterSummary> summaries;       // indexed by creation order
  std::atomic<std::uint64_t> live{0}, peak{0}, created{0};
  std::exception_ptr error;

  void note_error() {
    std::lock_guard lk(mu);
    if (!error) error = std::current_exception();
  }
};

void filter_main(Runtime& rt, std::size_t index, Triple in, Triple out);

// Splices a new filter between the caller and its current downstream.
// Returns the triple the caller must write to from now on.
Triple spawn_filter(Runtime& rt, Triple downstream) {
  Triple in = make_triple(rt.cfg);
  std::uint64_t n = ++rt.created;
  std::uint64_t l = ++rt.live;
  std::uint64_t p = rt.peak.load();
  while (l > p && !rt.peak.compare_exchange_weak(p, l)) {
  }
  std::lock_guard lk(rt.mu);
  rt.summaries.emplace_back();
  rt.threads.emplace_back(filter_main, std::ref(rt), std::size_t(n - 1), in, downstream);
  return in;
}

void filter_main(Runtime& rt, std::size_t index, Triple in, Triple out) {
  try {
    FilterState st;
    bool spawned = false;
    std::vector<Edge> batch;

    auto route = [&](const Emission& em) {
      switch (em.kind) {
        case Emission::Kind::forward_ch3:
          if (!spawned) {
            out = spawn_filter(rt, out);
            spawned = true;
          }
          out.ch3->send(em.edge);
          break;
        case Emission::Kind::close_ch3: out.ch3->close(); break;
        case Emission::Kind::forward_ch2: out.ch2->send(em.edge); break;
        case Emission::Kind::close_ch2: out.ch2->close(); break;
        case Emission::Kind::emit_ch1: out.ch1->send(em.value); break;
        case Emission::Kind::close_ch1: out.ch1->close(); break;
      }
    };

    // partition: drain ch3; ch2 is simply not read until counting
    while (in.ch3->recv_some(batch, 1024)) {
      for (const Edge& e : batch)
        if (!st.absorb(e)) route({Emission::Kind::forward_ch3, e, 0});
      batch.clear();
    }
    for (const Emission& em : filter_step(st, ChannelEvent::ch3_closed())) route(em);

    // counting
    while (in.ch2->recv_some(batch, 1024)) {
      for (const Edge& e : batch) {
        st.count(e);
        route({Emission::Kind::forward_ch2, e, 0});
      }
      batch.clear();
    }
    for (const Emission& em : filter_step(st, ChannelEvent::ch2_closed())) route(em);

    // aggregation: one value in, sum out, die
    auto v = in.ch1->recv();
    if (!v) throw ProtocolViolation("ch1 closed before carrying a value");
    for (const Emission& em : filter_step(st, ChannelEvent::ch1(*v))) route(em);
    if (in.ch1->recv()) throw ProtocolViolation("more than one ch1 value");

    {
      std::lock_guard lk(rt.mu);
      rt.summaries[index] = {st.responsible, std::move(st.adjacency), st.tally};
    }
    --rt.live;
  } catch (...) {
    rt.note_error();
    // unblock downstream so the run can unwind
    out.ch3->close();
    out.ch2->close();
    out.ch1->close();
    --rt.live;
  }
}

PipelineOutcome run_threaded(std::span<const Edge> edges, const PipelineConfig& cfg) {
  Runtime rt;
  rt.cfg = cfg;
  Triple sink_in = make_triple(cfg);

  std::uint64_t result = 0;
  std::exception_ptr sink_error;
  std::thread sink([&] {
    try {
      if (sink_in.ch3->recv()) throw ProtocolViolation("sink received a ch3 edge");
      while (sink_in.ch2->recv()) {
      }
      auto v = sink_in.ch1->recv();
      if (!v) throw ProtocolViolation("ch1 closed before reaching the sink");
      result = *v;
      while (sink_in.ch1->recv()) {
      }
    } catch (...) {
      sink_error = std::current_exception();
    }
  });

  // source: ch3 stream, ch2 replay, then the initial 0 on ch1
  Triple out = sink_in;
  try {
    for (const Edge& e : edges) {
      if (rt.created.load() == 0) out = spawn_filter(rt, out);
      out.ch3->send(e);
    }
    out.ch3->close();
    for (const Edge& e : edges) out.ch2->send(e);
    out.ch2->close();
    out.ch1->send(0);
    out.ch1->close();
  } catch (...) {
    rt.note_error();
    out.ch3->close();
    out.ch2->close();
    out.ch1->close();
  }

  sink.join();
  for (auto& t : rt.threads) t.join();
  if (rt.error) std::rethrow_exception(rt.error);
  if (sink_error) std::rethrow_exception(sink_error);

  PipelineOutcome oc;
  oc.triangles = result;
  oc.filters_created = rt.created.load();
  oc.peak_live_filters = rt.peak.load();
  oc.filters = std::move(rt.summaries);
  return oc;
}

// Multiplexed schedule: the same filter state machines driven over a fixed
// worker pool. Partition cascades edges down the chain on one worker; the
// counting phase (every filter scans the full ch2 stream) is split across
// the pool; aggregation folds the tallies along the chain.
PipelineOutcome run_multiplexed(std::span<const Edge> edges, const PipelineConfig& cfg) {
  std::size_t width = std::max<std::size_t>(1, *cfg.max_live_filters);
  std::vector<FilterState> filters;

  for (const Edge& e : edges) {
    bool consumed = false;
    for (auto& f : filters)
      if (f.absorb(e)) {
        consumed = true;
        break;
      }
    if (!consumed) {
      filters.emplace_back();
      filters.back().absorb(e);
    }
  }
  for (auto& f : filters) filter_step(f, ChannelEvent::ch3_closed());

  // membership bitsets make the edges-times-filters counting scan cheap
  // when the id range allows it
  NodeId max_id = 0;
  for (const Edge& e : edges) max_id = std::max({max_id, e.first, e.second});
  const bool use_bitset = max_id < (1u << 22);
  const std::size_t words = use_bitset ? (std::size_t(max_id) + 64) / 64 : 0;

  std::size_t workers = std::min(width, std::max<std::size_t>(filters.size(), 1));
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      std::vector<std::uint64_t> bits(words);
      for (std::size_t i = next.fetch_add(1); i < filters.size(); i = next.fetch_add(1)) {
        FilterState& f = filters[i];
        if (use_bitset) {
          std::fill(bits.begin(), bits.end(), 0);
          for (NodeId v : f.adjacency) bits[v / 64] |= 1ULL << (v % 64);
          for (const Edge& e : edges)
            if ((bits[e.first / 64] >> (e.first % 64) & 1) &&
                (bits[e.second / 64] >> (e.second % 64) & 1))
              ++f.tally;
          f.phase = Phase::aggregation;
        } else {
          for (const Edge& e : edges) f.count(e);
          f.phase = Phase::aggregation;
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  std::uint64_t sum = 0;
  PipelineOutcome oc;
  for (auto& f : filters) {
    auto ems = filter_step(f, ChannelEvent::ch1(sum));
    sum = ems.front().value;
    oc.filters.push_back({f.responsible, std::move(f.adjacency), f.tally});
  }
  oc.triangles = sum;
  oc.filters_created = filters.size();
  oc.peak_live_filters = std::min<std::uint64_t>(filters.size(), width);
  return oc;
}

}  // namespace

PipelineOutcome run_pipeline(std::span<const Edge> edges, const PipelineConfig& cfg) {
  if (cfg.max_live_filters) return run_multiplexed(edges, cfg);
  return run_threaded(edges, cfg);
}

}  // namespace tricount::pipeline

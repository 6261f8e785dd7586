#include "tricount/mapreduce.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <functional>
#include <memory>
#include <thread>
#include <unordered_map>

#include "tricount/channel.hpp"

namespace tricount::mapreduce {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

void check_config(const MrConfig& cfg) {
  if (cfg.mappers < 1 || cfg.reducers < 1 || cfg.channel_capacity < 1)
    throw ConfigError("mappers, reducers and channel capacity must be >= 1");
}

std::pair<std::size_t, std::size_t> chunk_bounds(std::size_t total, std::size_t parts,
                                                 std::size_t index) {
  return {total * index / parts, total * (index + 1) / parts};
}

using TripleSink = std::function<void(const PathTriple&)>;

// Buffered line-at-a-time spill writer; the boundary can exceed memory, so
// triples go to disk as they are produced.
class SpillWriter {
 public:
  explicit SpillWriter(const std::filesystem::path& path) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot open spill file " + path.string());
    buf_.reserve(kFlushAt + 64);
  }

  void append(const PathTriple& t) {
    append_num(t.a);
    buf_.push_back(' ');
    if (t.is_edge())
      buf_.push_back('-');
    else
      append_num(t.mid);
    buf_.push_back(' ');
    append_num(t.b);
    buf_.push_back('\n');
    if (buf_.size() >= kFlushAt) flush();
  }

  void finish() {
    flush();
    out_.close();
    if (!out_) throw IoError("write failure on spill file " + path_.string());
  }

 private:
  static constexpr std::size_t kFlushAt = 1 << 20;

  void append_num(NodeId v) {
    char tmp[16];
    auto [p, ec] = std::to_chars(tmp, tmp + sizeof tmp, v);
    buf_.append(tmp, p);
  }

  void flush() {
    out_.write(buf_.data(), std::streamsize(buf_.size()));
    buf_.clear();
  }

  std::filesystem::path path_;
  std::ofstream out_;
  std::string buf_;
};

void stream_spill(const std::filesystem::path& path, const TripleSink& sink) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spill file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    PathTriple t;
    const char* p = line.data();
    const char* end = p + line.size();
    auto r1 = std::from_chars(p, end, t.a);
    if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ') throw MalformedLine(line_no, line);
    p = r1.ptr + 1;
    if (p < end && *p == '-') {
      t.mid = kEmptyMid;
      ++p;
    } else {
      auto r2 = std::from_chars(p, end, t.mid);
      if (r2.ec != std::errc{}) throw MalformedLine(line_no, line);
      p = r2.ptr;
    }
    if (p == end || *p != ' ') throw MalformedLine(line_no, line);
    ++p;
    auto r3 = std::from_chars(p, end, t.b);
    if (r3.ec != std::errc{} || r3.ptr != end) throw MalformedLine(line_no, line);
    sink(t);
  }
  if (in.bad()) throw IoError("read failure on spill file " + path.string());
}

}  // namespace

std::size_t shuffle_node(NodeId node, std::size_t reducers) {
  return std::size_t(splitmix64(node) % reducers);
}

std::size_t shuffle_key(EdgeKey key, std::size_t reducers) {
  return std::size_t(splitmix64((std::uint64_t(key.lo) << 32) | key.hi) % reducers);
}

std::array<std::pair<NodeId, NodeId>, 2> round1_map(const Edge& e) {
  return {{{e.first, e.second}, {e.second, e.first}}};
}

std::vector<PathTriple> round1_reduce(NodeId node, std::span<const NodeId> adj) {
  std::vector<PathTriple> out;
  out.reserve(adj.size() < 2 ? 0 : adj.size() * (adj.size() - 1) / 2);
  for (std::size_t i = 0; i < adj.size(); ++i)
    for (std::size_t j = i + 1; j < adj.size(); ++j) {
      NodeId x = adj[i], y = adj[j];
      if (x > y) std::swap(x, y);
      out.push_back({x, node, y});
    }
  return out;
}

PathTriple round2_map(const Edge& e) {
  return e.first < e.second ? PathTriple{e.first, kEmptyMid, e.second}
                            : PathTriple{e.second, kEmptyMid, e.first};
}

std::uint64_t round2_reduce(std::uint64_t group_size, bool edge_seen) {
  return edge_seen && group_size >= 2 ? group_size - 1 : 0;
}

namespace {

// Round I over the mapper/reducer topology. Each reducer's path triples go
// to its sink (in-memory vector or spill file) as they are produced.
void round1_internal(std::span<const Edge> edges, const MrConfig& cfg,
                     const std::function<TripleSink(std::size_t)>& sink_for) {
  const std::size_t M = cfg.mappers, R = cfg.reducers;
  std::vector<std::unique_ptr<Channel<std::pair<NodeId, NodeId>>>> chans;
  for (std::size_t r = 0; r < R; ++r)
    chans.push_back(std::make_unique<Channel<std::pair<NodeId, NodeId>>>(cfg.channel_capacity));

  std::atomic<std::size_t> mappers_left{M};
  std::vector<std::thread> mappers;
  for (std::size_t m = 0; m < M; ++m) {
    mappers.emplace_back([&, m] {
      auto [lo, hi] = chunk_bounds(edges.size(), M, m);
      for (std::size_t i = lo; i < hi; ++i)
        for (auto [k, v] : round1_map(edges[i])) chans[shuffle_node(k, R)]->send({k, v});
      if (mappers_left.fetch_sub(1) == 1)
        for (auto& c : chans) c->close();
    });
  }

  std::vector<std::thread> reducers;
  for (std::size_t r = 0; r < R; ++r) {
    reducers.emplace_back([&, r] {
      TripleSink sink = sink_for(r);
      std::unordered_map<NodeId, std::vector<NodeId>> adjacency;
      std::vector<std::pair<NodeId, NodeId>> batch;
      while (chans[r]->recv_some(batch, 4096)) {
        for (auto [node, nbr] : batch) adjacency[node].push_back(nbr);
        batch.clear();
      }
      for (auto& [node, adj] : adjacency)
        for (const PathTriple& t : round1_reduce(node, adj)) sink(t);
    });
  }

  for (auto& t : mappers) t.join();
  for (auto& t : reducers) t.join();
}

// Round II: edge-triples from the input plus the Round I boundary, shuffled
// by key. feed(s, sink) streams boundary segment s.
std::uint64_t round2_internal(
    std::span<const Edge> edges, const MrConfig& cfg, std::size_t segments,
    const std::function<void(std::size_t, const TripleSink&)>& feed) {
  const std::size_t M = cfg.mappers, R = cfg.reducers;
  std::vector<std::unique_ptr<Channel<PathTriple>>> chans;
  for (std::size_t r = 0; r < R; ++r)
    chans.push_back(std::make_unique<Channel<PathTriple>>(cfg.channel_capacity));

  std::atomic<std::size_t> mappers_left{M};
  std::vector<std::thread> mappers;
  for (std::size_t m = 0; m < M; ++m) {
    mappers.emplace_back([&, m] {
      auto [lo, hi] = chunk_bounds(edges.size(), M, m);
      for (std::size_t i = lo; i < hi; ++i) {
        PathTriple t = round2_map(edges[i]);
        chans[shuffle_key(t.key(), R)]->send(t);
      }
      TripleSink shuffle = [&](const PathTriple& t) {
        chans[shuffle_key(t.key(), R)]->send(t);
      };
      for (std::size_t s = m; s < segments; s += M) feed(s, shuffle);
      if (mappers_left.fetch_sub(1) == 1)
        for (auto& c : chans) c->close();
    });
  }

  struct Group {
    std::uint64_t size = 0;
    bool edge_seen = false;
  };
  std::vector<std::uint64_t> sums(R, 0);
  std::vector<std::thread> reducers;
  for (std::size_t r = 0; r < R; ++r) {
    reducers.emplace_back([&, r] {
      std::unordered_map<EdgeKey, Group> groups;
      std::vector<PathTriple> batch;
      while (chans[r]->recv_some(batch, 4096)) {
        for (const PathTriple& t : batch) {
          Group& g = groups[t.key()];
          ++g.size;
          if (t.is_edge()) g.edge_seen = true;
        }
        batch.clear();
      }
      for (const auto& [key, g] : groups) sums[r] += round2_reduce(g.size, g.edge_seen);
    });
  }

  for (auto& t : mappers) t.join();
  for (auto& t : reducers) t.join();

  std::uint64_t raw_sum = 0;
  for (auto s : sums) raw_sum += s;
  return raw_sum;
}

}  // namespace

std::vector<PathTriple> run_round1(std::span<const Edge> edges, const MrConfig& cfg) {
  check_config(cfg);
  std::vector<std::vector<PathTriple>> parts(cfg.reducers);
  round1_internal(edges, cfg, [&](std::size_t r) -> TripleSink {
    return [&parts, r](const PathTriple& t) { parts[r].push_back(t); };
  });
  std::vector<PathTriple> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

MrResult count_triangles_mapreduce(std::span<const Edge> edges, const MrConfig& cfg) {
  check_config(cfg);

  std::uint64_t raw_sum;
  if (cfg.spill_dir) {
    std::filesystem::create_directories(*cfg.spill_dir);
    std::vector<std::filesystem::path> files(cfg.reducers);
    std::vector<std::shared_ptr<SpillWriter>> writers(cfg.reducers);
    for (std::size_t r = 0; r < cfg.reducers; ++r)
      files[r] = *cfg.spill_dir / ("round1_" + std::to_string(r) + ".spill");

    round1_internal(edges, cfg, [&](std::size_t r) -> TripleSink {
      writers[r] = std::make_shared<SpillWriter>(files[r]);
      return [w = writers[r]](const PathTriple& t) { w->append(t); };
    });
    for (auto& w : writers)
      if (w) w->finish();

    raw_sum = round2_internal(edges, cfg, files.size(),
                              [&](std::size_t s, const TripleSink& sink) {
                                stream_spill(files[s], sink);
                              });
    for (const auto& f : files) std::filesystem::remove(f);
  } else {
    std::vector<std::vector<PathTriple>> boundary(cfg.reducers);
    round1_internal(edges, cfg, [&](std::size_t r) -> TripleSink {
      return [&boundary, r](const PathTriple& t) { boundary[r].push_back(t); };
    });
    raw_sum = round2_internal(edges, cfg, boundary.size(),
                              [&](std::size_t s, const TripleSink& sink) {
                                for (const PathTriple& t : boundary[s]) sink(t);
                                boundary[s] = {};
                              });
  }

  if (raw_sum % 3 != 0) throw ProtocolViolation("reducer sum not divisible by 3");
  return {raw_sum / 3, raw_sum};
}

void write_spill(std::span<const PathTriple> triples, const std::filesystem::path& path) {
  SpillWriter w(path);
  for (const PathTriple& t : triples) w.append(t);
  w.finish();
}

std::vector<PathTriple> read_spill(const std::filesystem::path& path) {
  std::vector<PathTriple> out;
  stream_spill(path, [&](const PathTriple& t) { out.push_back(t); });
  return out;
}

}  // namespace tricount::mapreduce

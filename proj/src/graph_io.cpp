#include "tricount/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_set>

namespace tricount::io {

GraphFormat format_from_string(const std::string& s) {
  if (s == "dimacs") return GraphFormat::dimacs;
  if (s == "snap") return GraphFormat::snap;
  if (s == "edgelist") return GraphFormat::edgelist;
  throw ConfigError("unknown graph format: " + s);
}

std::string to_string(GraphFormat f) {
  switch (f) {
    case GraphFormat::dimacs: return "dimacs";
    case GraphFormat::snap: return "snap";
    case GraphFormat::edgelist: return "edgelist";
  }
  return "?";
}

namespace {

bool parse_u32(std::istringstream& in, NodeId& out) {
  std::uint64_t v;
  if (!(in >> v) || v > std::numeric_limits<NodeId>::max()) return false;
  out = NodeId(v);
  return true;
}

bool at_eof(std::istringstream& in) {
  std::string rest;
  return !(in >> rest);
}

}  // namespace

EdgeSeq parse(const std::filesystem::path& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  EdgeSeq edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;

    std::istringstream ls(line);
    if (format == GraphFormat::dimacs) {
      std::string tag;
      ls >> tag;
      if (tag == "c" || tag == "p") continue;
      if (tag == "a") {
        Edge e;
        if (!parse_u32(ls, e.first) || !parse_u32(ls, e.second)) throw MalformedLine(line_no, line);
        std::uint64_t weight;  // optional, ignored
        ls >> weight;
        if (!at_eof(ls)) throw MalformedLine(line_no, line);
        edges.push_back(e);
        continue;
      }
      throw MalformedLine(line_no, line);
    }

    // snap / edgelist
    if (line[0] == '#') continue;
    Edge e;
    std::istringstream es(line);
    if (!parse_u32(es, e.first) || !parse_u32(es, e.second) || !at_eof(es))
      throw MalformedLine(line_no, line);
    edges.push_back(e);
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
  return edges;
}

void write(std::span<const Edge> edges, const std::filesystem::path& path, GraphFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");

  if (format == GraphFormat::dimacs) {
    NodeId max_id = 0;
    for (const Edge& e : edges) max_id = std::max({max_id, e.first, e.second});
    out << "p sp " << max_id << ' ' << 2 * edges.size() << '\n';
    for (const Edge& e : edges) {
      out << "a " << e.first << ' ' << e.second << " 1\n";
      out << "a " << e.second << ' ' << e.first << " 1\n";
    }
  } else {
    if (format == GraphFormat::snap) out << "# undirected edge list\n";
    for (const Edge& e : edges) out << e.first << ' ' << e.second << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failure on " + path.string());
}

namespace {

// Unbiased draw in [0, n) from a fixed, portable engine. mt19937_64 output
// is pinned by the standard; std::uniform_int_distribution is not, so the
// bounding is done here.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace

std::uint64_t choose_vertex_count(std::uint64_t arcs, double density) {
  std::uint64_t n = 2;
  while (double(arcs) / (double(n + 1) * double(n)) >= density) ++n;
  return n;
}

EdgeSeq generate(const GenSpec& spec) {
  if (!(spec.density > 0.0) || spec.density > 1.0)
    throw InfeasibleSpec("density must be in (0, 1]");

  std::uint64_t n, target_edges;
  if (spec.mode == GenSpec::Mode::by_nodes) {
    n = spec.nodes;
    if (n < 2) throw InfeasibleSpec("need at least 2 vertices");
    target_edges = std::uint64_t(std::llround(spec.density * double(n) * double(n - 1) / 2.0));
  } else {
    if (spec.arcs < 2 || spec.arcs % 2 != 0)
      throw InfeasibleSpec("arc count must be even and >= 2");
    n = choose_vertex_count(spec.arcs, spec.density);
    target_edges = spec.arcs / 2;
  }

  const std::uint64_t max_edges = n * (n - 1) / 2;
  if (target_edges > max_edges)
    throw InfeasibleSpec("edge target exceeds simple-graph maximum");

  std::mt19937_64 rng(spec.seed);
  auto sample_keys = [&](std::uint64_t count) {
    std::unordered_set<EdgeKey> keys;
    keys.reserve(count);
    while (keys.size() < count) {
      NodeId u = NodeId(1 + bounded(rng, n));
      NodeId v = NodeId(1 + bounded(rng, n));
      if (u == v) continue;
      keys.insert(u < v ? EdgeKey{u, v} : EdgeKey{v, u});
    }
    return keys;
  };

  EdgeSeq edges;
  edges.reserve(target_edges);
  if (target_edges * 2 <= max_edges) {
    // sparse regime: rejection sampling stays O(e) expected
    std::unordered_set<EdgeKey> keys;
    keys.reserve(target_edges);
    while (keys.size() < target_edges) {
      NodeId u = NodeId(1 + bounded(rng, n));
      NodeId v = NodeId(1 + bounded(rng, n));
      if (u == v) continue;
      EdgeKey k = u < v ? EdgeKey{u, v} : EdgeKey{v, u};
      if (keys.insert(k).second) edges.push_back({k.lo, k.hi});
    }
  } else {
    // dense regime: sample the complement, then emit everything else
    auto holes = sample_keys(max_edges - target_edges);
    for (NodeId u = 1; u <= NodeId(n); ++u)
      for (NodeId v = u + 1; v <= NodeId(n); ++v)
        if (!holes.contains(EdgeKey{u, v})) edges.push_back({u, v});
  }
  return edges;
}

}  // namespace tricount::io

#include "tricount/oracle.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <unordered_set>

namespace tricount::oracle {

namespace {

// Remaps the (possibly sparse) node ids onto 0..n-1.
struct CompactGraph {
  std::vector<NodeId> id_of;  // compact index -> original id, ascending
  std::vector<std::vector<std::uint32_t>> adj;

  explicit CompactGraph(std::span<const Edge> edges) {
    id_of.reserve(edges.size() * 2);
    for (const Edge& e : edges) {
      id_of.push_back(e.first);
      id_of.push_back(e.second);
    }
    std::sort(id_of.begin(), id_of.end());
    id_of.erase(std::unique(id_of.begin(), id_of.end()), id_of.end());

    adj.resize(id_of.size());
    for (const Edge& e : edges) {
      auto u = index_of(e.first);
      auto v = index_of(e.second);
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  }

  std::uint32_t index_of(NodeId id) const {
    return std::uint32_t(std::lower_bound(id_of.begin(), id_of.end(), id) - id_of.begin());
  }

  std::size_t n() const { return id_of.size(); }
};

constexpr std::size_t kDenseLimit = 4096;

std::uint64_t count_dense(const CompactGraph& g) {
  const std::size_t n = g.n();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> bits(n * words, 0);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v : g.adj[u]) bits[std::size_t(u) * words + v / 64] |= 1ULL << (v % 64);

  // For each edge u<v, common neighbors w>v via bitwise AND of rows.
  std::uint64_t total = 0;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v : g.adj[u]) {
      if (v <= u) continue;
      const std::uint64_t* ru = &bits[std::size_t(u) * words];
      const std::uint64_t* rv = &bits[std::size_t(v) * words];
      std::size_t w0 = (v + 1) / 64;
      for (std::size_t w = w0; w < words; ++w) {
        std::uint64_t both = ru[w] & rv[w];
        if (w == w0 && (v + 1) % 64 != 0) both &= ~0ULL << ((v + 1) % 64);
        total += std::uint64_t(std::popcount(both));
      }
    }
  }
  return total;
}

std::uint64_t count_sparse(const CompactGraph& g) {
  std::uint64_t total = 0;
  for (std::uint32_t u = 0; u < g.n(); ++u) {
    const auto& nu = g.adj[u];
    for (std::uint32_t v : nu) {
      if (v <= u) continue;
      const auto& nv = g.adj[v];
      // count common neighbors w with w > v
      auto iu = std::upper_bound(nu.begin(), nu.end(), v);
      auto iv = std::upper_bound(nv.begin(), nv.end(), v);
      while (iu != nu.end() && iv != nv.end()) {
        if (*iu < *iv)
          ++iu;
        else if (*iv < *iu)
          ++iv;
        else {
          ++total;
          ++iu;
          ++iv;
        }
      }
    }
  }
  return total;
}

}  // namespace

std::uint64_t count_triangles_exact(std::span<const Edge> edges) {
  CompactGraph g(edges);
  return g.n() <= kDenseLimit ? count_dense(g) : count_sparse(g);
}

std::vector<Triangle> list_triangles(std::span<const Edge> edges) {
  CompactGraph g(edges);
  std::vector<Triangle> out;
  for (std::uint32_t u = 0; u < g.n(); ++u) {
    const auto& nu = g.adj[u];
    for (std::uint32_t v : nu) {
      if (v <= u) continue;
      const auto& nv = g.adj[v];
      auto iu = std::upper_bound(nu.begin(), nu.end(), v);
      auto iv = std::upper_bound(nv.begin(), nv.end(), v);
      while (iu != nu.end() && iv != nv.end()) {
        if (*iu < *iv)
          ++iu;
        else if (*iv < *iu)
          ++iv;
        else {
          out.push_back({g.id_of[u], g.id_of[v], g.id_of[*iu]});
          ++iu;
          ++iv;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Path2> enumerate_2paths(std::span<const Edge> edges) {
  CompactGraph g(edges);
  std::vector<Path2> out;
  for (std::uint32_t mid = 0; mid < g.n(); ++mid) {
    const auto& nbrs = g.adj[mid];
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j)
        out.push_back({g.id_of[nbrs[i]], g.id_of[mid], g.id_of[nbrs[j]]});
  }
  return out;
}

PartitionResult simulate_partition(std::span<const Edge> edges) {
  PartitionResult filters;
  std::vector<std::unordered_set<NodeId>> members;  // parallel adjacency sets
  for (const Edge& e : edges) {
    bool consumed = false;
    for (std::size_t i = 0; i < filters.size(); ++i) {
      NodeId r = filters[i].responsible;
      if (e.first == r || e.second == r) {
        NodeId other = e.first == r ? e.second : e.first;
        if (members[i].insert(other).second) filters[i].adjacency.push_back(other);
        consumed = true;
        break;
      }
    }
    if (!consumed) {
      filters.push_back({e.first, {e.second}});
      members.push_back({e.second});
    }
  }
  return filters;
}

std::vector<std::pair<NodeId, std::uint64_t>> simulate_filter_counts(
    const PartitionResult& partition, std::span<const Edge> edges) {
  std::vector<std::pair<NodeId, std::uint64_t>> out;
  out.reserve(partition.size());
  for (const auto& f : partition) {
    std::unordered_set<NodeId> adj(f.adjacency.begin(), f.adjacency.end());
    std::uint64_t tally = 0;
    for (const Edge& e : edges)
      if (adj.contains(e.first) && adj.contains(e.second)) ++tally;
    out.emplace_back(f.responsible, tally);
  }
  return out;
}

}  // namespace tricount::oracle

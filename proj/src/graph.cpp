#include "lntopo/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lntopo/error.hpp"

namespace lntopo {

TopologyGraph TopologyGraph::from_edges(std::size_t node_count, std::span<const Edge> edges,
                                        std::vector<std::string> ids) {
  if (ids.empty()) {
    ids.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) ids.push_back(std::to_string(i));
  }
  if (ids.size() != node_count) throw Error(ErrorCode::SchemaMismatch, "id count differs from node count");

  std::vector<Edge> directed;
  directed.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= node_count || v >= node_count) throw Error(ErrorCode::NodeNotFound, "edge endpoint out of range");
    if (u == v) continue;
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  TopologyGraph g;
  g.offsets_.assign(node_count + 1, 0);
  for (auto [u, v] : directed) ++g.offsets_[u + 1];
  for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.neighbors_.reserve(directed.size());
  for (auto [u, v] : directed) g.neighbors_.push_back(v);
  g.ids_ = std::move(ids);
  g.index_.reserve(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    if (!g.index_.emplace(g.ids_[i], static_cast<NodeIndex>(i)).second) {
      throw Error(ErrorCode::SchemaMismatch, "duplicate node id " + g.ids_[i]);
    }
  }
  return g;
}

bool TopologyGraph::has_edge(NodeIndex u, NodeIndex v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<NodeIndex> TopologyGraph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Edge> TopologyGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeIndex u = 0; u < node_count(); ++u) {
    for (NodeIndex v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

TopologyGraph to_undirected(const Snapshot& snapshot) {
  std::vector<std::string> ids;
  std::map<NodeId, NodeIndex> index;
  ids.reserve(snapshot.nodes.size());
  for (const auto& [id, alias] : snapshot.nodes) {
    index.emplace(id, static_cast<NodeIndex>(ids.size()));
    ids.push_back(node_id_hex(id));
  }
  std::vector<Edge> edges;
  edges.reserve(snapshot.channels.size());
  for (const auto& c : snapshot.channels) {
    auto a = index.find(c.endpoint_a);
    auto b = index.find(c.endpoint_b);
    if (a == index.end() || b == index.end()) {
      throw Error(ErrorCode::SchemaMismatch, "channel endpoint missing from node set");
    }
    edges.emplace_back(a->second, b->second);
  }
  const std::size_t n = ids.size();
  return TopologyGraph::from_edges(n, edges, std::move(ids));
}

TopologyGraph induced_subgraph(const TopologyGraph& g, std::span<const NodeIndex> nodes) {
  std::vector<NodeIndex> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<NodeIndex> remap(g.node_count(), kUnreachable);
  std::vector<std::string> ids;
  ids.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] >= g.node_count()) throw Error(ErrorCode::NodeNotFound, "node index out of range");
    remap[sorted[i]] = static_cast<NodeIndex>(i);
    ids.push_back(g.id(sorted[i]));
  }
  std::vector<Edge> edges;
  for (NodeIndex u : sorted) {
    for (NodeIndex v : g.neighbors(u)) {
      if (u < v && remap[v] != kUnreachable) edges.emplace_back(remap[u], remap[v]);
    }
  }
  return TopologyGraph::from_edges(sorted.size(), edges, std::move(ids));
}

Components connected_components(const TopologyGraph& g) {
  Components c;
  c.label.assign(g.node_count(), kUnreachable);
  std::vector<NodeIndex> stack;
  for (NodeIndex s = 0; s < g.node_count(); ++s) {
    if (c.label[s] != kUnreachable) continue;
    const auto id = static_cast<std::uint32_t>(c.size.size());
    std::size_t size = 0;
    c.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeIndex u = stack.back();
      stack.pop_back();
      ++size;
      for (NodeIndex v : g.neighbors(u)) {
        if (c.label[v] == kUnreachable) {
          c.label[v] = id;
          stack.push_back(v);
        }
      }
    }
    c.size.push_back(size);
  }
  return c;
}

std::vector<NodeIndex> largest_component_nodes(const TopologyGraph& g) {
  if (g.empty()) return {};
  const auto c = connected_components(g);
  // Components are numbered in order of their smallest node, so the first
  // maximum is the tie-break winner.
  const auto best = static_cast<std::uint32_t>(std::max_element(c.size.begin(), c.size.end()) - c.size.begin());
  std::vector<NodeIndex> nodes;
  nodes.reserve(c.size[best]);
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (c.label[v] == best) nodes.push_back(v);
  }
  return nodes;
}

TopologyGraph largest_component(const TopologyGraph& g) {
  if (g.empty()) return g;
  const auto nodes = largest_component_nodes(g);
  if (nodes.size() == g.node_count()) return g;
  return induced_subgraph(g, nodes);
}

bool is_connected(const TopologyGraph& g) { return g.empty() || connected_components(g).count() == 1; }

void bfs_distances(const TopologyGraph& g, NodeIndex source, std::vector<std::uint32_t>& dist,
                   std::vector<NodeIndex>& queue) {
  if (source >= g.node_count()) throw Error(ErrorCode::NodeNotFound, "source " + std::to_string(source));
  dist.assign(g.node_count(), kUnreachable);
  queue.clear();
  queue.reserve(g.node_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeIndex u = queue[head];
    for (NodeIndex v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
}

std::vector<std::uint32_t> bfs_distances(const TopologyGraph& g, NodeIndex source) {
  std::vector<std::uint32_t> dist;
  std::vector<NodeIndex> queue;
  bfs_distances(g, source, dist, queue);
  return dist;
}

DegreeDistribution degree_distribution(const TopologyGraph& g) {
  DegreeDistribution dd;
  dd.degrees.reserve(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) dd.degrees.push_back(static_cast<std::uint32_t>(g.degree(v)));
  std::sort(dd.degrees.begin(), dd.degrees.end());
  return dd;
}

std::vector<double> as_doubles(const DegreeDistribution& dd) { return {dd.degrees.begin(), dd.degrees.end()}; }

TopologyGraph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    long long u = -1;
    long long v = -1;
    if (!(fields >> u >> v) || u < 0 || v < 0) throw Error(ErrorCode::Malformed, line_no, "expected 'u v'");
    edges.emplace_back(static_cast<NodeIndex>(u), static_cast<NodeIndex>(v));
    n = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(u, v)) + 1);
  }
  return TopologyGraph::from_edges(n, edges);
}

TopologyGraph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const TopologyGraph& g) {
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace lntopo

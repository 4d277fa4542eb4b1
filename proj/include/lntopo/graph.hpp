#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lntopo/snapshot.hpp"

namespace lntopo {

using NodeIndex = std::uint32_t;
using Edge = std::pair<NodeIndex, NodeIndex>;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Immutable simple undirected graph in CSR form. Node ids are kept only in
/// the id map; algorithms work on contiguous indices.
class TopologyGraph {
 public:
  TopologyGraph() = default;

  /// Self-loops are dropped and parallel edges collapse. Without ids the
  /// nodes are named by their decimal index.
  static TopologyGraph from_edges(std::size_t node_count, std::span<const Edge> edges,
                                  std::vector<std::string> ids = {});

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  bool empty() const { return ids_.empty(); }

  std::span<const NodeIndex> neighbors(NodeIndex v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeIndex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeIndex u, NodeIndex v) const;

  const std::string& id(NodeIndex v) const { return ids_[v]; }
  std::span<const std::string> ids() const { return ids_; }
  std::optional<NodeIndex> index_of(std::string_view id) const;

  /// Edges with u < v, in ascending order.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeIndex> neighbors_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeIndex> index_;
};

/// One node per snapshot node (ids are hex node ids in ascending order), one
/// edge per connected endpoint pair.
TopologyGraph to_undirected(const Snapshot& snapshot);

/// Induced subgraph on `nodes` (any order, duplicates ignored); node order
/// follows the original indices and ids are carried over.
TopologyGraph induced_subgraph(const TopologyGraph& g, std::span<const NodeIndex> nodes);

struct Components {
  std::vector<std::uint32_t> label;  // component per node, numbered by first node
  std::vector<std::size_t> size;
  std::size_t count() const { return size.size(); }
};
Components connected_components(const TopologyGraph& g);

/// Nodes of the largest component; ties go to the component with the smallest
/// minimum node index.
std::vector<NodeIndex> largest_component_nodes(const TopologyGraph& g);
TopologyGraph largest_component(const TopologyGraph& g);
bool is_connected(const TopologyGraph& g);

/// Hop distances from source; kUnreachable where no path exists.
std::vector<std::uint32_t> bfs_distances(const TopologyGraph& g, NodeIndex source);
/// Same, reusing caller buffers (distance row and BFS queue).
void bfs_distances(const TopologyGraph& g, NodeIndex source, std::vector<std::uint32_t>& dist,
                   std::vector<NodeIndex>& queue);

/// Lazily evaluated all-pairs distance rows, one BFS per row.
class DistanceRows {
 public:
  class iterator {
   public:
    using value_type = std::vector<std::uint32_t>;
    using difference_type = std::ptrdiff_t;
    iterator(const TopologyGraph* g, NodeIndex source) : g_(g), source_(source) {}
    const value_type& operator*() const {
      bfs_distances(*g_, source_, row_, queue_);
      return row_;
    }
    iterator& operator++() {
      ++source_;
      return *this;
    }
    bool operator==(const iterator& o) const { return source_ == o.source_; }

   private:
    const TopologyGraph* g_;
    NodeIndex source_;
    mutable value_type row_;
    mutable std::vector<NodeIndex> queue_;
  };

  explicit DistanceRows(const TopologyGraph& g) : g_(&g) {}
  iterator begin() const { return {g_, 0}; }
  iterator end() const { return {g_, static_cast<NodeIndex>(g_->node_count())}; }

 private:
  const TopologyGraph* g_;
};

inline DistanceRows all_pairs_distances(const TopologyGraph& g) { return DistanceRows(g); }

/// Sorted degree multiset.
struct DegreeDistribution {
  std::vector<std::uint32_t> degrees;
};
DegreeDistribution degree_distribution(const TopologyGraph& g);
std::vector<double> as_doubles(const DegreeDistribution& dd);

struct ForestFireConfig {
  std::size_t target_size = 100;
  std::size_t count = 100;
  double p_forward = 0.7;
  std::uint64_t seed = 1;
};

/// Node sets (original indices, sorted) of ForestFire samples drawn from the
/// largest component. Throws ComponentTooSmall when it has fewer than
/// target_size nodes.
std::vector<std::vector<NodeIndex>> forestfire_node_sets(const TopologyGraph& g, const ForestFireConfig& config);
std::vector<TopologyGraph> sample_forestfire(const TopologyGraph& g, const ForestFireConfig& config);

/// Barabási–Albert preferential attachment graph: a star on m+1 nodes, then
/// each new node attaches to m distinct degree-weighted targets.
TopologyGraph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);
/// Erdős–Rényi G(n, p).
TopologyGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

// Edge-list text: one "u v" pair per line, 0-based.
TopologyGraph read_edge_list(std::istream& in);
TopologyGraph read_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const TopologyGraph& g);

}  // namespace lntopo

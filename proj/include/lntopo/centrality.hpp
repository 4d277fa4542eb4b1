#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lntopo/graph.hpp"

namespace lntopo {

/// Brandes betweenness, normalized by (n-1)(n-2) over ordered pairs. With an
/// explicit source subset the result is scaled by n / |sources|.
std::vector<double> betweenness_centrality(const TopologyGraph& g);
std::vector<double> betweenness_centrality(const TopologyGraph& g, std::span<const NodeIndex> sources);

/// Current-flow closeness: 1 / sum_w R_eff(v, w), from the inverse of the
/// Laplacian grounded at node 0. Requires a connected graph with >= 2 nodes.
std::vector<double> information_centrality(const TopologyGraph& g);
/// Mean information centrality estimated from effective resistances among a
/// uniform node sample (one sparse factorisation, one solve per sampled node).
double mean_information_centrality_sampled(const TopologyGraph& g, std::size_t samples, std::uint64_t seed);

/// Communicability betweenness: for each v, the summed relative drop of
/// exp(A)_pq over ordered pairs p != q (both != v) once v's edges are removed,
/// scaled by 1/((n-1)(n-2)). Requires a connected graph.
std::vector<double> communicability_betweenness(const TopologyGraph& g);
/// Monte Carlo estimate of the mean over (v, q) samples, using Lanczos
/// approximations of exp(A) e_q and exp(A_v) e_q.
double mean_communicability_betweenness_sampled(const TopologyGraph& g, std::size_t samples, std::uint64_t seed);

/// Burt's constraint per node (NaN for isolated nodes).
std::vector<double> burt_constraint(const TopologyGraph& g);
/// Ego-network effective size: degree - 2 * (ties among neighbours) / degree.
std::vector<double> effective_size(const TopologyGraph& g);

/// Wiener index over reachable unordered pairs.
double wiener_index_reachable(const TopologyGraph& g);
/// W(G) - W(G - v) per node, both over reachable pairs.
std::vector<double> closeness_vitality(const TopologyGraph& g);
double mean_closeness_vitality_sampled(const TopologyGraph& g, std::size_t samples, std::uint64_t seed);

/// Uniform sample of k distinct nodes, sorted.
std::vector<NodeIndex> sample_nodes(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace lntopo

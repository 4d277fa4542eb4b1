#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lntopo/graph.hpp"
#include "lntopo/powerlaw.hpp"
#include "lntopo/snapshot.hpp"

namespace lntopo {

enum class CostModelKind { lnd, ecl, cln };

std::string_view to_string(CostModelKind kind) noexcept;
std::optional<CostModelKind> parse_cost_model(std::string_view name);

struct CostModel {
  CostModelKind kind = CostModelKind::lnd;
  double lnd_risk_factor = 15e-9;
  double cln_risk_factor = 10.0;
  double cln_blocks_per_year = 52596.0;
  double ecl_hop_base = 0.0;
  double ecl_weight_base = 1.0;
  double ecl_weight_cltv = 0.15;
  double ecl_cltv_scale = 2016.0;
  double epsilon = 1e-6;

  static CostModel defaults(CostModelKind kind) {
    CostModel m;
    m.kind = kind;
    return m;
  }
};

bool policy_usable(const ChannelPolicy& policy, std::uint64_t amount_msat);

/// Cost of forwarding amount_msat over one channel direction. Throws
/// PolicyUnusable when disabled or the amount is outside the HTLC bounds.
double edge_cost(const CostModel& model, const ChannelPolicy& policy, std::uint64_t amount_msat);

/// Directed view of a snapshot: one arc per present channel direction.
class RoutingNetwork {
 public:
  struct Arc {
    NodeIndex to;
    ChannelPolicy policy;
  };

  explicit RoutingNetwork(const Snapshot& snapshot);
  RoutingNetwork(std::vector<std::string> ids, std::vector<std::vector<Arc>> arcs);

  std::size_t node_count() const { return ids_.size(); }
  std::span<const Arc> arcs(NodeIndex v) const { return arcs_[v]; }
  const std::string& id(NodeIndex v) const { return ids_[v]; }
  std::optional<NodeIndex> index_of(std::string_view id) const;

 private:
  void build_index();

  std::vector<std::string> ids_;
  std::vector<std::vector<Arc>> arcs_;
  std::unordered_map<std::string, NodeIndex> index_;
};

struct PaymentRequest {
  NodeIndex source = 0;
  NodeIndex destination = 0;
  std::uint64_t amount_msat = 100000;
};

struct RouteResult {
  enum class Status { found, no_route };
  Status status = Status::no_route;
  std::vector<NodeIndex> path;  // source .. destination when found
  double total_cost = 0.0;

  bool found() const { return status == Status::found; }
  /// Intermediate nodes only.
  std::vector<NodeIndex> hops() const;
};

/// Minimum-cost route; ties go to fewer hops, then the lexicographically
/// smallest node-index sequence. Throws NodeNotFound for bad endpoints.
RouteResult find_route(const RoutingNetwork& net, const PaymentRequest& request, const CostModel& model);
RouteResult find_route(const Snapshot& snapshot, const NodeId& source, const NodeId& destination,
                       std::uint64_t amount_msat, const CostModel& model);

struct HopTally {
  CostModelKind model = CostModelKind::lnd;
  std::vector<std::string> node_ids;
  std::vector<std::uint64_t> hops;  // one per node, zeros included
  std::size_t n_requests = 0;
  std::size_t n_routed = 0;
  std::uint64_t amount_msat = 0;
  std::uint64_t seed = 0;
};

struct SimulationConfig {
  std::size_t n_tx = 5000;
  std::uint64_t amount_msat = 100000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

/// n_tx uniform (source != destination) pairs from the seed.
std::vector<PaymentRequest> uniform_workload(std::size_t node_count, const SimulationConfig& config);

/// Routes every request and counts intermediate hops. Throws GraphTooSmall
/// below two nodes. Failed routes are counted in n_requests only.
HopTally simulate(const RoutingNetwork& net, const CostModel& model, const SimulationConfig& config);
HopTally simulate(const RoutingNetwork& net, const CostModel& model, std::span<const PaymentRequest> workload,
                  std::size_t threads = 1);
HopTally simulate(const Snapshot& snapshot, const CostModel& model, const SimulationConfig& config);

struct HopStatistics {
  std::vector<std::pair<double, double>> curve;  // (rank fraction, cumulative hop share), from (0,0)
  std::optional<PowerLawFit> fit;                // on positive counts; absent when degenerate
  double gini = 0.0;
  std::size_t n_routed = 0;
};

/// Throws EmptyTally when the tally has no nodes.
HopStatistics hop_statistics(const HopTally& tally);

// node_id_hex,hops
void write_tally_csv(std::ostream& out, const HopTally& tally);
// rank_fraction,cum_hop_share rows, then a gini,alpha,r2,n_routed summary
void write_hop_statistics_csv(std::ostream& out, const HopStatistics& stats);
HopStatistics read_hop_statistics_csv(std::istream& in);

}  // namespace lntopo

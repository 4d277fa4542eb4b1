#include "lntopo/routing.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <queue>

#include "lntopo/csv.hpp"
#include "lntopo/error.hpp"
#include "lntopo/inequality.hpp"
#include "lntopo/parallel.hpp"
#include "lntopo/random.hpp"

namespace lntopo {

std::string_view to_string(CostModelKind kind) noexcept {
  switch (kind) {
    case CostModelKind::lnd:
      return "lnd";
    case CostModelKind::ecl:
      return "ecl";
    case CostModelKind::cln:
      return "cln";
  }
  return "?";
}

std::optional<CostModelKind> parse_cost_model(std::string_view name) {
  for (auto k : {CostModelKind::lnd, CostModelKind::ecl, CostModelKind::cln}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

bool policy_usable(const ChannelPolicy& policy, std::uint64_t amount_msat) {
  if (policy.disabled || amount_msat < policy.htlc_minimum_msat) return false;
  return !policy.htlc_maximum_msat || amount_msat <= *policy.htlc_maximum_msat;
}

double edge_cost(const CostModel& model, const ChannelPolicy& policy, std::uint64_t amount_msat) {
  if (!policy_usable(policy, amount_msat)) throw Error(ErrorCode::PolicyUnusable, "policy disabled or amount out of bounds");
  const auto amount = static_cast<double>(amount_msat);
  const auto cltv = static_cast<double>(policy.cltv_expiry_delta);
  const double fee = static_cast<double>(policy.fee_base_msat) +
                     amount * static_cast<double>(policy.fee_proportional_millionths) / 1e6;
  switch (model.kind) {
    case CostModelKind::lnd:
      return fee + amount * cltv * model.lnd_risk_factor + model.epsilon;
    case CostModelKind::cln:
      return fee + amount * cltv * model.cln_risk_factor / (model.cln_blocks_per_year * 100.0) + model.epsilon;
    case CostModelKind::ecl:
      return (fee + model.ecl_hop_base) * (model.ecl_weight_base + model.ecl_weight_cltv * cltv / model.ecl_cltv_scale) +
             model.epsilon;
  }
  return model.epsilon;
}

RoutingNetwork::RoutingNetwork(const Snapshot& snapshot) {
  std::map<NodeId, NodeIndex> index;
  for (const auto& [id, alias] : snapshot.nodes) {
    index.emplace(id, static_cast<NodeIndex>(ids_.size()));
    ids_.push_back(node_id_hex(id));
  }
  arcs_.resize(ids_.size());
  for (const auto& c : snapshot.channels) {
    auto a = index.find(c.endpoint_a);
    auto b = index.find(c.endpoint_b);
    if (a == index.end() || b == index.end()) throw Error(ErrorCode::SchemaMismatch, "channel endpoint missing");
    if (c.policy_a) arcs_[a->second].push_back({b->second, *c.policy_a});
    if (c.policy_b) arcs_[b->second].push_back({a->second, *c.policy_b});
  }
  build_index();
}

RoutingNetwork::RoutingNetwork(std::vector<std::string> ids, std::vector<std::vector<Arc>> arcs)
    : ids_(std::move(ids)), arcs_(std::move(arcs)) {
  if (ids_.size() != arcs_.size()) throw Error(ErrorCode::SchemaMismatch, "one arc list per node expected");
  for (const auto& list : arcs_) {
    for (const auto& a : list) {
      if (a.to >= ids_.size()) throw Error(ErrorCode::NodeNotFound, "arc target out of range");
    }
  }
  build_index();
}

void RoutingNetwork::build_index() {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], static_cast<NodeIndex>(i)).second) {
      throw Error(ErrorCode::SchemaMismatch, "duplicate node id " + ids_[i]);
    }
  }
}

std::optional<NodeIndex> RoutingNetwork::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeIndex> RouteResult::hops() const {
  if (path.size() <= 2) return {};
  return {path.begin() + 1, path.end() - 1};
}

namespace {

struct Label {
  double cost = std::numeric_limits<double>::infinity();
  std::uint32_t hops = 0;
  NodeIndex pred = kUnreachable;
  bool done = false;
};

std::vector<NodeIndex> trace(const std::vector<Label>& labels, NodeIndex v) {
  std::vector<NodeIndex> path;
  for (; v != kUnreachable; v = labels[v].pred) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

// Dijkstra with (cost, hops, path) labels. Costs are strictly positive, so a
// predecessor is always settled before any node whose label it ties.
RouteResult dijkstra(const RoutingNetwork& net, const PaymentRequest& req, const CostModel& model,
                     std::vector<Label>& labels) {
  labels.assign(net.node_count(), Label{});
  using Entry = std::tuple<double, std::uint32_t, NodeIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  labels[req.source].cost = 0.0;
  heap.emplace(0.0, 0, req.source);
  while (!heap.empty()) {
    const auto [cost, hops, u] = heap.top();
    heap.pop();
    auto& lu = labels[u];
    if (lu.done || cost != lu.cost || hops != lu.hops) continue;
    lu.done = true;
    if (u == req.destination) break;
    for (const auto& arc : net.arcs(u)) {
      if (!policy_usable(arc.policy, req.amount_msat)) continue;
      auto& lv = labels[arc.to];
      if (lv.done) continue;
      const double c = cost + edge_cost(model, arc.policy, req.amount_msat);
      const std::uint32_t h = hops + 1;
      bool better = c < lv.cost || (c == lv.cost && h < lv.hops);
      if (!better && c == lv.cost && h == lv.hops && lv.pred != u) {
        better = trace(labels, u) < trace(labels, lv.pred);
      }
      if (better) {
        lv.cost = c;
        lv.hops = h;
        lv.pred = u;
        heap.emplace(c, h, arc.to);
      }
    }
  }
  RouteResult r;
  if (!labels[req.destination].done) return r;
  r.status = RouteResult::Status::found;
  r.total_cost = labels[req.destination].cost;
  r.path = trace(labels, req.destination);
  return r;
}

void check_request(const RoutingNetwork& net, const PaymentRequest& req) {
  if (req.source >= net.node_count() || req.destination >= net.node_count()) {
    throw Error(ErrorCode::NodeNotFound, "payment endpoint not in snapshot");
  }
}

}  // namespace

RouteResult find_route(const RoutingNetwork& net, const PaymentRequest& request, const CostModel& model) {
  check_request(net, request);
  std::vector<Label> labels;
  return dijkstra(net, request, model, labels);
}

RouteResult find_route(const Snapshot& snapshot, const NodeId& source, const NodeId& destination,
                       std::uint64_t amount_msat, const CostModel& model) {
  const RoutingNetwork net(snapshot);
  const auto s = net.index_of(node_id_hex(source));
  const auto t = net.index_of(node_id_hex(destination));
  if (!s || !t) throw Error(ErrorCode::NodeNotFound, "payment endpoint not in snapshot");
  return find_route(net, {*s, *t, amount_msat}, model);
}

std::vector<PaymentRequest> uniform_workload(std::size_t node_count, const SimulationConfig& config) {
  if (node_count < 2) throw Error(ErrorCode::GraphTooSmall, "simulation needs at least two nodes");
  Rng rng(config.seed);
  std::vector<PaymentRequest> out(config.n_tx);
  for (auto& r : out) {
    r.source = static_cast<NodeIndex>(rng.uniform_index(node_count));
    r.destination = static_cast<NodeIndex>(rng.uniform_index(node_count - 1));
    if (r.destination >= r.source) ++r.destination;
    r.amount_msat = config.amount_msat;
  }
  return out;
}

HopTally simulate(const RoutingNetwork& net, const CostModel& model, std::span<const PaymentRequest> workload,
                  std::size_t threads) {
  if (net.node_count() < 2) throw Error(ErrorCode::GraphTooSmall, "simulation needs at least two nodes");
  for (const auto& r : workload) {
    check_request(net, r);
    if (r.source == r.destination) throw Error(ErrorCode::Malformed, "payment source equals destination");
  }
  // Each chunk owns its counters; integer sums make the merge order-free.
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads * 4, workload.size()));
  std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(net.node_count(), 0));
  std::vector<std::size_t> routed(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<Label> labels;
    for (std::size_t i = c; i < workload.size(); i += chunks) {
      const auto r = dijkstra(net, workload[i], model, labels);
      if (!r.found()) continue;
      ++routed[c];
      for (NodeIndex v : r.hops()) ++partial[c][v];
    }
  });
  HopTally tally;
  tally.model = model.kind;
  tally.hops.assign(net.node_count(), 0);
  tally.node_ids.reserve(net.node_count());
  for (NodeIndex v = 0; v < net.node_count(); ++v) tally.node_ids.push_back(net.id(v));
  for (std::size_t c = 0; c < chunks; ++c) {
    tally.n_routed += routed[c];
    for (NodeIndex v = 0; v < net.node_count(); ++v) tally.hops[v] += partial[c][v];
  }
  tally.n_requests = workload.size();
  if (!workload.empty()) tally.amount_msat = workload.front().amount_msat;
  return tally;
}

HopTally simulate(const RoutingNetwork& net, const CostModel& model, const SimulationConfig& config) {
  const auto workload = uniform_workload(net.node_count(), config);
  auto tally = simulate(net, model, workload, config.threads);
  tally.amount_msat = config.amount_msat;
  tally.seed = config.seed;
  return tally;
}

HopTally simulate(const Snapshot& snapshot, const CostModel& model, const SimulationConfig& config) {
  return simulate(RoutingNetwork(snapshot), model, config);
}

HopStatistics hop_statistics(const HopTally& tally) {
  if (tally.hops.empty()) throw Error(ErrorCode::EmptyTally, "tally has no nodes");
  HopStatistics s;
  s.n_routed = tally.n_routed;
  std::vector<double> counts(tally.hops.begin(), tally.hops.end());
  s.gini = gini(counts);
  std::sort(counts.begin(), counts.end(), std::greater<>());
  double total = 0.0;
  for (double c : counts) total += c;
  const auto n = static_cast<double>(counts.size());
  s.curve.emplace_back(0.0, 0.0);
  double running = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    running += counts[i];
    const double frac = static_cast<double>(i + 1) / n;
    s.curve.emplace_back(frac, total == 0.0 ? frac : running / total);
  }
  s.curve.back() = {1.0, 1.0};
  std::vector<std::uint32_t> positive;
  for (auto h : tally.hops) {
    if (h > 0) positive.push_back(static_cast<std::uint32_t>(std::min<std::uint64_t>(h, UINT32_MAX)));
  }
  const auto points = degree_frequencies(positive);
  try {
    s.fit = fit_power_law(points);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateDistribution) throw;
  }
  return s;
}

void write_tally_csv(std::ostream& out, const HopTally& tally) {
  out << "node_id_hex,hops\n";
  for (std::size_t i = 0; i < tally.hops.size(); ++i) out << tally.node_ids[i] << ',' << tally.hops[i] << '\n';
}

void write_hop_statistics_csv(std::ostream& out, const HopStatistics& stats) {
  out << "rank_fraction,cum_hop_share\n";
  for (auto [x, y] : stats.curve) out << format_double(x) << ',' << format_double(y) << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out << "gini,alpha,r2,n_routed\n";
  out << format_double(stats.gini) << ',' << format_double(stats.fit ? stats.fit->alpha : nan) << ','
      << format_double(stats.fit ? stats.fit->r_squared : nan) << ',' << stats.n_routed << '\n';
}

HopStatistics read_hop_statistics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "rank_fraction,cum_hop_share") {
    throw Error(ErrorCode::SchemaMismatch, 1, "bad hop statistics header");
  }
  HopStatistics s;
  std::size_t line_no = 1;
  bool summary = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (trim(line) == "gini,alpha,r2,n_routed") {
      summary = true;
      continue;
    }
    const auto f = split(line, ',');
    if (!summary) {
      const auto x = f.size() == 2 ? parse_double(f[0]) : std::nullopt;
      const auto y = f.size() == 2 ? parse_double(f[1]) : std::nullopt;
      if (!x || !y) throw Error(ErrorCode::Malformed, line_no, "bad curve point");
      s.curve.emplace_back(*x, *y);
      continue;
    }
    if (f.size() != 4) throw Error(ErrorCode::Malformed, line_no, "bad summary row");
    const auto g = parse_double(f[0]);
    const auto a = parse_double(f[1]);
    const auto r2 = parse_double(f[2]);
    const auto routed = parse_number<std::size_t>(f[3]);
    if (!g || !a || !r2 || !routed) throw Error(ErrorCode::Malformed, line_no, "bad summary values");
    s.gini = *g;
    if (!std::isnan(*a)) s.fit = PowerLawFit{*a, *r2, 0};
    s.n_routed = *routed;
  }
  if (!summary) throw Error(ErrorCode::Malformed, line_no, "missing summary row");
  return s;
}

}  // namespace lntopo

#pragma once
// Synthetic inputs shared by the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "lntopo/gossip.hpp"
#include "lntopo/graph.hpp"
#include "lntopo/random.hpp"
#include "lntopo/snapshot.hpp"

namespace fixtures {

using namespace lntopo;

inline NodeId node_id(std::uint32_t i) {
  NodeId id{};
  id[0] = 0x02;
  id[29] = static_cast<std::uint8_t>(i >> 24);
  id[30] = static_cast<std::uint8_t>(i >> 16);
  id[31] = static_cast<std::uint8_t>(i >> 8);
  id[32] = static_cast<std::uint8_t>(i);
  return id;
}

inline ShortChannelId scid(std::uint32_t block, std::uint32_t tx = 1, std::uint16_t out = 0) {
  return ShortChannelId{block, tx, out};
}

inline GossipRecord ca(ShortChannelId id, std::uint32_t a, std::uint32_t b, UnixTime t) {
  ChannelAnnouncement m;
  m.short_channel_id = id;
  m.node_id_1 = node_id(std::min(a, b));
  m.node_id_2 = node_id(std::max(a, b));
  return GossipRecord{m, t};
}

struct UpdateSpec {
  int direction = 0;
  bool disabled = false;
  std::uint32_t cltv = 40;
  std::uint64_t htlc_min = 1;
  std::uint64_t fee_base = 1000;
  std::uint64_t fee_ppm = 100;
  std::optional<std::uint64_t> htlc_max;
};

inline GossipRecord cu(ShortChannelId id, UnixTime t, const UpdateSpec& s = {}) {
  ChannelUpdate m;
  m.short_channel_id = id;
  m.timestamp = t;
  m.channel_flags = static_cast<std::uint8_t>(s.direction | (s.disabled ? 2 : 0));
  m.cltv_expiry_delta = s.cltv;
  m.htlc_minimum_msat = s.htlc_min;
  m.fee_base_msat = s.fee_base;
  m.fee_proportional_millionths = s.fee_ppm;
  m.htlc_maximum_msat = s.htlc_max;
  if (s.htlc_max) m.message_flags = 1;
  return GossipRecord{m, t};
}

inline GossipRecord na(std::uint32_t node, UnixTime t, std::string_view alias = {}) {
  NodeAnnouncement m;
  m.node_id = node_id(node);
  m.timestamp = t;
  m.set_alias(alias);
  return GossipRecord{m, t};
}

/// Gossip over [start, start + span): channels open at random times, refresh
/// each direction every 1-6 days, occasionally disable, and some go silent
/// (closure by staleness).
inline std::vector<GossipRecord> synthetic_gossip(std::uint64_t seed, std::uint32_t nodes, std::uint32_t channels,
                                                  UnixTime start, std::int64_t span) {
  Rng rng(seed);
  std::vector<GossipRecord> out;
  constexpr std::int64_t day = 86400;
  for (std::uint32_t c = 0; c < channels; ++c) {
    const auto a = static_cast<std::uint32_t>(rng.uniform_index(nodes));
    auto b = static_cast<std::uint32_t>(rng.uniform_index(nodes - 1));
    if (b >= a) ++b;
    const auto id = scid(600000 + c, static_cast<std::uint32_t>(rng.uniform_index(3000)), 0);
    const UnixTime opened = start + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::size_t>(span * 6 / 10)));
    out.push_back(ca(id, a, b, opened));
    const bool closes = rng.bernoulli(0.25);
    const UnixTime silent = closes ? opened + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::size_t>(span))) : start + span;
    for (int dir = 0; dir < 2; ++dir) {
      if (rng.bernoulli(0.1)) continue;  // one-sided channel
      UnixTime t = opened + static_cast<std::int64_t>(rng.uniform_index(day));
      while (t < silent && t < start + span) {
        UpdateSpec s;
        s.direction = dir;
        s.disabled = rng.bernoulli(0.1);
        s.cltv = static_cast<std::uint32_t>(6 + rng.uniform_index(140));
        s.fee_base = rng.uniform_index(2000);
        s.fee_ppm = rng.uniform_index(500);
        if (rng.bernoulli(0.5)) s.htlc_max = 1000000000 + rng.uniform_index(1000000);
        out.push_back(cu(id, t, s));
        t += day + static_cast<std::int64_t>(rng.uniform_index(5 * day));
      }
    }
    if (rng.bernoulli(0.5)) out.push_back(na(a, opened + 10, "node" + std::to_string(a)));
  }
  return order_records(out);
}

inline ChannelPolicy policy(int direction, std::uint64_t base, std::uint64_t ppm, std::uint32_t cltv,
                            std::uint64_t htlc_min = 0, std::optional<std::uint64_t> htlc_max = std::nullopt,
                            bool disabled = false) {
  ChannelPolicy p;
  p.direction = direction;
  p.fee_base_msat = base;
  p.fee_proportional_millionths = ppm;
  p.cltv_expiry_delta = cltv;
  p.htlc_minimum_msat = htlc_min;
  p.htlc_maximum_msat = htlc_max;
  p.disabled = disabled;
  return p;
}

/// Snapshot whose node i has id node_id(i); every edge gets both policies
/// from make(u, v, direction). Isolated graph nodes are dropped.
template <class MakePolicy>
Snapshot snapshot_from_graph(const TopologyGraph& g, UnixTime at, MakePolicy make) {
  Snapshot s;
  s.at = at;
  std::uint32_t block = 1;
  for (auto [u, v] : g.edges()) {
    Channel c;
    c.scid = scid(block++);
    c.endpoint_a = node_id(u);
    c.endpoint_b = node_id(v);
    c.policy_a = make(u, v, 0);
    c.policy_b = make(u, v, 1);
    if (c.policy_a) c.policy_a->last_update = at;
    if (c.policy_b) c.policy_b->last_update = at;
    s.channels.push_back(c);
    s.nodes.emplace(c.endpoint_a, "");
    s.nodes.emplace(c.endpoint_b, "");
  }
  std::sort(s.channels.begin(), s.channels.end(), [](const Channel& a, const Channel& b) { return a.scid < b.scid; });
  return s;
}

inline Snapshot snapshot_from_graph(const TopologyGraph& g, UnixTime at = 1000) {
  return snapshot_from_graph(g, at, [](NodeIndex, NodeIndex, int dir) {
    return std::optional<ChannelPolicy>(policy(dir, 1000, 100, 40));
  });
}

/// Graph on nodes named by decimal ids taken from `ids`.
inline TopologyGraph named_graph(const std::vector<std::string>& ids, const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<Edge> e;
  auto idx = [&](const std::string& s) {
    return static_cast<NodeIndex>(std::find(ids.begin(), ids.end(), s) - ids.begin());
  };
  for (const auto& [a, b] : edges) e.emplace_back(idx(a), idx(b));
  return TopologyGraph::from_edges(ids.size(), e, ids);
}

inline TopologyGraph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeIndex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return TopologyGraph::from_edges(n, e);
}

inline TopologyGraph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeIndex i = 0; i < n; ++i) e.emplace_back(i, static_cast<NodeIndex>((i + 1) % n));
  return TopologyGraph::from_edges(n, e);
}

inline TopologyGraph complete_graph(std::size_t n, NodeIndex offset = 0, std::size_t total = 0) {
  std::vector<Edge> e;
  for (NodeIndex i = 0; i < n; ++i) {
    for (NodeIndex j = i + 1; j < n; ++j) e.emplace_back(offset + i, offset + j);
  }
  return TopologyGraph::from_edges(total == 0 ? n + offset : total, e);
}

inline TopologyGraph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeIndex i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return TopologyGraph::from_edges(leaves + 1, e);
}

inline TopologyGraph from_edges(std::size_t n, std::vector<Edge> e) { return TopologyGraph::from_edges(n, e); }

}  // namespace fixtures

#include "lntopo/snapshot.hpp"

#include <algorithm>
#include <unordered_map>

#include "lntopo/error.hpp"

namespace lntopo {
namespace {

void require_sorted(std::span<const GossipRecord> records) {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].time() < records[i - 1].time()) {
      throw Error(ErrorCode::UnsortedInput, "record " + std::to_string(i) + " goes back in time");
    }
  }
}

bool fresh_and_enabled(const std::optional<ChannelPolicy>& p, UnixTime at, std::int64_t window) {
  return p && !p->disabled && p->last_update >= at - window && p->last_update <= at;
}

struct ChannelState {
  NodeId a{};
  NodeId b{};
  bool announced = false;
  std::optional<ChannelPolicy> policy[2];
};

// Accumulates records in time order; materialize() reads the state at a cutoff.
class SweepState {
 public:
  void apply(const GossipRecord& record) {
    if (auto* ca = std::get_if<ChannelAnnouncement>(&record.payload)) {
      if (ca->node_id_1 == ca->node_id_2) return;
      auto& st = channels_[ca->short_channel_id.pack()];
      st.a = std::min(ca->node_id_1, ca->node_id_2);
      st.b = std::max(ca->node_id_1, ca->node_id_2);
      st.announced = true;
    } else if (auto* cu = std::get_if<ChannelUpdate>(&record.payload)) {
      auto& slot = channels_[cu->short_channel_id.pack()].policy[cu->direction()];
      if (!slot || slot->last_update <= cu->timestamp) slot = ChannelPolicy::from_update(*cu);
    } else if (auto* na = std::get_if<NodeAnnouncement>(&record.payload)) {
      aliases_[na->node_id] = na->alias_text();
    }
  }

  Snapshot materialize(UnixTime at, std::int64_t window) const {
    Snapshot s;
    s.at = at;
    s.liveness_window = window;
    std::vector<std::uint64_t> scids;
    for (const auto& [scid, st] : channels_) {
      if (!st.announced) continue;
      if (!fresh_and_enabled(st.policy[0], at, window) && !fresh_and_enabled(st.policy[1], at, window)) {
        continue;
      }
      scids.push_back(scid);
    }
    std::sort(scids.begin(), scids.end());
    for (auto scid : scids) {
      const auto& st = channels_.at(scid);
      s.channels.push_back(Channel{ShortChannelId::unpack(scid), st.a, st.b, st.policy[0], st.policy[1]});
      for (const auto& id : {st.a, st.b}) {
        auto alias = aliases_.find(id);
        s.nodes.emplace(id, alias == aliases_.end() ? std::string() : alias->second);
      }
    }
    return s;
  }

 private:
  std::unordered_map<std::uint64_t, ChannelState> channels_;
  std::map<NodeId, std::string> aliases_;
};

}  // namespace

ChannelPolicy ChannelPolicy::from_update(const ChannelUpdate& u) {
  ChannelPolicy p;
  p.direction = u.direction();
  p.fee_base_msat = u.fee_base_msat;
  p.fee_proportional_millionths = u.fee_proportional_millionths;
  p.cltv_expiry_delta = u.cltv_expiry_delta;
  p.htlc_minimum_msat = u.htlc_minimum_msat;
  p.htlc_maximum_msat = u.htlc_maximum_msat;
  p.last_update = u.timestamp;
  p.disabled = u.disabled();
  return p;
}

void validate_snapshot(const Snapshot& s) {
  std::map<NodeId, bool> used;
  for (const auto& [id, alias] : s.nodes) used[id] = false;
  for (std::size_t i = 0; i < s.channels.size(); ++i) {
    const auto& c = s.channels[i];
    if (i > 0 && !(s.channels[i - 1].scid < c.scid)) {
      throw Error(ErrorCode::SchemaMismatch, "duplicate or unsorted scid " + std::to_string(c.scid.pack()));
    }
    if (!(c.endpoint_a < c.endpoint_b)) {
      throw Error(ErrorCode::SchemaMismatch, "endpoints not in canonical order");
    }
    for (const auto* id : {&c.endpoint_a, &c.endpoint_b}) {
      auto it = used.find(*id);
      if (it == used.end()) throw Error(ErrorCode::SchemaMismatch, "channel endpoint missing from node set");
      it->second = true;
    }
    for (int d = 0; d < 2; ++d) {
      if (c.policy(d) && c.policy(d)->direction != d) {
        throw Error(ErrorCode::SchemaMismatch, "policy direction mismatch");
      }
    }
  }
  for (const auto& [id, u] : used) {
    if (!u) throw Error(ErrorCode::SchemaMismatch, "node without channels: " + node_id_hex(id));
  }
}

Snapshot build_snapshot(std::span<const GossipRecord> records, UnixTime at, std::int64_t window) {
  require_sorted(records);
  // Direct rule application: filter the stream to `at`, then decide per channel.
  std::map<std::uint64_t, const ChannelAnnouncement*> announced;
  std::map<std::pair<std::uint64_t, int>, const ChannelUpdate*> latest;
  std::map<NodeId, std::string> aliases;
  for (const auto& r : records) {
    if (r.time() > at) break;
    if (auto* ca = std::get_if<ChannelAnnouncement>(&r.payload)) {
      if (ca->node_id_1 != ca->node_id_2) announced[ca->short_channel_id.pack()] = ca;
    } else if (auto* cu = std::get_if<ChannelUpdate>(&r.payload)) {
      auto& slot = latest[{cu->short_channel_id.pack(), cu->direction()}];
      if (!slot || slot->timestamp <= cu->timestamp) slot = cu;
    } else if (auto* na = std::get_if<NodeAnnouncement>(&r.payload)) {
      aliases[na->node_id] = na->alias_text();
    }
  }

  Snapshot s;
  s.at = at;
  s.liveness_window = window;
  for (const auto& [scid, ca] : announced) {
    Channel c;
    c.scid = ShortChannelId::unpack(scid);
    c.endpoint_a = std::min(ca->node_id_1, ca->node_id_2);
    c.endpoint_b = std::max(ca->node_id_1, ca->node_id_2);
    if (auto it = latest.find({scid, 0}); it != latest.end()) c.policy_a = ChannelPolicy::from_update(*it->second);
    if (auto it = latest.find({scid, 1}); it != latest.end()) c.policy_b = ChannelPolicy::from_update(*it->second);
    if (!fresh_and_enabled(c.policy_a, at, window) && !fresh_and_enabled(c.policy_b, at, window)) continue;
    for (const auto& id : {c.endpoint_a, c.endpoint_b}) {
      auto alias = aliases.find(id);
      s.nodes.emplace(id, alias == aliases.end() ? std::string() : alias->second);
    }
    s.channels.push_back(std::move(c));
  }
  return s;
}

std::vector<Snapshot> build_series(std::span<const GossipRecord> records, std::span<const UnixTime> schedule,
                                   std::int64_t window) {
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) {
      throw Error(ErrorCode::UnsortedSchedule, "schedule must be strictly increasing");
    }
  }
  require_sorted(records);
  std::vector<Snapshot> series;
  series.reserve(schedule.size());
  SweepState state;
  std::size_t next = 0;
  for (UnixTime at : schedule) {
    while (next < records.size() && records[next].time() <= at) state.apply(records[next++]);
    series.push_back(state.materialize(at, window));
  }
  return series;
}

}  // namespace lntopo

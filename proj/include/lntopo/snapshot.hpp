#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lntopo/gossip.hpp"

namespace lntopo {

/// BOLT#7 nodes prune channels that have not been refreshed for two weeks.
inline constexpr std::int64_t kDefaultLivenessWindow = 14 * 24 * 3600;

/// Routing parameters for one side of a channel. direction 0 forwards from
/// endpoint_a to endpoint_b, direction 1 the reverse.
struct ChannelPolicy {
  int direction = 0;
  std::uint64_t fee_base_msat = 0;
  std::uint64_t fee_proportional_millionths = 0;
  std::uint32_t cltv_expiry_delta = 0;
  std::uint64_t htlc_minimum_msat = 0;
  std::optional<std::uint64_t> htlc_maximum_msat;
  UnixTime last_update = 0;
  bool disabled = false;

  static ChannelPolicy from_update(const ChannelUpdate& update);
  bool operator==(const ChannelPolicy&) const = default;
};

struct Channel {
  ShortChannelId scid;
  NodeId endpoint_a{};  // endpoint_a < endpoint_b
  NodeId endpoint_b{};
  std::optional<ChannelPolicy> policy_a;
  std::optional<ChannelPolicy> policy_b;

  const std::optional<ChannelPolicy>& policy(int direction) const {
    return direction == 0 ? policy_a : policy_b;
  }
  bool operator==(const Channel&) const = default;
};

struct Snapshot {
  UnixTime at = 0;
  std::int64_t liveness_window = kDefaultLivenessWindow;
  std::map<NodeId, std::string> nodes;  // node id -> alias (may be empty)
  std::vector<Channel> channels;        // sorted by scid, unique

  bool operator==(const Snapshot&) const = default;
};

/// Throws SchemaMismatch if channels are unsorted/duplicated or reference
/// nodes outside the node set, or if a node has no channel.
void validate_snapshot(const Snapshot& snapshot);

/// Reconstructs the topology visible at `at`. A channel is included when its
/// announcement is no later than `at` and at least one direction's latest
/// update (at or before `at`) is enabled and no older than the window.
Snapshot build_snapshot(std::span<const GossipRecord> records, UnixTime at,
                        std::int64_t liveness_window = kDefaultLivenessWindow);

/// One forward sweep producing build_snapshot(records, t, window) for each t.
std::vector<Snapshot> build_series(std::span<const GossipRecord> records,
                                   std::span<const UnixTime> schedule,
                                   std::int64_t liveness_window = kDefaultLivenessWindow);

// nodes.csv + channels.csv in `dir`.
void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& dir);
Snapshot read_snapshot(const std::filesystem::path& dir);

// One subdirectory per snapshot, named by its timestamp.
void write_series(std::span<const Snapshot> series, const std::filesystem::path& dir);
std::vector<Snapshot> read_series(const std::filesystem::path& dir);

std::vector<UnixTime> read_schedule(const std::filesystem::path& path);

}  // namespace lntopo

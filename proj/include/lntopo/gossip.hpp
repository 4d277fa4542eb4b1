#pragma once
// Gossip ingestion: BOLT#7 topology messages and the tab-separated record format.
//
// Wire layouts handled by parse_bolt7 (after the 2-byte big-endian type):
//
//   256 channel_announcement
//       4 x 64-byte signatures | u16 flen | features[flen] | chain_hash[32]
//       | short_channel_id u64 | node_id_1[33] | node_id_2[33]
//       | bitcoin_key_1[33] | bitcoin_key_2[33]
//   257 node_announcement
//       signature[64] | u16 flen | features[flen] | timestamp u32 | node_id[33]
//       | rgb_color[3] | alias[32] | u16 addrlen | addresses[addrlen]
//   258 channel_update
//       signature[64] | chain_hash[32] | short_channel_id u64 | timestamp u32
//       | message_flags u8 | channel_flags u8 | cltv_expiry_delta u16
//       | htlc_minimum_msat u64 | fee_base_msat u32 | fee_proportional_millionths u32
//       | [htlc_maximum_msat u64, when message_flags bit 0 is set]
//
// Signatures are skipped by length and never verified. Trailing bytes after the
// fixed layout are ignored.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lntopo {

using UnixTime = std::int64_t;
using NodeId = std::array<std::uint8_t, 33>;
using ChainHash = std::array<std::uint8_t, 32>;

std::string node_id_hex(const NodeId& id);
std::optional<NodeId> parse_node_id(std::string_view hex);

struct ShortChannelId {
  std::uint32_t block_height = 0;  // 24 bits
  std::uint32_t tx_index = 0;      // 24 bits
  std::uint16_t output_index = 0;

  static constexpr ShortChannelId unpack(std::uint64_t packed) {
    return ShortChannelId{static_cast<std::uint32_t>(packed >> 40),
                          static_cast<std::uint32_t>((packed >> 16) & 0xFFFFFF),
                          static_cast<std::uint16_t>(packed & 0xFFFF)};
  }
  constexpr std::uint64_t pack() const {
    return (std::uint64_t{block_height & 0xFFFFFF} << 40) |
           (std::uint64_t{tx_index & 0xFFFFFF} << 16) | output_index;
  }

  friend constexpr auto operator<=>(const ShortChannelId& a, const ShortChannelId& b) {
    return a.pack() <=> b.pack();
  }
  friend constexpr bool operator==(const ShortChannelId& a, const ShortChannelId& b) {
    return a.pack() == b.pack();
  }
};

struct NodeAnnouncement {
  NodeId node_id{};
  UnixTime timestamp = 0;
  std::array<std::uint8_t, 32> alias{};  // zero-padded UTF-8
  std::array<std::uint8_t, 3> rgb_color{};
  std::vector<std::uint8_t> features;
  std::vector<std::uint8_t> addresses;  // opaque address descriptors

  /// Alias bytes with the zero padding stripped.
  std::string alias_text() const;
  void set_alias(std::string_view text);

  bool operator==(const NodeAnnouncement&) const = default;
};

struct ChannelAnnouncement {
  ShortChannelId short_channel_id;
  NodeId node_id_1{};
  NodeId node_id_2{};
  NodeId bitcoin_key_1{};
  NodeId bitcoin_key_2{};
  ChainHash chain_hash{};
  std::vector<std::uint8_t> features;

  bool operator==(const ChannelAnnouncement&) const = default;
};

struct ChannelUpdate {
  ShortChannelId short_channel_id;
  UnixTime timestamp = 0;
  std::uint8_t message_flags = 0;
  std::uint8_t channel_flags = 0;
  std::uint32_t cltv_expiry_delta = 0;
  std::uint64_t htlc_minimum_msat = 0;
  std::uint64_t fee_base_msat = 0;
  std::uint64_t fee_proportional_millionths = 0;
  std::optional<std::uint64_t> htlc_maximum_msat;
  ChainHash chain_hash{};

  int direction() const { return channel_flags & 0x01; }
  bool disabled() const { return (channel_flags & 0x02) != 0; }

  bool operator==(const ChannelUpdate&) const = default;
};

enum class GossipKind : std::uint8_t {
  node_announcement = 0,
  channel_announcement = 1,
  channel_update = 2,
};

std::string_view to_string(GossipKind kind) noexcept;

struct GossipRecord {
  // Alternative order mirrors GossipKind, so kind() is always consistent.
  std::variant<NodeAnnouncement, ChannelAnnouncement, ChannelUpdate> payload;
  UnixTime received_at = 0;

  GossipKind kind() const { return static_cast<GossipKind>(payload.index()); }

  /// Ordering time: the message timestamp for node_announcement and
  /// channel_update, received_at for channel_announcement (which carries none).
  UnixTime time() const;

  bool operator==(const GossipRecord&) const = default;
};

enum class ParseMode { lenient, strict };

/// Decodes one BOLT#7 payload (type prefix included). received_at defaults to
/// the message timestamp where one exists.
GossipRecord parse_bolt7(std::span<const std::uint8_t> bytes, ParseMode mode = ParseMode::lenient,
                         UnixTime received_at = 0);

/// Encodes the fixed layout back to wire bytes; signatures are written as zeros.
std::vector<std::uint8_t> serialize_bolt7(const GossipRecord& record);

struct RecordBatch {
  std::vector<GossipRecord> records;
  std::size_t skipped = 0;
};

// Line format, one record per line, tab-separated:
//   CU scid ts direction disabled cltv htlc_min fee_base fee_ppm htlc_max|-
//   CA scid node_id_1 node_id_2 ts
//   NA node_id ts alias_base64|-
std::optional<GossipRecord> parse_record_line(std::string_view line);
std::string format_record_line(const GossipRecord& record);

RecordBatch read_records(std::istream& in, ParseMode mode = ParseMode::lenient);
RecordBatch read_records(const std::filesystem::path& path, ParseMode mode = ParseMode::lenient);
void write_records(std::ostream& out, std::span<const GossipRecord> records);

/// Hex-encoded payloads, one per line.
RecordBatch read_hex_payloads(std::istream& in, ParseMode mode = ParseMode::lenient);
/// Raw stream of (u16 big-endian length, payload) frames.
RecordBatch read_length_prefixed(std::istream& in, ParseMode mode = ParseMode::lenient);

enum class RecordFormat { lines, hex, binary };
std::optional<RecordFormat> parse_record_format(std::string_view name);
RecordBatch read_records(const std::filesystem::path& path, RecordFormat format, ParseMode mode);

/// Newest-wins deduplication per key (node_id / scid / (scid, direction)),
/// ties resolved by last occurrence, then sorted by (time, kind, key).
std::vector<GossipRecord> dedup_and_order(std::span<const GossipRecord> records);

/// Same ordering as dedup_and_order but keeps every distinct update, dropping
/// only exact repeats. Snapshot series need the update history.
std::vector<GossipRecord> order_records(std::span<const GossipRecord> records);

}  // namespace lntopo

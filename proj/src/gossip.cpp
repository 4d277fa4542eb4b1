#include "lntopo/gossip.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "lntopo/encoding.hpp"
#include "lntopo/error.hpp"

namespace lntopo {
namespace {

constexpr std::uint16_t kChannelAnnouncement = 256;
constexpr std::uint16_t kNodeAnnouncement = 257;
constexpr std::uint16_t kChannelUpdate = 258;
constexpr std::size_t kSignatureSize = 64;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n, const char* field) {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::Truncated, std::string("payload ends inside ") + field);
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint64_t uint(std::size_t width, const char* field) {
    std::uint64_t v = 0;
    for (std::uint8_t b : take(width, field)) v = (v << 8) | b;
    return v;
  }

  template <std::size_t N>
  std::array<std::uint8_t, N> array(const char* field) {
    std::array<std::uint8_t, N> out{};
    auto src = take(N, field);
    std::copy(src.begin(), src.end(), out.begin());
    return out;
  }

  std::vector<std::uint8_t> vec(std::size_t n, const char* field) {
    auto src = take(n, field);
    return {src.begin(), src.end()};
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

class ByteWriter {
 public:
  void uint(std::uint64_t v, std::size_t width) {
    for (std::size_t i = width; i > 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * (i - 1))));
  }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void zeros(std::size_t n) { out_.insert(out_.end(), n, 0); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

void malformed_if(bool cond, ParseMode mode, const char* what) {
  if (cond && mode == ParseMode::strict) throw Error(ErrorCode::MalformedField, what);
}

ChannelAnnouncement parse_channel_announcement(ByteReader& r, ParseMode mode) {
  ChannelAnnouncement ca;
  r.take(4 * kSignatureSize, "signatures");
  const auto flen = r.uint(2, "features length");
  ca.features = r.vec(flen, "features");
  ca.chain_hash = r.array<32>("chain_hash");
  ca.short_channel_id = ShortChannelId::unpack(r.uint(8, "short_channel_id"));
  ca.node_id_1 = r.array<33>("node_id_1");
  ca.node_id_2 = r.array<33>("node_id_2");
  ca.bitcoin_key_1 = r.array<33>("bitcoin_key_1");
  ca.bitcoin_key_2 = r.array<33>("bitcoin_key_2");
  malformed_if(!(ca.node_id_1 < ca.node_id_2), mode, "node_id_1 must sort before node_id_2");
  return ca;
}

NodeAnnouncement parse_node_announcement(ByteReader& r, ParseMode mode) {
  NodeAnnouncement na;
  r.take(kSignatureSize, "signature");
  const auto flen = r.uint(2, "features length");
  na.features = r.vec(flen, "features");
  na.timestamp = static_cast<UnixTime>(r.uint(4, "timestamp"));
  na.node_id = r.array<33>("node_id");
  na.rgb_color = r.array<3>("rgb_color");
  na.alias = r.array<32>("alias");
  const auto addrlen = r.uint(2, "addresses length");
  na.addresses = r.vec(addrlen, "addresses");
  malformed_if(na.timestamp == 0, mode, "node_announcement timestamp is zero");
  return na;
}

ChannelUpdate parse_channel_update(ByteReader& r, ParseMode mode) {
  ChannelUpdate cu;
  r.take(kSignatureSize, "signature");
  cu.chain_hash = r.array<32>("chain_hash");
  cu.short_channel_id = ShortChannelId::unpack(r.uint(8, "short_channel_id"));
  cu.timestamp = static_cast<UnixTime>(r.uint(4, "timestamp"));
  cu.message_flags = static_cast<std::uint8_t>(r.uint(1, "message_flags"));
  cu.channel_flags = static_cast<std::uint8_t>(r.uint(1, "channel_flags"));
  cu.cltv_expiry_delta = static_cast<std::uint32_t>(r.uint(2, "cltv_expiry_delta"));
  cu.htlc_minimum_msat = r.uint(8, "htlc_minimum_msat");
  cu.fee_base_msat = r.uint(4, "fee_base_msat");
  cu.fee_proportional_millionths = r.uint(4, "fee_proportional_millionths");
  if (cu.message_flags & 0x01) cu.htlc_maximum_msat = r.uint(8, "htlc_maximum_msat");
  malformed_if((cu.message_flags & 0xFE) != 0, mode, "reserved message_flags bits set");
  malformed_if((cu.channel_flags & 0xFC) != 0, mode, "reserved channel_flags bits set");
  malformed_if(cu.htlc_maximum_msat && *cu.htlc_maximum_msat < cu.htlc_minimum_msat, mode,
               "htlc_maximum_msat below htlc_minimum_msat");
  return cu;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim_eol(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  return line;
}

using RecordKey = std::tuple<GossipKind, NodeId, std::uint64_t, int>;

RecordKey key_of(const GossipRecord& r) {
  return std::visit(
      [&](const auto& p) -> RecordKey {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NodeAnnouncement>) {
          return {r.kind(), p.node_id, 0, 0};
        } else if constexpr (std::is_same_v<T, ChannelAnnouncement>) {
          return {r.kind(), NodeId{}, p.short_channel_id.pack(), 0};
        } else {
          return {r.kind(), NodeId{}, p.short_channel_id.pack(), p.direction()};
        }
      },
      r.payload);
}

bool order_less(const GossipRecord& a, const GossipRecord& b) {
  if (a.time() != b.time()) return a.time() < b.time();
  return key_of(a) < key_of(b);
}

}  // namespace

std::string node_id_hex(const NodeId& id) { return to_hex(id); }

std::optional<NodeId> parse_node_id(std::string_view hex) {
  auto bytes = from_hex(hex);
  if (!bytes || bytes->size() != 33) return std::nullopt;
  NodeId id{};
  std::copy(bytes->begin(), bytes->end(), id.begin());
  return id;
}

std::string NodeAnnouncement::alias_text() const {
  std::size_t len = alias.size();
  while (len > 0 && alias[len - 1] == 0) --len;
  return std::string(alias.begin(), alias.begin() + static_cast<std::ptrdiff_t>(len));
}

void NodeAnnouncement::set_alias(std::string_view text) {
  alias.fill(0);
  const auto n = std::min(text.size(), alias.size());
  std::copy_n(text.begin(), n, alias.begin());
}

std::string_view to_string(GossipKind kind) noexcept {
  switch (kind) {
    case GossipKind::node_announcement: return "node_announcement";
    case GossipKind::channel_announcement: return "channel_announcement";
    case GossipKind::channel_update: return "channel_update";
  }
  return "unknown";
}

UnixTime GossipRecord::time() const {
  if (auto* na = std::get_if<NodeAnnouncement>(&payload)) return na->timestamp;
  if (auto* cu = std::get_if<ChannelUpdate>(&payload)) return cu->timestamp;
  return received_at;
}

GossipRecord parse_bolt7(std::span<const std::uint8_t> bytes, ParseMode mode, UnixTime received_at) {
  ByteReader reader(bytes);
  const auto type = static_cast<std::uint16_t>(reader.uint(2, "message type"));
  GossipRecord record;
  switch (type) {
    case kChannelAnnouncement:
      record.payload = parse_channel_announcement(reader, mode);
      record.received_at = received_at;
      break;
    case kNodeAnnouncement: {
      auto na = parse_node_announcement(reader, mode);
      record.received_at = received_at != 0 ? received_at : na.timestamp;
      record.payload = std::move(na);
      break;
    }
    case kChannelUpdate: {
      auto cu = parse_channel_update(reader, mode);
      record.received_at = received_at != 0 ? received_at : cu.timestamp;
      record.payload = std::move(cu);
      break;
    }
    default:
      throw Error(ErrorCode::UnknownType, "message type " + std::to_string(type));
  }
  return record;
}

std::vector<std::uint8_t> serialize_bolt7(const GossipRecord& record) {
  ByteWriter w;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ChannelAnnouncement>) {
          w.uint(kChannelAnnouncement, 2);
          w.zeros(4 * kSignatureSize);
          w.uint(p.features.size(), 2);
          w.bytes(p.features);
          w.bytes(p.chain_hash);
          w.uint(p.short_channel_id.pack(), 8);
          w.bytes(p.node_id_1);
          w.bytes(p.node_id_2);
          w.bytes(p.bitcoin_key_1);
          w.bytes(p.bitcoin_key_2);
        } else if constexpr (std::is_same_v<T, NodeAnnouncement>) {
          w.uint(kNodeAnnouncement, 2);
          w.zeros(kSignatureSize);
          w.uint(p.features.size(), 2);
          w.bytes(p.features);
          w.uint(static_cast<std::uint64_t>(p.timestamp), 4);
          w.bytes(p.node_id);
          w.bytes(p.rgb_color);
          w.bytes(p.alias);
          w.uint(p.addresses.size(), 2);
          w.bytes(p.addresses);
        } else {
          w.uint(kChannelUpdate, 2);
          w.zeros(kSignatureSize);
          w.bytes(p.chain_hash);
          w.uint(p.short_channel_id.pack(), 8);
          w.uint(static_cast<std::uint64_t>(p.timestamp), 4);
          const std::uint8_t mflags =
              p.htlc_maximum_msat ? (p.message_flags | 0x01) : (p.message_flags & 0xFE);
          w.uint(mflags, 1);
          w.uint(p.channel_flags, 1);
          w.uint(p.cltv_expiry_delta, 2);
          w.uint(p.htlc_minimum_msat, 8);
          w.uint(p.fee_base_msat, 4);
          w.uint(p.fee_proportional_millionths, 4);
          if (p.htlc_maximum_msat) w.uint(*p.htlc_maximum_msat, 8);
        }
      },
      record.payload);
  return w.take();
}

std::optional<GossipRecord> parse_record_line(std::string_view line) {
  const auto f = split_tabs(trim_eol(line));
  if (f.empty()) return std::nullopt;
  GossipRecord record;
  if (f[0] == "CU" && f.size() == 10) {
    ChannelUpdate cu;
    auto scid = parse_number<std::uint64_t>(f[1]);
    auto ts = parse_number<UnixTime>(f[2]);
    auto dir = parse_number<int>(f[3]);
    auto disabled = parse_number<int>(f[4]);
    auto cltv = parse_number<std::uint32_t>(f[5]);
    auto hmin = parse_number<std::uint64_t>(f[6]);
    auto base = parse_number<std::uint64_t>(f[7]);
    auto ppm = parse_number<std::uint64_t>(f[8]);
    if (!scid || !ts || !dir || !disabled || !cltv || !hmin || !base || !ppm) return std::nullopt;
    if (*dir < 0 || *dir > 1 || *disabled < 0 || *disabled > 1 || *ts < 0) return std::nullopt;
    if (f[9] != "-") {
      auto hmax = parse_number<std::uint64_t>(f[9]);
      if (!hmax || *hmax < *hmin) return std::nullopt;
      cu.htlc_maximum_msat = *hmax;
      cu.message_flags = 0x01;
    }
    cu.short_channel_id = ShortChannelId::unpack(*scid);
    cu.timestamp = *ts;
    cu.channel_flags = static_cast<std::uint8_t>(*dir | (*disabled << 1));
    cu.cltv_expiry_delta = *cltv;
    cu.htlc_minimum_msat = *hmin;
    cu.fee_base_msat = *base;
    cu.fee_proportional_millionths = *ppm;
    record.received_at = cu.timestamp;
    record.payload = std::move(cu);
    return record;
  }
  if (f[0] == "CA" && f.size() == 5) {
    ChannelAnnouncement ca;
    auto scid = parse_number<std::uint64_t>(f[1]);
    auto n1 = parse_node_id(f[2]);
    auto n2 = parse_node_id(f[3]);
    auto ts = parse_number<UnixTime>(f[4]);
    if (!scid || !n1 || !n2 || !ts || *ts < 0 || *n1 == *n2) return std::nullopt;
    ca.short_channel_id = ShortChannelId::unpack(*scid);
    ca.node_id_1 = std::min(*n1, *n2);
    ca.node_id_2 = std::max(*n1, *n2);
    record.received_at = *ts;
    record.payload = std::move(ca);
    return record;
  }
  if (f[0] == "NA" && f.size() == 4) {
    NodeAnnouncement na;
    auto id = parse_node_id(f[1]);
    auto ts = parse_number<UnixTime>(f[2]);
    if (!id || !ts || *ts < 0) return std::nullopt;
    if (f[3] != "-") {
      auto alias = base64_decode(f[3]);
      if (!alias || alias->size() > na.alias.size()) return std::nullopt;
      na.set_alias(*alias);
    }
    na.node_id = *id;
    na.timestamp = *ts;
    record.received_at = *ts;
    record.payload = std::move(na);
    return record;
  }
  return std::nullopt;
}

std::string format_record_line(const GossipRecord& record) {
  std::ostringstream out;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ChannelUpdate>) {
          out << "CU\t" << p.short_channel_id.pack() << '\t' << p.timestamp << '\t' << p.direction()
              << '\t' << (p.disabled() ? 1 : 0) << '\t' << p.cltv_expiry_delta << '\t'
              << p.htlc_minimum_msat << '\t' << p.fee_base_msat << '\t'
              << p.fee_proportional_millionths << '\t';
          if (p.htlc_maximum_msat) {
            out << *p.htlc_maximum_msat;
          } else {
            out << '-';
          }
        } else if constexpr (std::is_same_v<T, ChannelAnnouncement>) {
          out << "CA\t" << p.short_channel_id.pack() << '\t' << node_id_hex(p.node_id_1) << '\t'
              << node_id_hex(p.node_id_2) << '\t' << record.received_at;
        } else {
          const auto alias = p.alias_text();
          out << "NA\t" << node_id_hex(p.node_id) << '\t' << p.timestamp << '\t'
              << (alias.empty() ? std::string("-") : base64_encode(alias));
        }
      },
      record.payload);
  return out.str();
}

RecordBatch read_records(std::istream& in, ParseMode mode) {
  RecordBatch batch;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_eol(line).empty()) continue;
    auto record = parse_record_line(line);
    if (!record) {
      if (mode == ParseMode::strict) throw Error(ErrorCode::Malformed, line_no, "bad record line");
      ++batch.skipped;
      continue;
    }
    batch.records.push_back(std::move(*record));
  }
  if (in.bad()) throw Error(ErrorCode::Io, "stream read failed");
  return batch;
}

RecordBatch read_records(const std::filesystem::path& path, ParseMode mode) {
  return read_records(path, RecordFormat::lines, mode);
}

void write_records(std::ostream& out, std::span<const GossipRecord> records) {
  for (const auto& r : records) out << format_record_line(r) << '\n';
}

RecordBatch read_hex_payloads(std::istream& in, ParseMode mode) {
  RecordBatch batch;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim_eol(line);
    if (text.empty()) continue;
    try {
      auto bytes = from_hex(text);
      if (!bytes) throw Error(ErrorCode::Malformed, line_no, "invalid hex");
      batch.records.push_back(parse_bolt7(*bytes, mode));
    } catch (const Error& e) {
      if (mode == ParseMode::strict) throw Error(ErrorCode::Malformed, line_no, e.what());
      ++batch.skipped;
    }
  }
  if (in.bad()) throw Error(ErrorCode::Io, "stream read failed");
  return batch;
}

RecordBatch read_length_prefixed(std::istream& in, ParseMode mode) {
  RecordBatch batch;
  std::size_t frame = 0;
  while (true) {
    std::array<char, 2> header{};
    in.read(header.data(), 2);
    if (in.gcount() == 0) break;
    ++frame;
    if (in.gcount() != 2) {
      if (mode == ParseMode::strict) throw Error(ErrorCode::Malformed, frame, "truncated frame header");
      ++batch.skipped;
      break;
    }
    const std::size_t len = (std::uint8_t(header[0]) << 8) | std::uint8_t(header[1]);
    std::vector<std::uint8_t> payload(len);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(len));
    if (static_cast<std::size_t>(in.gcount()) != len) {
      if (mode == ParseMode::strict) throw Error(ErrorCode::Malformed, frame, "truncated frame");
      ++batch.skipped;
      break;
    }
    try {
      batch.records.push_back(parse_bolt7(payload, mode));
    } catch (const Error& e) {
      if (mode == ParseMode::strict) throw Error(ErrorCode::Malformed, frame, e.what());
      ++batch.skipped;
    }
  }
  if (in.bad()) throw Error(ErrorCode::Io, "stream read failed");
  return batch;
}

std::optional<RecordFormat> parse_record_format(std::string_view name) {
  if (name == "lines") return RecordFormat::lines;
  if (name == "hex") return RecordFormat::hex;
  if (name == "binary") return RecordFormat::binary;
  return std::nullopt;
}

RecordBatch read_records(const std::filesystem::path& path, RecordFormat format, ParseMode mode) {
  std::ifstream in(path, format == RecordFormat::binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  switch (format) {
    case RecordFormat::lines: return read_records(in, mode);
    case RecordFormat::hex: return read_hex_payloads(in, mode);
    case RecordFormat::binary: return read_length_prefixed(in, mode);
  }
  return {};
}

std::vector<GossipRecord> dedup_and_order(std::span<const GossipRecord> records) {
  std::map<RecordKey, std::size_t> newest;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, inserted] = newest.try_emplace(key_of(records[i]), i);
    if (!inserted && records[i].time() >= records[it->second].time()) it->second = i;
  }
  std::vector<GossipRecord> out;
  out.reserve(newest.size());
  for (const auto& [key, index] : newest) out.push_back(records[index]);
  std::sort(out.begin(), out.end(), order_less);
  return out;
}

std::vector<GossipRecord> order_records(std::span<const GossipRecord> records) {
  std::vector<GossipRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(), order_less);
  std::vector<GossipRecord> out;
  out.reserve(sorted.size());
  std::size_t run_start = 0;
  for (auto& r : sorted) {
    if (!out.empty() && order_less(out.back(), r)) run_start = out.size();
    const bool repeat = std::any_of(out.begin() + static_cast<std::ptrdiff_t>(run_start), out.end(),
                                    [&](const GossipRecord& o) { return o == r; });
    if (!repeat) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace lntopo

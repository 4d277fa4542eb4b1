#include <doctest.h>

#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "lntopo/encoding.hpp"
#include "lntopo/error.hpp"
#include "lntopo/gossip.hpp"
#include "lntopo/random.hpp"

using namespace lntopo;

namespace {

void put(std::vector<std::uint8_t>& out, std::uint64_t v, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

std::vector<std::uint8_t> channel_update_bytes(std::uint64_t scid, std::uint32_t ts, std::uint8_t mflags,
                                               std::uint8_t cflags, std::uint16_t cltv, std::uint64_t hmin,
                                               std::uint32_t base, std::uint32_t ppm, std::uint64_t hmax) {
  std::vector<std::uint8_t> b;
  put(b, 258, 2);
  b.insert(b.end(), 64, 0xAA);  // signature
  b.insert(b.end(), 32, 0x11);  // chain hash
  put(b, scid, 8);
  put(b, ts, 4);
  put(b, mflags, 1);
  put(b, cflags, 1);
  put(b, cltv, 2);
  put(b, hmin, 8);
  put(b, base, 4);
  put(b, ppm, 4);
  if (mflags & 1) put(b, hmax, 8);
  return b;
}

}  // namespace

TEST_CASE("short channel id packs and unpacks") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = rng.next();
    CHECK(ShortChannelId::unpack(x).pack() == x);
  }
  const auto s = ShortChannelId::unpack((std::uint64_t{700000} << 40) | (std::uint64_t{1234} << 16) | 5);
  CHECK(s.block_height == 700000);
  CHECK(s.tx_index == 1234);
  CHECK(s.output_index == 5);
}

TEST_CASE("channel_update decodes hand-packed fields") {
  const std::string hex =
      "0102" + std::string(128, 'a') + std::string(64, '1') +
      "0a00000100020003"  // scid
      "5f5e1000"          // timestamp
      "01"                // message_flags: htlc_max present
      "01"                // channel_flags: direction 1
      "0028"              // cltv
      "0000000000000001"  // htlc_min
      "000003e8"          // fee_base
      "00000064"          // fee ppm
      "000000003b9aca00"; // htlc_max
  const auto bytes = from_hex(hex);
  REQUIRE(bytes);
  const auto rec = parse_bolt7(*bytes);
  REQUIRE(rec.kind() == GossipKind::channel_update);
  const auto& cu = std::get<ChannelUpdate>(rec.payload);
  CHECK(cu.timestamp == 1600000000);
  CHECK(cu.cltv_expiry_delta == 40);
  CHECK(cu.fee_base_msat == 1000);
  CHECK(cu.fee_proportional_millionths == 100);
  CHECK(cu.htlc_minimum_msat == 1);
  REQUIRE(cu.htlc_maximum_msat);
  CHECK(*cu.htlc_maximum_msat == 1000000000);
  CHECK(cu.direction() == 1);
  CHECK_FALSE(cu.disabled());
  CHECK(cu.short_channel_id.pack() == 0x0a00000100020003ULL);
  CHECK(rec.received_at == 1600000000);
}

TEST_CASE("parse errors") {
  const std::vector<std::uint8_t> only_type{0x01, 0x01};
  CHECK(code_of([&] { parse_bolt7(only_type); }) == ErrorCode::Truncated);
  const std::vector<std::uint8_t> unknown{0x01, 0x03, 0, 0, 0};
  CHECK(code_of([&] { parse_bolt7(unknown); }) == ErrorCode::UnknownType);
  const std::vector<std::uint8_t> one{0x01};
  CHECK(code_of([&] { parse_bolt7(one); }) == ErrorCode::Truncated);

  auto reserved = channel_update_bytes(1, 100, 0, 0x04, 6, 1, 0, 0, 0);
  CHECK_NOTHROW(parse_bolt7(reserved));
  CHECK(code_of([&] { parse_bolt7(reserved, ParseMode::strict); }) == ErrorCode::MalformedField);
  auto inverted = channel_update_bytes(1, 100, 1, 0, 6, 500, 0, 0, 10);
  CHECK(code_of([&] { parse_bolt7(inverted, ParseMode::strict); }) == ErrorCode::MalformedField);
}

TEST_CASE("trailing bytes are ignored") {
  auto b = channel_update_bytes(42, 100, 0, 1, 6, 1, 2, 3, 0);
  const auto base = parse_bolt7(b);
  b.insert(b.end(), {1, 2, 3, 4});
  CHECK(parse_bolt7(b) == base);
}

TEST_CASE("serialize inverts parse for every kind") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    auto b = channel_update_bytes(rng.next(), static_cast<std::uint32_t>(1 + rng.uniform_index(1u << 30)),
                                  static_cast<std::uint8_t>(rng.uniform_index(2)),
                                  static_cast<std::uint8_t>(rng.uniform_index(4)),
                                  static_cast<std::uint16_t>(rng.uniform_index(65536)), rng.uniform_index(1000),
                                  static_cast<std::uint32_t>(rng.next()), static_cast<std::uint32_t>(rng.next()),
                                  1000 + rng.uniform_index(1000));
    std::fill(b.begin() + 2, b.begin() + 66, 0);  // serializer writes zero signatures
    CHECK(serialize_bolt7(parse_bolt7(b)) == b);
  }
  const auto ca = fixtures::ca(fixtures::scid(650000, 12, 1), 3, 9, 500);
  auto ca_bytes = serialize_bolt7(ca);
  auto ca_back = parse_bolt7(ca_bytes, ParseMode::strict, 500);
  CHECK(ca_back == ca);
  const auto na = fixtures::na(5, 1234, "alice");
  auto na_back = parse_bolt7(serialize_bolt7(na), ParseMode::strict);
  CHECK(na_back == na);
  CHECK(std::get<NodeAnnouncement>(na_back.payload).alias_text() == "alice");
}

TEST_CASE("truncations of valid payloads report Truncated") {
  const auto full = serialize_bolt7(fixtures::ca(fixtures::scid(1), 1, 2, 10));
  for (std::size_t len = 2; len < full.size(); ++len) {
    std::vector<std::uint8_t> cut(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(len));
    CHECK(code_of([&] { parse_bolt7(cut); }) == ErrorCode::Truncated);
  }
}

TEST_CASE("record lines round-trip") {
  const std::vector<GossipRecord> recs{
      fixtures::ca(fixtures::scid(10), 1, 2, 100),
      fixtures::cu(fixtures::scid(10), 150, {.direction = 1, .disabled = true, .htlc_max = 5000}),
      fixtures::cu(fixtures::scid(10), 160),
      fixtures::na(1, 170, "n\tode"),
      fixtures::na(2, 180),
  };
  std::stringstream ss;
  write_records(ss, recs);
  const auto batch = read_records(ss, ParseMode::strict);
  CHECK(batch.skipped == 0);
  CHECK(batch.records == recs);
}

TEST_CASE("read_records lenient and strict") {
  std::stringstream empty;
  const auto none = read_records(empty);
  CHECK(none.records.empty());
  CHECK(none.skipped == 0);

  std::string text;
  text += format_record_line(fixtures::ca(fixtures::scid(10), 1, 2, 100)) + "\n";
  text += format_record_line(fixtures::cu(fixtures::scid(10), 150)) + "\n";
  text += format_record_line(fixtures::na(1, 170)) + "\n";
  text += "CU\tnot-a-number\n";
  std::stringstream lenient(text);
  const auto batch = read_records(lenient);
  CHECK(batch.records.size() == 3);
  CHECK(batch.skipped == 1);

  std::stringstream strict(text);
  try {
    read_records(strict, ParseMode::strict);
    FAIL("expected Malformed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Malformed);
    CHECK(e.line() == 4);
  }
}

TEST_CASE("hex and length-prefixed payload files") {
  const std::vector<GossipRecord> recs{fixtures::cu(fixtures::scid(5), 300), fixtures::na(4, 400, "x")};
  std::stringstream hex;
  std::stringstream bin;
  for (const auto& r : recs) {
    const auto b = serialize_bolt7(r);
    hex << to_hex(b) << "\n";
    bin.put(static_cast<char>(b.size() >> 8));
    bin.put(static_cast<char>(b.size() & 0xFF));
    bin.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  }
  hex << "zz\n";
  const auto h = read_hex_payloads(hex);
  CHECK(h.records == recs);
  CHECK(h.skipped == 1);
  const auto l = read_length_prefixed(bin);
  CHECK(l.records == recs);
  CHECK(l.skipped == 0);
}

TEST_CASE("dedup keeps the newest record per key") {
  const auto id = fixtures::scid(10);
  const auto old_u = fixtures::cu(id, 10);
  const auto new_u = fixtures::cu(id, 20);
  const std::vector<GossipRecord> two{old_u, new_u};
  const auto out = dedup_and_order(two);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == new_u);

  const std::vector<GossipRecord> same{new_u, new_u};
  CHECK(dedup_and_order(same).size() == 1);

  // Equal timestamps: last occurrence wins.
  const auto a = fixtures::cu(id, 30, {.fee_base = 1});
  const auto b = fixtures::cu(id, 30, {.fee_base = 2});
  const std::vector<GossipRecord> tie{a, b};
  CHECK(dedup_and_order(tie) == std::vector<GossipRecord>{b});
}

TEST_CASE("dedup matches a last-write-wins map") {
  const std::vector<GossipRecord> mixed{
      fixtures::na(1, 50, "a"), fixtures::cu(fixtures::scid(7), 40), fixtures::na(1, 60, "b"),
      fixtures::cu(fixtures::scid(7), 45), fixtures::ca(fixtures::scid(7), 1, 2, 5),
  };
  const auto out = dedup_and_order(mixed);
  CHECK(out.size() == 3);

  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<GossipRecord> recs;
    for (int i = 0; i < 40; ++i) {
      const auto t = static_cast<UnixTime>(1 + rng.uniform_index(20));
      switch (rng.uniform_index(3)) {
        case 0: recs.push_back(fixtures::na(static_cast<std::uint32_t>(rng.uniform_index(4)), t, std::to_string(i))); break;
        case 1: recs.push_back(fixtures::ca(fixtures::scid(static_cast<std::uint32_t>(rng.uniform_index(4))), 1, 2, t)); break;
        default:
          recs.push_back(fixtures::cu(fixtures::scid(static_cast<std::uint32_t>(rng.uniform_index(4))), t,
                                      {.direction = static_cast<int>(rng.uniform_index(2)),
                                       .fee_base = static_cast<std::uint64_t>(i)}));
      }
    }
    std::map<std::string, GossipRecord> latest;
    for (const auto& r : recs) {
      std::string key = std::string(to_string(r.kind()));
      if (auto* n = std::get_if<NodeAnnouncement>(&r.payload)) key += node_id_hex(n->node_id);
      if (auto* c = std::get_if<ChannelAnnouncement>(&r.payload)) key += std::to_string(c->short_channel_id.pack());
      if (auto* u = std::get_if<ChannelUpdate>(&r.payload)) {
        key += std::to_string(u->short_channel_id.pack()) + "/" + std::to_string(u->direction());
      }
      auto it = latest.find(key);
      if (it == latest.end() || r.time() >= it->second.time()) latest.insert_or_assign(key, r);
    }
    const auto got = dedup_and_order(recs);
    REQUIRE(got.size() == latest.size());
    for (const auto& [key, r] : latest) CHECK(std::find(got.begin(), got.end(), r) != got.end());
    for (std::size_t i = 1; i < got.size(); ++i) CHECK(got[i - 1].time() <= got[i].time());
    CHECK(dedup_and_order(got) == got);
  }
}

TEST_CASE("order_records keeps history and drops exact repeats") {
  const auto u1 = fixtures::cu(fixtures::scid(3), 20);
  const auto u2 = fixtures::cu(fixtures::scid(3), 10);
  const std::vector<GossipRecord> recs{u1, u2, u1};
  const auto out = order_records(recs);
  CHECK(out == std::vector<GossipRecord>{u2, u1});
}

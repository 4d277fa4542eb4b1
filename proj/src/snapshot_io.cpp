#include <algorithm>
#include <fstream>
#include <sstream>

#include "lntopo/csv.hpp"
#include "lntopo/encoding.hpp"
#include "lntopo/error.hpp"
#include "lntopo/snapshot.hpp"

namespace lntopo {
namespace {

constexpr std::string_view kNodesHeader = "node_id_hex,alias_base64";
constexpr std::string_view kChannelsHeader =
    "scid_u64,node_a_hex,node_b_hex,"
    "dirA_fee_base,dirA_fee_ppm,dirA_cltv,dirA_htlc_min,dirA_htlc_max,dirA_disabled,dirA_last_update,"
    "dirB_fee_base,dirB_fee_ppm,dirB_cltv,dirB_htlc_min,dirB_htlc_max,dirB_disabled,dirB_last_update";
constexpr std::size_t kPolicyColumns = 7;

void write_policy(std::ostream& out, const std::optional<ChannelPolicy>& p) {
  if (!p) {
    for (std::size_t i = 0; i < kPolicyColumns; ++i) out << ",-";
    return;
  }
  out << ',' << p->fee_base_msat << ',' << p->fee_proportional_millionths << ',' << p->cltv_expiry_delta << ','
      << p->htlc_minimum_msat << ',';
  if (p->htlc_maximum_msat) {
    out << *p->htlc_maximum_msat;
  } else {
    out << '-';
  }
  out << ',' << (p->disabled ? 1 : 0) << ',' << p->last_update;
}

[[noreturn]] void schema_error(const std::filesystem::path& file, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::SchemaMismatch, line, file.string() + ": " + what);
}

template <class T>
T field(std::string_view s, const std::filesystem::path& file, std::size_t line) {
  auto v = parse_number<T>(s);
  if (!v) schema_error(file, line, "bad number '" + std::string(s) + "'");
  return *v;
}

std::optional<ChannelPolicy> read_policy(std::span<const std::string_view> cols, int direction,
                                         const std::filesystem::path& file, std::size_t line) {
  const bool all_absent = std::all_of(cols.begin(), cols.end(), [](auto c) { return c == "-"; });
  if (all_absent) return std::nullopt;
  ChannelPolicy p;
  p.direction = direction;
  p.fee_base_msat = field<std::uint64_t>(cols[0], file, line);
  p.fee_proportional_millionths = field<std::uint64_t>(cols[1], file, line);
  p.cltv_expiry_delta = field<std::uint32_t>(cols[2], file, line);
  p.htlc_minimum_msat = field<std::uint64_t>(cols[3], file, line);
  if (cols[4] != "-") p.htlc_maximum_msat = field<std::uint64_t>(cols[4], file, line);
  const auto disabled = field<int>(cols[5], file, line);
  if (disabled != 0 && disabled != 1) schema_error(file, line, "disabled must be 0 or 1");
  p.disabled = disabled == 1;
  p.last_update = field<UnixTime>(cols[6], file, line);
  return p;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

void write_snapshot(const Snapshot& s, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string());

  auto nodes = open_out(dir / "nodes.csv");
  nodes << kNodesHeader << '\n';
  for (const auto& [id, alias] : s.nodes) {
    nodes << node_id_hex(id) << ',' << (alias.empty() ? std::string("-") : base64_encode(alias)) << '\n';
  }

  auto channels = open_out(dir / "channels.csv");
  channels << "# at=" << s.at << " window=" << s.liveness_window << '\n';
  channels << kChannelsHeader << '\n';
  for (const auto& c : s.channels) {
    channels << c.scid.pack() << ',' << node_id_hex(c.endpoint_a) << ',' << node_id_hex(c.endpoint_b);
    write_policy(channels, c.policy_a);
    write_policy(channels, c.policy_b);
    channels << '\n';
  }
  if (!nodes || !channels) throw Error(ErrorCode::Io, "write failed in " + dir.string());
}

Snapshot read_snapshot(const std::filesystem::path& dir) {
  Snapshot s;
  const auto nodes_path = dir / "nodes.csv";
  const auto channels_path = dir / "channels.csv";

  auto nodes = open_in(nodes_path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(nodes, line) || trim(line) != kNodesHeader) schema_error(nodes_path, 1, "bad header");
  line_no = 1;
  while (std::getline(nodes, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split(trim(line), ',');
    if (cols.size() != 2) schema_error(nodes_path, line_no, "expected 2 columns");
    auto id = parse_node_id(cols[0]);
    if (!id) schema_error(nodes_path, line_no, "bad node id");
    std::string alias;
    if (cols[1] != "-") {
      auto decoded = base64_decode(cols[1]);
      if (!decoded) schema_error(nodes_path, line_no, "bad alias encoding");
      alias = *decoded;
    }
    if (!s.nodes.emplace(*id, alias).second) schema_error(nodes_path, line_no, "duplicate node id");
  }

  auto channels = open_in(channels_path);
  line_no = 0;
  bool header_seen = false;
  while (std::getline(channels, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::istringstream meta{std::string(text.substr(1))};
      std::string token;
      while (meta >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const auto key = std::string_view(token).substr(0, eq);
        const auto value = std::string_view(token).substr(eq + 1);
        if (key == "at") s.at = field<UnixTime>(value, channels_path, line_no);
        if (key == "window") s.liveness_window = field<std::int64_t>(value, channels_path, line_no);
      }
      continue;
    }
    if (!header_seen) {
      if (text != kChannelsHeader) schema_error(channels_path, line_no, "bad header");
      header_seen = true;
      continue;
    }
    const auto cols = split(text, ',');
    if (cols.size() != 3 + 2 * kPolicyColumns) schema_error(channels_path, line_no, "expected 17 columns");
    Channel c;
    c.scid = ShortChannelId::unpack(field<std::uint64_t>(cols[0], channels_path, line_no));
    auto a = parse_node_id(cols[1]);
    auto b = parse_node_id(cols[2]);
    if (!a || !b) schema_error(channels_path, line_no, "bad endpoint id");
    c.endpoint_a = *a;
    c.endpoint_b = *b;
    const std::span<const std::string_view> all(cols);
    c.policy_a = read_policy(all.subspan(3, kPolicyColumns), 0, channels_path, line_no);
    c.policy_b = read_policy(all.subspan(3 + kPolicyColumns, kPolicyColumns), 1, channels_path, line_no);
    s.channels.push_back(std::move(c));
  }
  if (!header_seen) schema_error(channels_path, line_no, "missing header");

  std::sort(s.channels.begin(), s.channels.end(), [](const Channel& x, const Channel& y) { return x.scid < y.scid; });
  validate_snapshot(s);
  return s;
}

void write_series(std::span<const Snapshot> series, const std::filesystem::path& dir) {
  for (const auto& s : series) write_snapshot(s, dir / std::to_string(s.at));
}

std::vector<Snapshot> read_series(const std::filesystem::path& dir) {
  std::error_code ec;
  std::vector<std::pair<UnixTime, std::filesystem::path>> entries;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (!entry.is_directory()) continue;
    auto ts = parse_number<UnixTime>(entry.path().filename().string());
    if (ts) entries.emplace_back(*ts, entry.path());
  }
  if (ec) throw Error(ErrorCode::Io, "cannot list " + dir.string());
  std::sort(entries.begin(), entries.end());
  std::vector<Snapshot> series;
  for (const auto& [ts, path] : entries) series.push_back(read_snapshot(path));
  return series;
}

std::vector<UnixTime> read_schedule(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<UnixTime> schedule;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto ts = parse_number<UnixTime>(text);
    if (!ts) throw Error(ErrorCode::Malformed, line_no, "bad timestamp in " + path.string());
    schedule.push_back(*ts);
  }
  return schedule;
}

}  // namespace lntopo

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "lntopo/error.hpp"
#include "lntopo/routing.hpp"
#include "oracles.hpp"

using namespace lntopo;
using fixtures::policy;

namespace {

constexpr CostModelKind kModels[] = {CostModelKind::lnd, CostModelKind::ecl, CostModelKind::cln};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

Snapshot random_snapshot(std::size_t n, double p, Rng& rng) {
  const auto g = erdos_renyi(n, p, rng.next());
  return fixtures::snapshot_from_graph(g, 1000, [&](NodeIndex, NodeIndex, int dir) -> std::optional<ChannelPolicy> {
    if (rng.bernoulli(0.05)) return std::nullopt;
    auto pol = policy(dir, rng.uniform_index(3000), rng.uniform_index(2000), static_cast<std::uint32_t>(rng.uniform_index(150)),
                      rng.bernoulli(0.1) ? 200000 : 1, rng.bernoulli(0.1) ? std::optional<std::uint64_t>(50000) : std::nullopt,
                      rng.bernoulli(0.05));
    return pol;
  });
}

}  // namespace

TEST_CASE("edge cost formulas") {
  const auto p = policy(0, 1000, 100, 40);
  const auto lnd = CostModel::defaults(CostModelKind::lnd);
  CHECK(edge_cost(lnd, p, 1000000) == doctest::Approx(1000.0 + 100.0 + 1e6 * 40 * 15e-9 + 1e-6).epsilon(1e-15));
  CHECK(edge_cost(lnd, p, 1000000) == doctest::Approx(1100.600001).epsilon(1e-15));
  const auto cln = CostModel::defaults(CostModelKind::cln);
  CHECK(edge_cost(cln, p, 1000000) == doctest::Approx(1100.0 + 1e6 * 40 * 10 / (52596.0 * 100) + 1e-6).epsilon(1e-15));
  const auto ecl = CostModel::defaults(CostModelKind::ecl);
  CHECK(edge_cost(ecl, p, 1000000) == doctest::Approx(1100.0 * (1.0 + 0.15 * 40 / 2016.0) + 1e-6).epsilon(1e-15));

  const auto free = policy(0, 0, 0, 0);
  for (auto k : kModels) CHECK(edge_cost(CostModel::defaults(k), free, 123456) == 1e-6);

  const auto bounded = policy(0, 1, 1, 1, 1000, 5000);
  CHECK(code_of([&] { edge_cost(lnd, bounded, 999); }) == ErrorCode::PolicyUnusable);
  CHECK(code_of([&] { edge_cost(lnd, bounded, 5001); }) == ErrorCode::PolicyUnusable);
  CHECK_NOTHROW(edge_cost(lnd, bounded, 5000));
  CHECK(code_of([&] { edge_cost(lnd, policy(0, 1, 1, 1, 0, std::nullopt, true), 10); }) == ErrorCode::PolicyUnusable);

  for (auto k : kModels) {
    CHECK(parse_cost_model(to_string(k)) == k);
    double prev = 0.0;
    for (std::uint64_t amount = 1; amount < 1u << 30; amount *= 3) {
      const double c = edge_cost(CostModel::defaults(k), policy(0, 10, 300, 144), amount);
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("route selection") {
  // 0-3 direct but expensive; two equal two-hop arms through 1 and 2.
  const auto g = fixtures::from_edges(4, {{0, 3}, {0, 1}, {1, 3}, {0, 2}, {2, 3}});
  const auto s = fixtures::snapshot_from_graph(g, 10, [](NodeIndex u, NodeIndex v, int dir) {
    const bool direct = u == 0 && v == 3;
    return std::optional<ChannelPolicy>(policy(dir, direct ? 10000 : 100, 0, 10));
  });
  const RoutingNetwork net(s);
  const auto lnd = CostModel::defaults(CostModelKind::lnd);
  const auto r = find_route(net, {0, 3, 100000}, lnd);
  REQUIRE(r.found());
  CHECK(r.path == std::vector<NodeIndex>{0, 1, 3});
  CHECK(r.hops() == std::vector<NodeIndex>{1});
  CHECK(r.total_cost == doctest::Approx(2 * edge_cost(lnd, policy(0, 100, 0, 10), 100000)));

  const auto cheap_direct = fixtures::snapshot_from_graph(g, 10, [](NodeIndex, NodeIndex, int dir) {
    return std::optional<ChannelPolicy>(policy(dir, 100, 0, 10));
  });
  const auto direct = find_route(RoutingNetwork(cheap_direct), {0, 3, 100000}, lnd);
  CHECK(direct.path == std::vector<NodeIndex>{0, 3});
  CHECK(direct.hops().empty());

  const auto split = fixtures::snapshot_from_graph(fixtures::from_edges(4, {{0, 1}, {2, 3}}), 10);
  CHECK_FALSE(find_route(RoutingNetwork(split), {0, 3, 1000}, lnd).found());
  CHECK(find_route(split, fixtures::node_id(0), fixtures::node_id(1), 1000, lnd).found());
  CHECK(code_of([&] { find_route(split, fixtures::node_id(0), fixtures::node_id(9), 1000, lnd); }) == ErrorCode::NodeNotFound);
  CHECK(code_of([&] { find_route(RoutingNetwork(split), {0, 9, 1000}, lnd); }) == ErrorCode::NodeNotFound);
}

TEST_CASE("policies are directional") {
  const auto g = fixtures::path_graph(3);
  // Only direction 0 (lower id to higher id) is usable.
  const auto s = fixtures::snapshot_from_graph(g, 10, [](NodeIndex, NodeIndex, int dir) {
    return std::optional<ChannelPolicy>(policy(dir, 1, 1, 1, 0, std::nullopt, dir == 1));
  });
  const RoutingNetwork net(s);
  const auto lnd = CostModel::defaults(CostModelKind::lnd);
  CHECK(find_route(net, {0, 2, 1000}, lnd).found());
  CHECK_FALSE(find_route(net, {2, 0, 1000}, lnd).found());
}

TEST_CASE("Dijkstra agrees with Bellman-Ford") {
  Rng rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_snapshot(10 + rng.uniform_index(40), 0.1, rng);
    if (s.nodes.size() < 2) continue;
    const RoutingNetwork net(s);
    for (auto k : kModels) {
      const auto model = CostModel::defaults(k);
      for (int q = 0; q < 10; ++q) {
        const auto src = static_cast<NodeIndex>(rng.uniform_index(net.node_count()));
        const auto dst = static_cast<NodeIndex>(rng.uniform_index(net.node_count()));
        if (src == dst) continue;
        const std::uint64_t amount = rng.bernoulli(0.5) ? 100000 : 10000;
        const auto r = find_route(net, {src, dst, amount}, model);
        const double want = oracle::bellman_ford(net, src, dst, amount, model);
        if (std::isinf(want)) {
          CHECK_FALSE(r.found());
          continue;
        }
        REQUIRE(r.found());
        CHECK(r.total_cost == doctest::Approx(want).epsilon(1e-12));
        CHECK(r.path.front() == src);
        CHECK(r.path.back() == dst);
        // Every step uses a usable arc in travel direction.
        for (std::size_t i = 0; i + 1 < r.path.size(); ++i) {
          bool ok = false;
          for (const auto& arc : net.arcs(r.path[i])) ok |= arc.to == r.path[i + 1] && policy_usable(arc.policy, amount);
          CHECK(ok);
        }
      }
    }
  }
}

TEST_CASE("zero fees and uniform cltv make all models hop-count routing") {
  Rng rng(72);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = erdos_renyi(40, 0.08, rng.next());
    const auto s = fixtures::snapshot_from_graph(g, 1, [](NodeIndex, NodeIndex, int dir) {
      return std::optional<ChannelPolicy>(policy(dir, 0, 0, 40));
    });
    const RoutingNetwork net(s);
    SimulationConfig cfg{.n_tx = 200, .amount_msat = 100000, .seed = rng.next(), .threads = 1};
    const auto workload = uniform_workload(net.node_count(), cfg);
    for (const auto& req : workload) {
      std::vector<std::size_t> lengths;
      for (auto k : kModels) {
        const auto r = find_route(net, req, CostModel::defaults(k));
        lengths.push_back(r.found() ? r.path.size() : 0);
      }
      CHECK(lengths[0] == lengths[1]);
      CHECK(lengths[1] == lengths[2]);
    }
  }
}

TEST_CASE("simulation tallies") {
  const auto path = fixtures::snapshot_from_graph(fixtures::path_graph(3), 1);
  const RoutingNetwork net(path);
  const std::vector<PaymentRequest> work{{0, 2, 1000}, {2, 0, 1000}};
  const auto tally = simulate(net, CostModel::defaults(CostModelKind::lnd), work);
  CHECK(tally.hops == std::vector<std::uint64_t>{0, 2, 0});
  CHECK(tally.n_requests == 2);
  CHECK(tally.n_routed == 2);
  CHECK(tally.node_ids[1] == node_id_hex(fixtures::node_id(1)));

  const auto star = fixtures::snapshot_from_graph(fixtures::star_graph(8), 1);
  const auto st = simulate(star, CostModel::defaults(CostModelKind::ecl), SimulationConfig{.n_tx = 300});
  for (std::size_t v = 1; v < st.hops.size(); ++v) CHECK(st.hops[v] == 0);
  CHECK(st.hops[0] > 0);
  CHECK(st.n_requests == 300);

  const auto tiny = fixtures::snapshot_from_graph(fixtures::path_graph(1), 1);
  CHECK(code_of([&] { simulate(tiny, CostModel::defaults(CostModelKind::lnd), SimulationConfig{}); }) ==
        ErrorCode::GraphTooSmall);
}

TEST_CASE("tally conservation and determinism") {
  Rng rng(73);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_snapshot(60, 0.06, rng);
    const RoutingNetwork net(s);
    for (auto k : kModels) {
      const auto model = CostModel::defaults(k);
      SimulationConfig cfg{.n_tx = 400, .amount_msat = 20000, .seed = 5, .threads = 1};
      const auto workload = uniform_workload(net.node_count(), cfg);
      for (const auto& r : workload) CHECK(r.source != r.destination);
      const auto tally = simulate(net, model, cfg);
      std::uint64_t expected = 0;
      std::size_t routed = 0;
      std::vector<std::uint64_t> counts(net.node_count(), 0);
      for (const auto& req : workload) {
        const auto r = find_route(net, req, model);
        if (!r.found()) continue;
        ++routed;
        expected += r.path.size() - 2;
        for (auto h : r.hops()) {
          CHECK(h != req.source);
          CHECK(h != req.destination);
          ++counts[h];
        }
      }
      CHECK(std::accumulate(tally.hops.begin(), tally.hops.end(), std::uint64_t{0}) == expected);
      CHECK(tally.n_routed == routed);
      CHECK(tally.hops == counts);
      cfg.threads = 4;
      CHECK(simulate(net, model, cfg).hops == tally.hops);
    }
  }
}

TEST_CASE("hop statistics") {
  HopTally t;
  t.node_ids = {"a", "b", "c", "d"};
  t.hops = {5, 5, 5, 5};
  t.n_routed = 10;
  auto s = hop_statistics(t);
  CHECK(s.gini == doctest::Approx(0.0).epsilon(1e-15));
  for (const auto& [x, y] : s.curve) CHECK(y == doctest::Approx(x));
  CHECK(s.curve.size() == 5);
  CHECK_FALSE(s.fit);

  t.hops = {0, 0, 9, 0};
  CHECK(hop_statistics(t).gini == doctest::Approx(0.75));
  CHECK(hop_statistics(t).curve[1] == std::pair<double, double>{0.25, 1.0});

  t.hops = {1, 2, 3, 4};
  s = hop_statistics(t);
  CHECK(s.gini == 0.25);
  REQUIRE(s.fit);
  CHECK(s.curve[1].second == doctest::Approx(0.4));

  std::stringstream out;
  write_hop_statistics_csv(out, s);
  std::stringstream in(out.str());
  const auto back = read_hop_statistics_csv(in);
  REQUIRE(back.curve.size() == s.curve.size());
  for (std::size_t i = 0; i < s.curve.size(); ++i) {
    CHECK(back.curve[i].first == doctest::Approx(s.curve[i].first));
    CHECK(back.curve[i].second == doctest::Approx(s.curve[i].second));
  }
  CHECK(back.gini == doctest::Approx(s.gini));
  CHECK(back.n_routed == s.n_routed);
  REQUIRE(back.fit);
  CHECK(back.fit->alpha == doctest::Approx(s.fit->alpha));

  std::stringstream tally_out;
  t.model = CostModelKind::cln;
  write_tally_csv(tally_out, t);
  CHECK(tally_out.str().find("node_id_hex,hops\n") == 0);
  CHECK(tally_out.str().find("d,4\n") != std::string::npos);

  HopTally empty;
  CHECK(code_of([&] { hop_statistics(empty); }) == ErrorCode::EmptyTally);
}

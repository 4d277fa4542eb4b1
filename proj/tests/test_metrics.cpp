#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "lntopo/error.hpp"
#include "lntopo/metrics.hpp"
#include "oracles.hpp"

using namespace lntopo;

namespace {

double value(const TopologyGraph& g, MetricId id, const MetricParams& p = {}) { return compute(g, id, p).value(); }

ErrorCode code_of(const TopologyGraph& g, MetricId id, const MetricParams& p = {}) {
  try {
    compute(g, id, p);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("metric ids round-trip through their names") {
  CHECK(all_metrics().size() == 32);
  for (auto id : all_metrics()) {
    CHECK(parse_metric_id(to_string(id)) == id);
    CHECK(metric_arity(id) == (id == MetricId::power_law ? 2u : 1u));
  }
  CHECK_FALSE(parse_metric_id("pagerank"));
}

TEST_CASE("small graph values") {
  const auto tri = fixtures::complete_graph(3);
  CHECK(value(tri, MetricId::transitivity) == 1.0);
  const auto p3 = fixtures::path_graph(3);
  CHECK(value(p3, MetricId::global_efficiency) == doctest::Approx(2.5 / 3.0));
  CHECK(value(p3, MetricId::wiener_index) == 4.0);
  CHECK(value(p3, MetricId::diameter) == 2.0);
  CHECK(value(p3, MetricId::avg_shortest_path) == doctest::Approx(4.0 / 3.0));
  CHECK(value(p3, MetricId::density) == doctest::Approx(2.0 / 3.0));
  CHECK(value(p3, MetricId::mean_degree) == doctest::Approx(4.0 / 3.0));
  CHECK(value(fixtures::cycle_graph(7), MetricId::degree_entropy) == 0.0);
  CHECK(value(fixtures::cycle_graph(7), MetricId::bridge_count) == 0.0);
  CHECK(value(fixtures::path_graph(9), MetricId::bridge_count) == 8.0);
  CHECK(value(fixtures::star_graph(3), MetricId::degree_entropy) == doctest::Approx(-(0.25 * std::log2(0.25) + 0.75 * std::log2(0.75))));
  CHECK(value(fixtures::star_graph(3), MetricId::degree_assortativity) == doctest::Approx(-1.0));
  CHECK(value(fixtures::from_edges(5, {{0, 1}, {2, 3}}), MetricId::component_count) == 3.0);
  CHECK(value(fixtures::star_graph(4), MetricId::min_edge_cover_size) == 4.0);
  CHECK(value(fixtures::complete_graph(4), MetricId::avg_node_connectivity) == doctest::Approx(3.0));
}

TEST_CASE("distance metrics use the largest component") {
  // Path of 4 plus a separate edge.
  const auto g = fixtures::from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {4, 5}});
  CHECK(value(g, MetricId::diameter) == 3.0);
  CHECK(value(g, MetricId::wiener_index) == 10.0);
  CHECK(value(g, MetricId::avg_shortest_path) == doctest::Approx(10.0 / 6.0));
  CHECK(value(g, MetricId::node_count) == 6.0);
}

TEST_CASE("cross-metric identities") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = largest_component(erdos_renyi(5 + rng.uniform_index(20), 0.3, rng.next()));
    if (g.node_count() < 2) continue;
    const double n = static_cast<double>(g.node_count());
    CHECK(value(g, MetricId::wiener_index) ==
          doctest::Approx(n * (n - 1.0) / 2.0 * value(g, MetricId::avg_shortest_path)).epsilon(1e-12));
    const double d = value(g, MetricId::density);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    const double t = value(g, MetricId::transitivity);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
    const double gb = value(g, MetricId::gini_betweenness);
    CHECK(gb >= 0.0);
    CHECK(gb <= 1.0 - 1.0 / n + 1e-12);
    CHECK(value(g, MetricId::mean_betweenness) == doctest::Approx(
              [&] {
                const auto bc = oracle::betweenness(g);
                return std::accumulate(bc.begin(), bc.end(), 0.0) / n;
              }())
              .epsilon(1e-12));
  }
  for (std::size_t k : {2u, 4u, 6u}) {
    // Circulant k-regular graph.
    std::vector<Edge> e;
    for (NodeIndex i = 0; i < 20; ++i) {
      for (NodeIndex j = 1; j <= k / 2; ++j) e.emplace_back(i, (i + j) % 20);
    }
    const auto g = TopologyGraph::from_edges(20, e);
    CHECK(value(g, MetricId::avg_preferential_attachment_normalized) == doctest::Approx(static_cast<double>(k)));
    CHECK(value(g, MetricId::avg_preferential_attachment) == doctest::Approx(static_cast<double>(k * k)));
  }
}

TEST_CASE("gini of betweenness carries the Lorenz curve") {
  const auto mv = compute(fixtures::star_graph(4), MetricId::gini_betweenness);
  CHECK(mv.curve.size() == 6);
  CHECK(mv.curve.front() == std::pair<double, double>{0.0, 0.0});
  CHECK(mv.curve.back() == std::pair<double, double>{1.0, 1.0});
  CHECK(mv.value() == doctest::Approx(0.8));
}

TEST_CASE("power law metric has two values") {
  const auto mv = compute(barabasi_albert(2000, 2, 1), MetricId::power_law);
  REQUIRE(mv.values.size() == 2);
  CHECK(mv.values[0] > 1.0);
  CHECK(mv.values[1] > 0.5);
  CHECK(code_of(fixtures::cycle_graph(5), MetricId::power_law) == ErrorCode::DegenerateDistribution);
}

TEST_CASE("error cases") {
  const TopologyGraph empty;
  for (auto id : all_metrics()) CHECK(code_of(empty, id) == ErrorCode::EmptyGraph);
  CHECK(code_of(fixtures::cycle_graph(5), MetricId::degree_assortativity) == ErrorCode::UndefinedMetric);
  CHECK(code_of(fixtures::from_edges(1, {}), MetricId::density) == ErrorCode::UndefinedMetric);
  CHECK(code_of(fixtures::from_edges(3, {}), MetricId::avg_jaccard) == ErrorCode::NoPairs);
  CHECK(code_of(fixtures::from_edges(3, {{0, 1}}), MetricId::min_edge_cover_size) == ErrorCode::UndefinedMetric);

  MetricParams sampled;
  sampled.mode = ModePreference::sampled;
  CHECK(code_of(fixtures::cycle_graph(5), MetricId::transitivity, sampled) == ErrorCode::MetricUnsupportedInMode);
  CHECK(code_of(fixtures::cycle_graph(5), MetricId::avg_jaccard, sampled) == ErrorCode::MetricUnsupportedInMode);
  MetricParams exact_non_edges;
  exact_non_edges.mode = ModePreference::exact;
  exact_non_edges.pair_source = PairSource::sampled_non_edges(100, 1);
  CHECK(code_of(fixtures::cycle_graph(5), MetricId::avg_jaccard, exact_non_edges) == ErrorCode::MetricUnsupportedInMode);
}

TEST_CASE("modes and provenance") {
  const auto g = barabasi_albert(300, 2, 5);
  const auto exact = compute(g, MetricId::mean_betweenness);
  CHECK(exact.mode == ComputeMode::exact);
  CHECK(exact.n_samples == 0);
  CHECK_FALSE(exact.seed);

  MetricParams p;
  p.linear_cap = 100;
  p.cubic_cap = 100;
  p.n_samples = 50;
  p.seed = 9;
  for (auto id : {MetricId::mean_betweenness, MetricId::avg_shortest_path, MetricId::wiener_index,
                  MetricId::information_centrality, MetricId::communicability_betweenness,
                  MetricId::closeness_vitality, MetricId::avg_node_connectivity, MetricId::gini_betweenness}) {
    const auto a = compute(g, id, p);
    const auto b = compute(g, id, p);
    CHECK(a.mode == ComputeMode::sampled);
    CHECK(a.n_samples == 50);
    CHECK(a.seed == std::optional<std::uint64_t>{9});
    CHECK(a.values == b.values);
  }
  CHECK(compute(g, MetricId::avg_shortest_path, p).value() ==
        doctest::Approx(compute(g, MetricId::avg_shortest_path).value()).epsilon(0.1));

  MetricParams forced;
  forced.mode = ModePreference::exact;
  forced.linear_cap = 10;
  CHECK(compute(g, MetricId::mean_betweenness, forced).mode == ComputeMode::exact);

  MetricParams non_edges;
  non_edges.pair_source = PairSource::sampled_non_edges(1000, 4);
  const auto ra = compute(g, MetricId::avg_resource_allocation, non_edges);
  CHECK(ra.mode == ComputeMode::sampled);
  CHECK(ra.n_samples == 1000);
  CHECK(ra.seed == std::optional<std::uint64_t>{4});

  const auto flp = compute(g, MetricId::flp_community_count);
  CHECK(flp.mode == ComputeMode::exact);
  CHECK(flp.seed == std::optional<std::uint64_t>{1});
}

TEST_CASE("engine reuses cached work consistently") {
  const auto g = barabasi_albert(80, 3, 2);
  MetricEngine engine(g, {});
  for (auto id : all_metrics()) {
    const auto cached = engine.compute(id);
    CHECK(cached.values == compute(g, id).values);
  }
}

TEST_CASE("metric series and CSV") {
  MetricSeries s;
  const auto g = fixtures::path_graph(4);
  s.add({20, MetricId::density, compute(g, MetricId::density), std::nullopt});
  s.add({10, MetricId::power_law, MetricValue{MetricId::power_law, {2.5, 0.75}}, std::nullopt});
  MetricParams p;
  p.mode = ModePreference::sampled;
  p.n_samples = 3;
  p.seed = 17;
  s.add({10, MetricId::wiener_index, compute(g, MetricId::wiener_index, p), std::nullopt});
  s.add({20, MetricId::degree_assortativity, std::nullopt, ErrorCode::UndefinedMetric});
  CHECK_THROWS_AS(s.add({20, MetricId::density, compute(g, MetricId::density), std::nullopt}), Error);
  CHECK(s.timestamps() == std::vector<UnixTime>{10, 20});
  CHECK(s.error_count() == 1);
  REQUIRE(s.find(10, MetricId::wiener_index));
  CHECK_FALSE(s.find(10, MetricId::density));
  CHECK(s.rows().front().timestamp == 10);

  std::stringstream out;
  write_metrics_csv(out, s);
  const std::string text = out.str();
  CHECK(text.rfind("timestamp,metric_id,value,mode,n_samples,seed\n", 0) == 0);
  CHECK(text.find("10,power_law,2.5;0.75,exact,,\n") != std::string::npos);
  CHECK(text.find(",sampled,3,17\n") != std::string::npos);
  CHECK(text.find("20,degree_assortativity,UndefinedMetric,error,,\n") != std::string::npos);

  std::stringstream in(text);
  const auto back = read_metrics_csv(in);
  REQUIRE(back.rows().size() == s.rows().size());
  std::stringstream again;
  write_metrics_csv(again, back);
  CHECK(again.str() == text);
}

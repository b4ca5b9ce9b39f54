#include <random>
#include <set>
#include <vector>

#include "cellprobe/butterfly.hpp"
#include "cellprobe/fixtures.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cellprobe;
namespace oracle = cellprobe::testing;

namespace {

std::vector<std::uint64_t> path_nodes(const std::vector<ButterflyEdge>& path) {
  std::vector<std::uint64_t> nodes{path.front().lower_index};
  for (const ButterflyEdge& e : path) nodes.push_back(e.upper_index);
  return nodes;
}

Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected cellprobe::Error");
  return Errc::rejected;
}

}  // namespace

TEST_CASE("digits are least significant first") {
  const ButterflyShape shape(3, 3);
  CHECK(shape.nodes_per_layer() == 27);
  CHECK(shape.digits(5) == std::vector<unsigned>{2, 1, 0});
  CHECK(shape.from_digits({2, 1, 0}) == 5);
  CHECK(shape.digit(21, 2) == 2);
  CHECK(error_code([] { ButterflyShape(1, 2); }) == Errc::invalid_params);
  CHECK(error_code([] { ButterflyShape(2, 0); }) == Errc::invalid_params);
  CHECK(error_code([] { ButterflyShape(2, 40); }) == Errc::invalid_params);
}

TEST_CASE("edge enumeration counts and validity") {
  for (auto [b, d, expected] : {std::tuple{2u, 2u, 16u}, {2u, 1u, 4u}, {3u, 1u, 9u}, {3u, 3u, 243u}}) {
    const ButterflyShape shape(b, d);
    const auto edges = enumerate_edges(shape);
    CHECK(edges.size() == expected);
    CHECK(shape.total_edges() == expected);
    std::set<ButterflyEdge> distinct(edges.begin(), edges.end());
    CHECK(distinct.size() == edges.size());
    for (std::size_t id = 0; id < edges.size(); ++id) {
      const ButterflyEdge& e = edges[id];
      CHECK(oracle::full_butterfly_edge(b, d, e.layer, e.lower_index, e.upper_index));
      CHECK(edge_id(shape, e) == id);
    }
  }
  // The count of valid (layer, lower, upper) triples equals the enumeration.
  const ButterflyShape shape(3, 2);
  std::size_t valid = 0;
  for (unsigned layer = 0; layer < 2; ++layer) {
    for (std::uint64_t lo = 0; lo < 9; ++lo) {
      for (std::uint64_t hi = 0; hi < 9; ++hi) {
        const bool ok = is_valid_edge(shape, {layer, lo, hi});
        CHECK(ok == oracle::full_butterfly_edge(3, 2, layer, lo, hi));
        valid += ok ? 1 : 0;
      }
    }
  }
  CHECK(valid == shape.total_edges());
}

TEST_CASE("unique_path examples match a search oracle") {
  const ButterflyShape shape(2, 2);
  CHECK(path_nodes(unique_path(shape, 0, 2)) == std::vector<std::uint64_t>{0, 0, 2});
  CHECK(path_nodes(unique_path(shape, 0, 0)) == std::vector<std::uint64_t>{0, 0, 0});
  CHECK(path_nodes(unique_path(shape, 0, 3)) == std::vector<std::uint64_t>{0, 1, 3});
  CHECK(oracle::path_by_search(2, 2, 0, 2) == std::vector<std::uint64_t>{0, 0, 2});
  CHECK(oracle::path_by_search(2, 2, 0, 3) == std::vector<std::uint64_t>{0, 1, 3});
  CHECK(error_code([&] { unique_path(shape, 4, 0); }) == Errc::index_out_of_bounds);
}

TEST_CASE("exactly one path per source-sink pair") {
  for (auto [b, d] : {std::pair{2u, 1u}, {2u, 2u}, {2u, 3u}, {3u, 2u}}) {
    const ButterflyShape shape(b, d);
    for (std::uint64_t s = 0; s < shape.nodes_per_layer(); ++s) {
      const auto counts = oracle::count_paths(b, d, s);
      for (std::uint64_t t = 0; t < shape.nodes_per_layer(); ++t) {
        CHECK(counts[t] == 1);
        CHECK(path_nodes(unique_path(shape, s, t)) == oracle::path_by_search(b, d, s, t));
      }
    }
  }
}

TEST_CASE("reachability on the worked example") {
  const ReductionExample ex = reduction_example();
  CHECK(ex.graph.missing_count() == 5);
  CHECK(ex.graph.present_count() == 11);
  CHECK(oracle_reachable(ex.graph, 0, 2));
  CHECK_FALSE(oracle_reachable(ex.graph, 0, 0));
  CHECK(bfs_reachable(ex.graph, 0, 2));
  CHECK_FALSE(bfs_reachable(ex.graph, 0, 0));

  const ButterflySubgraph full(ButterflyShape(2, 2));
  for (std::uint64_t s = 0; s < 4; ++s) {
    for (std::uint64_t t = 0; t < 4; ++t) CHECK(oracle_reachable(full, s, t));
  }
}

TEST_CASE("path scan agrees with BFS on random subgraphs") {
  std::mt19937_64 rng(123);
  int graphs = 0;
  for (unsigned b : {2u, 3u}) {
    for (unsigned d = 1; d <= 3; ++d) {
      const ButterflyShape shape(b, d);
      for (int k = 0; k < 170; ++k, ++graphs) {
        const double p = static_cast<double>(rng() % 1000) / 1000.0;
        const ButterflySubgraph g = random_subgraph(shape, p, rng());
        for (const ButterflyEdge& e : g.missing_edges()) CHECK(is_valid_edge(shape, e));
        for (std::uint64_t s = 0; s < shape.nodes_per_layer(); ++s) {
          for (std::uint64_t t = 0; t < shape.nodes_per_layer(); ++t) {
            REQUIRE(oracle_reachable(g, s, t) == bfs_reachable(g, s, t));
          }
        }
      }
    }
  }
  CHECK(graphs >= 1000);
}

TEST_CASE("random_subgraph extremes and determinism") {
  const ButterflyShape shape(2, 2);
  CHECK(random_subgraph(shape, 0.0, 9).missing_count() == 0);
  CHECK(random_subgraph(shape, 1.0, 9).missing_count() == 16);
  CHECK(random_subgraph(shape, 0.3, 42).missing_edges() == random_subgraph(shape, 0.3, 42).missing_edges());
  CHECK(error_code([&] { random_subgraph(shape, 1.5, 0); }) == Errc::invalid_params);
}

TEST_CASE("JSON instances round-trip and reject bad input") {
  const ReductionExample ex = reduction_example();
  const std::string text = subgraph_to_json(ex.graph);
  const ButterflySubgraph back = subgraph_from_json(text);
  CHECK(back.shape() == ex.graph.shape());
  CHECK(back.missing_edges() == ex.graph.missing_edges());

  const ButterflySubgraph file = load_subgraph(std::string(CELLPROBE_FIXTURE_DIR) + "/figure3.json");
  CHECK(file.missing_edges() == ex.graph.missing_edges());

  auto parse_error = [](const std::string& s) { return error_code([&] { subgraph_from_json(s); }); };
  CHECK(parse_error("not json") == Errc::instance_parse_error);
  CHECK(parse_error(R"({"degree": 2, "depth": 2})") == Errc::instance_parse_error);
  CHECK(parse_error(R"({"degree": 1, "depth": 2, "missing_edges": []})") == Errc::instance_parse_error);
  CHECK(parse_error(R"({"degree": 2, "depth": -1, "missing_edges": []})") == Errc::instance_parse_error);
  CHECK(parse_error(R"({"degree": 2, "depth": 2, "missing_edges": [{"layer": 0, "lower_index": 0, "upper_index": 3}]})") ==
        Errc::instance_parse_error);
  CHECK(parse_error(R"({"degree": 2, "depth": 2, "missing_edges": [{"layer": 2, "lower_index": 0, "upper_index": 0}]})") ==
        Errc::instance_parse_error);
  CHECK(parse_error(R"({"degree": 2, "depth": 2, "missing_edges": [{"layer": 0, "lower_index": 0}]})") ==
        Errc::instance_parse_error);
  CHECK(parse_error(
            R"({"degree": 2, "depth": 2, "missing_edges": [{"layer": 0, "lower_index": 0, "upper_index": 1}, {"layer": 0, "lower_index": 0, "upper_index": 1}]})") ==
        Errc::instance_parse_error);
  CHECK(error_code([] { load_subgraph("/nonexistent/instance.json"); }) == Errc::instance_parse_error);
}

TEST_CASE("removing a non-edge is an error") {
  ButterflySubgraph g(ButterflyShape(2, 2));
  CHECK(error_code([&] { g.remove_edge({0, 0, 3}); }) == Errc::invalid_edge);
  g.remove_edge({0, 0, 1});
  g.remove_edge({0, 0, 1});
  CHECK(g.missing_count() == 1);
}

#pragma once

// Butterfly graphs of degree b and depth d. Layer i holds b^d nodes viewed
// as base-b digit vectors, least significant digit first. An edge joins
// layer i to layer i+1 when the two vectors agree everywhere except
// possibly at coordinate i.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cellprobe/error.hpp"

namespace cellprobe {

class ButterflyShape {
 public:
  // Throws invalid_params unless degree >= 2, depth >= 1 and the graph has
  // at most 2^24 nodes per layer.
  ButterflyShape(unsigned degree, unsigned depth);

  unsigned degree() const { return degree_; }
  unsigned depth() const { return depth_; }
  std::uint64_t nodes_per_layer() const { return nodes_per_layer_; }
  std::uint64_t total_edges() const { return std::uint64_t{depth_} * nodes_per_layer_ * degree_; }

  std::vector<unsigned> digits(std::uint64_t index) const;  // LSD first, length d
  std::uint64_t from_digits(const std::vector<unsigned>& digits) const;
  unsigned digit(std::uint64_t index, unsigned coordinate) const;
  std::uint64_t power(unsigned exponent) const;  // b^exponent, exponent <= d

  friend bool operator==(const ButterflyShape&, const ButterflyShape&) = default;

 private:
  unsigned degree_;
  unsigned depth_;
  std::uint64_t nodes_per_layer_;
};

struct ButterflyEdge {
  unsigned layer = 0;             // lower endpoint's layer
  std::uint64_t lower_index = 0;  // in layer `layer`
  std::uint64_t upper_index = 0;  // in layer `layer + 1`

  friend auto operator<=>(const ButterflyEdge&, const ButterflyEdge&) = default;
};

bool is_valid_edge(const ButterflyShape& shape, const ButterflyEdge& edge);

// Dense id in enumeration order: (layer, lower, upper's digit at `layer`).
std::uint64_t edge_id(const ButterflyShape& shape, const ButterflyEdge& edge);
ButterflyEdge edge_from_id(const ButterflyShape& shape, std::uint64_t id);

// All d * b^(d+1) edges, ordered by edge_id.
std::vector<ButterflyEdge> enumerate_edges(const ButterflyShape& shape);

// Out-neighbours of node `index` in layer `layer` < d.
std::vector<std::uint64_t> butterfly_successors(const ButterflyShape& shape, unsigned layer, std::uint64_t index);

// The single source-to-sink path in the full butterfly: after layer i the
// node has the sink's digits 0..i and the source's digits i+1..d-1.
std::vector<ButterflyEdge> unique_path(const ButterflyShape& shape, std::uint64_t source, std::uint64_t sink);

// A butterfly with some edges removed, stored by its missing edges.
class ButterflySubgraph {
 public:
  explicit ButterflySubgraph(ButterflyShape shape);

  const ButterflyShape& shape() const { return shape_; }

  // Throws invalid_edge for edges outside the butterfly.
  void remove_edge(const ButterflyEdge& edge);
  bool is_missing(const ButterflyEdge& edge) const;
  bool is_present(const ButterflyEdge& edge) const { return !is_missing(edge); }

  std::uint64_t missing_count() const { return missing_count_; }
  std::uint64_t present_count() const { return shape_.total_edges() - missing_count_; }
  std::vector<ButterflyEdge> missing_edges() const;  // enumeration order

  // Bit e of `mask` removes the edge with id e. For exhaustive sweeps.
  static ButterflySubgraph from_mask(ButterflyShape shape, std::uint64_t mask);

 private:
  ButterflyShape shape_;
  std::vector<bool> missing_;
  std::uint64_t missing_count_ = 0;
};

// Scans the unique path for a missing edge.
bool oracle_reachable(const ButterflySubgraph& graph, std::uint64_t source, std::uint64_t sink);

// Breadth-first search over present edges, independent of path structure.
bool bfs_reachable(const ButterflySubgraph& graph, std::uint64_t source, std::uint64_t sink);

// Each edge is missing independently with probability p. The stream is
// std::mt19937_64 seeded with `seed`; edge e (in enumeration order) is
// missing when (draw >> 11) * 2^-53 < p, so output is identical on every
// platform.
ButterflySubgraph random_subgraph(const ButterflyShape& shape, double missing_prob, std::uint64_t seed);

// JSON instance format:
//   {"degree": b, "depth": d,
//    "missing_edges": [{"layer": i, "lower_index": l, "upper_index": u}, ...]}
// Parsing throws instance_parse_error on malformed JSON, wrong types,
// invalid shape, edges violating the butterfly rule, or duplicate edges.
std::string subgraph_to_json(const ButterflySubgraph& graph);
ButterflySubgraph subgraph_from_json(const std::string& text);
ButterflySubgraph load_subgraph(const std::string& path);

}  // namespace cellprobe

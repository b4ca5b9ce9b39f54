#include "cellprobe/butterfly.hpp"

#include <deque>
#include <random>
#include <string>

#include "cellprobe/dynamic_ds.hpp"

namespace cellprobe {

namespace {

constexpr std::uint64_t kMaxNodesPerLayer = std::uint64_t{1} << 24;

void check_node(const ButterflyShape& shape, std::uint64_t index) {
  if (index >= shape.nodes_per_layer()) {
    throw Error(Errc::index_out_of_bounds, "node index " + std::to_string(index) + " outside layer of size " +
                                               std::to_string(shape.nodes_per_layer()));
  }
}

}  // namespace

ButterflyShape::ButterflyShape(unsigned degree, unsigned depth) : degree_(degree), depth_(depth) {
  if (degree < 2) throw Error(Errc::invalid_params, "degree must be at least 2");
  if (depth < 1) throw Error(Errc::invalid_params, "depth must be at least 1");
  if (depth > 64) throw Error(Errc::invalid_params, "depth too large");
  nodes_per_layer_ = checked_pow(degree, depth);
  if (nodes_per_layer_ > kMaxNodesPerLayer) {
    throw Error(Errc::invalid_params, "butterfly with " + std::to_string(nodes_per_layer_) + " nodes per layer");
  }
}

std::vector<unsigned> ButterflyShape::digits(std::uint64_t index) const {
  check_node(*this, index);
  std::vector<unsigned> out(depth_);
  for (unsigned k = 0; k < depth_; ++k) {
    out[k] = static_cast<unsigned>(index % degree_);
    index /= degree_;
  }
  return out;
}

std::uint64_t ButterflyShape::from_digits(const std::vector<unsigned>& digits) const {
  if (digits.size() != depth_) throw Error(Errc::invalid_params, "digit vector has wrong length");
  std::uint64_t index = 0;
  for (unsigned k = depth_; k-- > 0;) {
    if (digits[k] >= degree_) throw Error(Errc::invalid_params, "digit out of range");
    index = index * degree_ + digits[k];
  }
  return index;
}

unsigned ButterflyShape::digit(std::uint64_t index, unsigned coordinate) const {
  return static_cast<unsigned>((index / power(coordinate)) % degree_);
}

std::uint64_t ButterflyShape::power(unsigned exponent) const {
  if (exponent > depth_) throw Error(Errc::invalid_params, "exponent exceeds depth");
  return checked_pow(degree_, exponent);
}

bool is_valid_edge(const ButterflyShape& shape, const ButterflyEdge& edge) {
  if (edge.layer >= shape.depth()) return false;
  if (edge.lower_index >= shape.nodes_per_layer() || edge.upper_index >= shape.nodes_per_layer()) return false;
  const std::uint64_t place = shape.power(edge.layer);
  const auto without_coord = [&](std::uint64_t index) { return index - shape.digit(index, edge.layer) * place; };
  return without_coord(edge.lower_index) == without_coord(edge.upper_index);
}

std::uint64_t edge_id(const ButterflyShape& shape, const ButterflyEdge& edge) {
  if (!is_valid_edge(shape, edge)) throw Error(Errc::invalid_edge, "not a butterfly edge");
  const std::uint64_t per_layer = shape.nodes_per_layer() * shape.degree();
  return edge.layer * per_layer + edge.lower_index * shape.degree() + shape.digit(edge.upper_index, edge.layer);
}

ButterflyEdge edge_from_id(const ButterflyShape& shape, std::uint64_t id) {
  if (id >= shape.total_edges()) throw Error(Errc::invalid_edge, "edge id out of range");
  const std::uint64_t per_layer = shape.nodes_per_layer() * shape.degree();
  const auto layer = static_cast<unsigned>(id / per_layer);
  const std::uint64_t rest = id % per_layer;
  const std::uint64_t lower = rest / shape.degree();
  const std::uint64_t new_digit = rest % shape.degree();
  const std::uint64_t place = shape.power(layer);
  const std::uint64_t upper = lower - shape.digit(lower, layer) * place + new_digit * place;
  return {layer, lower, upper};
}

std::vector<ButterflyEdge> enumerate_edges(const ButterflyShape& shape) {
  std::vector<ButterflyEdge> edges;
  edges.reserve(shape.total_edges());
  for (std::uint64_t id = 0; id < shape.total_edges(); ++id) edges.push_back(edge_from_id(shape, id));
  return edges;
}

std::vector<std::uint64_t> butterfly_successors(const ButterflyShape& shape, unsigned layer, std::uint64_t index) {
  check_node(shape, index);
  if (layer >= shape.depth()) return {};
  const std::uint64_t place = shape.power(layer);
  const std::uint64_t base = index - shape.digit(index, layer) * place;
  std::vector<std::uint64_t> out;
  out.reserve(shape.degree());
  for (unsigned c = 0; c < shape.degree(); ++c) out.push_back(base + c * place);
  return out;
}

std::vector<ButterflyEdge> unique_path(const ButterflyShape& shape, std::uint64_t source, std::uint64_t sink) {
  check_node(shape, source);
  check_node(shape, sink);
  std::vector<ButterflyEdge> path;
  path.reserve(shape.depth());
  std::uint64_t current = source;
  for (unsigned i = 0; i < shape.depth(); ++i) {
    const std::uint64_t place = shape.power(i);
    const std::uint64_t next = current - shape.digit(current, i) * place + shape.digit(sink, i) * place;
    path.push_back({i, current, next});
    current = next;
  }
  return path;
}

ButterflySubgraph::ButterflySubgraph(ButterflyShape shape) : shape_(shape), missing_(shape.total_edges(), false) {}

void ButterflySubgraph::remove_edge(const ButterflyEdge& edge) {
  const std::uint64_t id = edge_id(shape_, edge);
  if (!missing_[id]) {
    missing_[id] = true;
    ++missing_count_;
  }
}

bool ButterflySubgraph::is_missing(const ButterflyEdge& edge) const { return missing_[edge_id(shape_, edge)]; }

std::vector<ButterflyEdge> ButterflySubgraph::missing_edges() const {
  std::vector<ButterflyEdge> out;
  out.reserve(missing_count_);
  for (std::uint64_t id = 0; id < missing_.size(); ++id) {
    if (missing_[id]) out.push_back(edge_from_id(shape_, id));
  }
  return out;
}

ButterflySubgraph ButterflySubgraph::from_mask(ButterflyShape shape, std::uint64_t mask) {
  if (shape.total_edges() > 64) throw Error(Errc::invalid_params, "mask form needs at most 64 edges");
  ButterflySubgraph g(shape);
  for (std::uint64_t id = 0; id < shape.total_edges(); ++id) {
    if ((mask >> id) & 1) {
      g.missing_[id] = true;
      ++g.missing_count_;
    }
  }
  return g;
}

bool oracle_reachable(const ButterflySubgraph& graph, std::uint64_t source, std::uint64_t sink) {
  for (const ButterflyEdge& e : unique_path(graph.shape(), source, sink)) {
    if (graph.is_missing(e)) return false;
  }
  return true;
}

bool bfs_reachable(const ButterflySubgraph& graph, std::uint64_t source, std::uint64_t sink) {
  const ButterflyShape& shape = graph.shape();
  check_node(shape, source);
  check_node(shape, sink);
  std::vector<bool> frontier(shape.nodes_per_layer(), false);
  frontier[source] = true;
  for (unsigned layer = 0; layer < shape.depth(); ++layer) {
    std::vector<bool> next(shape.nodes_per_layer(), false);
    for (std::uint64_t v = 0; v < shape.nodes_per_layer(); ++v) {
      if (!frontier[v]) continue;
      for (std::uint64_t u : butterfly_successors(shape, layer, v)) {
        if (graph.is_present({layer, v, u})) next[u] = true;
      }
    }
    frontier = std::move(next);
  }
  return frontier[sink];
}

ButterflySubgraph random_subgraph(const ButterflyShape& shape, double missing_prob, std::uint64_t seed) {
  if (!(missing_prob >= 0.0 && missing_prob <= 1.0)) {
    throw Error(Errc::invalid_params, "missing probability must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  ButterflySubgraph g(shape);
  for (std::uint64_t id = 0; id < shape.total_edges(); ++id) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < missing_prob) g.remove_edge(edge_from_id(shape, id));
  }
  return g;
}

}  // namespace cellprobe

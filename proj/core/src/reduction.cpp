#include "cellprobe/reduction.hpp"

#include <string>

namespace cellprobe {

UpdatePlacement edge_to_update(const ButterflyShape& shape, const ButterflyEdge& edge) {
  if (!is_valid_edge(shape, edge)) {
    throw Error(Errc::invalid_edge, "(" + std::to_string(edge.layer) + ", " + std::to_string(edge.lower_index) +
                                        ", " + std::to_string(edge.upper_index) + ") is not a butterfly edge");
  }
  const std::uint64_t b = shape.degree();
  const unsigned d = shape.depth();
  const unsigned i = edge.layer;

  std::uint64_t version_index = 0;
  for (unsigned k = d - i; k-- > 0;) version_index = version_index * b + shape.digit(edge.lower_index, i + k);

  std::uint64_t mark_index = 0;
  for (unsigned k = 0; k <= i; ++k) mark_index = mark_index * b + shape.digit(edge.upper_index, k);

  return {{d - i, version_index}, {i + 1, mark_index}};
}

ReductionInstance::ReductionInstance(ButterflyShape shape, VersionTree<MarkUpdate> versions)
    : shape_(shape), versions_(std::move(versions)), marked_(shape.degree(), shape.depth()) {}

VersionId ReductionInstance::version_id(TreeNode position) const {
  if (position.layer > shape_.depth() || position.index >= shape_.power(position.layer)) {
    throw Error(Errc::node_out_of_bounds, "version position outside R");
  }
  return static_cast<VersionId>(layer_offset(shape_.degree(), position.layer) + position.index);
}

TreeNode ReductionInstance::version_position(VersionId id) const {
  if (!versions_.contains(id)) throw Error(Errc::node_out_of_bounds, "version outside R");
  unsigned layer = 0;
  std::uint64_t offset = 0;
  while (id >= offset + shape_.power(layer)) {
    offset += shape_.power(layer);
    ++layer;
  }
  return {layer, id - offset};
}

ReductionInstance build_instance(const ButterflySubgraph& graph) {
  const ButterflyShape& shape = graph.shape();
  VersionTree<MarkUpdate> versions;
  // BFS order: children of (L, p) are (L+1, p*b + c).
  for (unsigned layer = 0; layer < shape.depth(); ++layer) {
    const std::uint64_t base = layer_offset(shape.degree(), layer);
    for (std::uint64_t p = 0; p < shape.power(layer); ++p) {
      for (unsigned c = 0; c < shape.degree(); ++c) versions.add_child(static_cast<VersionId>(base + p));
    }
  }
  for (const ButterflyEdge& e : graph.missing_edges()) {
    const UpdatePlacement placement = edge_to_update(shape, e);
    const auto id = static_cast<VersionId>(layer_offset(shape.degree(), placement.version_node.layer) +
                                           placement.version_node.index);
    versions.add_update(id, {placement.mark_target, MarkAction::mark});
  }
  return ReductionInstance(shape, std::move(versions));
}

QueryPlacement query_map(const ButterflyShape& shape, std::uint64_t source, std::uint64_t sink) {
  if (source >= shape.nodes_per_layer() || sink >= shape.nodes_per_layer()) {
    throw Error(Errc::index_out_of_bounds, "source or sink outside layer");
  }
  std::uint64_t reversed = 0;
  for (unsigned k = 0; k < shape.depth(); ++k) reversed = reversed * shape.degree() + shape.digit(sink, k);
  const auto version = static_cast<VersionId>(layer_offset(shape.degree(), shape.depth()) + source);
  return {version, {shape.depth(), source}, {shape.depth(), reversed}};
}

PersistentStore build_reduction_store(const ReductionInstance& instance, unsigned width) {
  return build_store(instance.version_tree(), instance.marked_tree(), width);
}

bool answer_reachability(const ReductionInstance& instance, const PersistentStore& store, std::uint64_t source,
                         std::uint64_t sink, QueryStats* stats) {
  const QueryPlacement q = query_map(instance.shape(), source, sink);
  return !persistent_query(store, instance.marked_tree(), PersistentQuery<AncestorQuery>{{q.query_leaf}, q.version},
                           stats);
}

}  // namespace cellprobe

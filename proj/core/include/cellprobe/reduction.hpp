#pragma once

// Butterfly reachability as static fully persistent marked ancestor.
//
// Both the version tree R and the marked tree T are complete b-ary trees of
// depth d. R's leaves are the sources, T's leaves the sinks. A missing edge
// (l, u) from layer i is a MARK of T-node
//     sum_{k=0..i} b^(i-k) * u[k]            in T-layer i+1
// placed in R-node
//     sum_{k=0..d-i-1} b^k * l[i+k]          in R-layer d-i,
// i.e. in the subtree of R whose leaves are exactly the sources that reach
// l. Source s reaches sink t iff T has no marked node on the root-to-leaf
// path of t at version s.

#include <cstdint>
#include <vector>

#include "cellprobe/butterfly.hpp"
#include "cellprobe/dynamic_ds.hpp"
#include "cellprobe/persistence.hpp"

namespace cellprobe {

struct UpdatePlacement {
  TreeNode version_node;  // position in R
  TreeNode mark_target;   // position in T

  friend bool operator==(const UpdatePlacement&, const UpdatePlacement&) = default;
};

// Throws invalid_edge when `edge` is not an edge of `shape`.
UpdatePlacement edge_to_update(const ButterflyShape& shape, const ButterflyEdge& edge);

class ReductionInstance {
 public:
  ReductionInstance(ButterflyShape shape, VersionTree<MarkUpdate> versions);

  const ButterflyShape& shape() const { return shape_; }
  const VersionTree<MarkUpdate>& version_tree() const { return versions_; }
  const MarkedAncestorTree& marked_tree() const { return marked_; }

  // R-nodes are numbered in BFS order: (L, p) -> offset(L) + p.
  VersionId version_id(TreeNode position) const;
  TreeNode version_position(VersionId id) const;

 private:
  ButterflyShape shape_;
  VersionTree<MarkUpdate> versions_;
  MarkedAncestorTree marked_;
};

// One MARK per missing edge, in edge enumeration order within each R-node.
ReductionInstance build_instance(const ButterflySubgraph& graph);

struct QueryPlacement {
  VersionId version;     // R-leaf of the source
  TreeNode version_leaf;  // (d, source)
  TreeNode query_leaf;    // (d, digit reversal of sink)
};

// Throws index_out_of_bounds for indices >= b^d.
QueryPlacement query_map(const ButterflyShape& shape, std::uint64_t source, std::uint64_t sink);

// Builds the persistent store of an instance over its marked tree.
PersistentStore build_reduction_store(const ReductionInstance& instance, unsigned width = 0);

bool answer_reachability(const ReductionInstance& instance, const PersistentStore& store, std::uint64_t source,
                         std::uint64_t sink, QueryStats* stats = nullptr);

}  // namespace cellprobe

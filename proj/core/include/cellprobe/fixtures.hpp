#pragma once

// Small worked instances used by the demo, the tests and the acceptance run.

#include <string>
#include <vector>

#include "cellprobe/butterfly.hpp"
#include "cellprobe/dynamic_ds.hpp"
#include "cellprobe/persistence.hpp"

namespace cellprobe {

struct LabeledEdge {
  std::string label;
  ButterflyEdge edge;
};

// b = 2, d = 2 subgraph with five missing edges e_1..e_5. Sources s_1..s_4
// and sinks t_1..t_4 are layer indices 0..3.
struct ReductionExample {
  ButterflySubgraph graph;
  std::vector<LabeledEdge> missing;  // e_1..e_5 in label order
};

ReductionExample reduction_example();

// Four-version tree: the root writes x to one cell, its only child has two
// children of which the first writes y. DFS times are root 1/8, child 2/7,
// writer 3/4, reader 5/6. The cell starts as the zero word z.
struct TraversalExample {
  VersionTree<RegisterWrite> tree;
  RegisterFile registers;
  Address cell = 0;
  CellWord x;
  CellWord y;
  CellWord z;
  VersionId root = 0;
  VersionId middle = 0;
  VersionId writer = 0;
  VersionId reader = 0;
};

TraversalExample traversal_example();

}  // namespace cellprobe
